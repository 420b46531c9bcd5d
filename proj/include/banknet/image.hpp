#ifndef BANKNET_IMAGE_HPP
#define BANKNET_IMAGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "banknet/errors.hpp"

namespace banknet {

// 8-bit RGB image, row-major, channels interleaved.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels; // height * width * 3

    Image() = default;
    Image(int h, int w) : height(h), width(w), pixels(checked_size(h, w), 0) {}

    std::uint8_t& at(int y, int x, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int y, int x, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    bool operator==(const Image& o) const {
        return height == o.height && width == o.width && pixels == o.pixels;
    }

  private:
    // Validates before the pixel vector allocates.
    static std::size_t checked_size(int h, int w) {
        if (h < 1 || w < 1) throw ShapeError("image extents must be >= 1");
        return static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * 3;
    }
};

inline std::uint8_t clamp_u8(double v) {
    const long long r = std::llround(v);
    return static_cast<std::uint8_t>(std::clamp<long long>(r, 0, 255));
}

// ---------------------------------------------------------------------------
// Binary PPM (P6), maxval 255 only.
// ---------------------------------------------------------------------------

namespace detail {
// Reads the next ASCII integer in a PPM header, skipping whitespace and
// '#' comments.
inline int ppm_read_int(std::istream& in, const std::string& path) {
    int ch = in.get();
    while (ch != EOF && (std::isspace(ch) || ch == '#')) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch)) throw IoError("ppm: malformed header in " + path);
    int v = 0;
    while (ch != EOF && std::isdigit(ch)) {
        v = v * 10 + (ch - '0');
        ch = in.get();
    }
    if (ch == EOF) throw IoError("ppm: truncated header in " + path);
    in.unget();
    return v;
}
} // namespace detail

inline Image load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("ppm: cannot open " + path.string());
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P' || m1 != '6') throw IoError("ppm: bad magic in " + path.string());
    const int w = detail::ppm_read_int(in, path.string());
    const int h = detail::ppm_read_int(in, path.string());
    const int maxval = detail::ppm_read_int(in, path.string());
    if (maxval != 255) {
        throw IoError("ppm: unsupported maxval " + std::to_string(maxval) + " in " + path.string());
    }
    in.get(); // single whitespace byte before the payload
    Image img(h, w);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw IoError("ppm: truncated payload in " + path.string());
    }
    return img;
}

inline void save_ppm(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("ppm: cannot write " + path.string());
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw IoError("ppm: write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Bilinear resize. Half-pixel centers: target pixel (i,j) samples the source
// at ((j+0.5)*w/tw - 0.5, (i+0.5)*h/th - 0.5), clamped, so resizing to the
// own size is the identity.
// ---------------------------------------------------------------------------

inline Image resize_bilinear(const Image& src, int th, int tw) {
    if (th < 1 || tw < 1) throw ShapeError("resize: target extents must be >= 1");
    if (th == src.height && tw == src.width) return src;
    Image dst(th, tw);
    const double sy = static_cast<double>(src.height) / th;
    const double sx = static_cast<double>(src.width) / tw;
    for (int i = 0; i < th; ++i) {
        const double fy = (i + 0.5) * sy - 0.5;
        const double fyc = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
        const int y0 = static_cast<int>(std::floor(fyc));
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = fyc - y0;
        for (int j = 0; j < tw; ++j) {
            const double fx = (j + 0.5) * sx - 0.5;
            const double fxc = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
            const int x0 = static_cast<int>(std::floor(fxc));
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = fxc - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = src.at(y0, x0, c) * (1.0 - wx) + src.at(y0, x1, c) * wx;
                const double bot = src.at(y1, x0, c) * (1.0 - wx) + src.at(y1, x1, c) * wx;
                dst.at(i, j, c) = clamp_u8(top * (1.0 - wy) + bot * wy);
            }
        }
    }
    return dst;
}

} // namespace banknet

#endif
