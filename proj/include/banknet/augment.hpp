#ifndef BANKNET_AUGMENT_HPP
#define BANKNET_AUGMENT_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "banknet/errors.hpp"
#include "banknet/image.hpp"
#include "banknet/rng.hpp"

namespace banknet {

// Label-preserving image transforms. Every transform keeps the image extents
// and stays deterministic for a fixed input and parameter/seed.
struct AugmentConfig {
    double threshold = 0.1;         // probability of augmenting a given image
    double translation_max = 0.1;   // fraction of each extent
    double rotation_max_deg = 15.0;
    double scale_lo = 0.85;
    double scale_hi = 1.15;
    double brightness_delta = 0.25; // fraction of full range
    double blur_sigma_lo = 0.5;
    double blur_sigma_hi = 2.0;
    int figure_count_lo = 1;
    int figure_count_hi = 3;
    double figure_size_max = 0.2;   // fraction of min extent
    std::uint64_t seed = 0;

    void validate() const {
        if (threshold < 0.0 || threshold > 1.0) throw ValueError("augment: threshold must be in [0,1]");
        if (scale_lo <= 0.0 || scale_lo > scale_hi) throw ValueError("augment: bad scale range");
        if (translation_max < 0.0 || rotation_max_deg < 0.0 || brightness_delta < 0.0 ||
            figure_size_max < 0.0) {
            throw ValueError("augment: negative parameter bound");
        }
        if (blur_sigma_lo <= 0.0 || blur_sigma_lo > blur_sigma_hi) throw ValueError("augment: bad sigma range");
        if (figure_count_lo < 0 || figure_count_lo > figure_count_hi) {
            throw ValueError("augment: bad figure count range");
        }
    }
};

// ---------------------------------------------------------------------------

inline Image translate(const Image& img, int dx, int dy) {
    if (std::abs(dx) >= img.width || std::abs(dy) >= img.height) {
        throw ValueError("translate: shift exceeds image extents");
    }
    Image out(img.height, img.width); // zero-initialized = black fill
    for (int y = 0; y < img.height; ++y) {
        const int sy = y - dy;
        if (sy < 0 || sy >= img.height) continue;
        for (int x = 0; x < img.width; ++x) {
            const int sx = x - dx;
            if (sx < 0 || sx >= img.width) continue;
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(sy, sx, c);
        }
    }
    return out;
}

namespace detail {
// Bilinear sample with out-of-frame sources contributing black.
inline double sample_black(const Image& img, double fy, double fx, int c) {
    const int y0 = static_cast<int>(std::floor(fy));
    const int x0 = static_cast<int>(std::floor(fx));
    const double wy = fy - y0;
    const double wx = fx - x0;
    double acc = 0.0;
    for (int dy = 0; dy < 2; ++dy) {
        const int y = y0 + dy;
        if (y < 0 || y >= img.height) continue;
        const double wyv = dy ? wy : 1.0 - wy;
        for (int dx = 0; dx < 2; ++dx) {
            const int x = x0 + dx;
            if (x < 0 || x >= img.width) continue;
            const double wxv = dx ? wx : 1.0 - wx;
            acc += wyv * wxv * img.at(y, x, c);
        }
    }
    return acc;
}
} // namespace detail

// Rotation about the image center (positive = counterclockwise in x-right,
// y-up terms), bilinear, black outside the frame. 0 degrees is exact identity.
inline Image rotate(const Image& img, double angle_deg) {
    if (angle_deg == 0.0) return img;
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double co = std::cos(rad), si = std::sin(rad);
    const double cx = (img.width - 1) * 0.5, cy = (img.height - 1) * 0.5;
    Image out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double vx = x - cx, vy = y - cy;
            const double sx = cx + co * vx + si * vy;
            const double sy = cy - si * vx + co * vy;
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = clamp_u8(detail::sample_black(img, sy, sx, c));
        }
    }
    return out;
}

// Rescale about the center; >1 zooms in (content cropped), <1 shrinks
// (black border). Output extents unchanged.
inline Image scale(const Image& img, double factor) {
    if (factor <= 0.0) throw ValueError("scale: factor must be positive");
    if (factor == 1.0) return img;
    const double cx = (img.width - 1) * 0.5, cy = (img.height - 1) * 0.5;
    Image out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        const double sy = cy + (y - cy) / factor;
        for (int x = 0; x < img.width; ++x) {
            const double sx = cx + (x - cx) / factor;
            for (int c = 0; c < 3; ++c) out.at(y, x, c) = clamp_u8(detail::sample_black(img, sy, sx, c));
        }
    }
    return out;
}

// v <- clamp(v + delta*255), rounded half away from zero.
inline Image adjust_brightness(const Image& img, double delta) {
    Image out = img;
    const double shift = delta * 255.0;
    for (auto& v : out.pixels) v = clamp_u8(v + shift);
    return out;
}

// Separable Gaussian, kernel radius ceil(3*sigma), normalized to sum 1,
// clamp-to-edge borders. Rounds once, after both passes.
inline Image gaussian_blur(const Image& img, double sigma) {
    if (sigma <= 0.0) throw ValueError("gaussian_blur: sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[static_cast<std::size_t>(i + radius)];
    }
    for (double& k : kernel) k /= sum;

    const int h = img.height, w = img.width;
    std::vector<double> tmp(static_cast<std::size_t>(h) * w * 3);
    std::vector<double> tmp2(tmp.size());
    auto idx = [w](int y, int x, int c) { return (static_cast<std::size_t>(y) * w + x) * 3 + c; };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int sx = std::clamp(x + i, 0, w - 1);
                    acc += kernel[static_cast<std::size_t>(i + radius)] * img.at(y, sx, c);
                }
                tmp[idx(y, x, c)] = acc;
            }
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    const int sy = std::clamp(y + i, 0, h - 1);
                    acc += kernel[static_cast<std::size_t>(i + radius)] * tmp[idx(sy, x, c)];
                }
                tmp2[idx(y, x, c)] = acc;
            }
        }
    }
    Image out(h, w);
    for (std::size_t i = 0; i < tmp2.size(); ++i) out.pixels[i] = clamp_u8(tmp2[i]);
    return out;
}

// Draws figure_count filled shapes (rectangle, circle or line) in uniform
// random colors at uniform positions, each bounded by
// figure_size_max * min(extent).
inline Image random_figures(const Image& img, const AugmentConfig& cfg, Rng& rng) {
    Image out = img;
    const int count = static_cast<int>(uniform_int(rng, cfg.figure_count_lo, cfg.figure_count_hi));
    const int max_size =
        std::max(1, static_cast<int>(cfg.figure_size_max * std::min(img.height, img.width)));
    auto put = [&out](int y, int x, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (y < 0 || y >= out.height || x < 0 || x >= out.width) return;
        out.at(y, x, 0) = r;
        out.at(y, x, 1) = g;
        out.at(y, x, 2) = b;
    };
    for (int f = 0; f < count; ++f) {
        const int shape = static_cast<int>(uniform_int(rng, 0, 2));
        const auto r = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
        const auto g = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
        const auto b = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
        const int cx = static_cast<int>(uniform_int(rng, 0, img.width - 1));
        const int cy = static_cast<int>(uniform_int(rng, 0, img.height - 1));
        if (shape == 0) { // rectangle
            const int rw = static_cast<int>(uniform_int(rng, 1, max_size));
            const int rh = static_cast<int>(uniform_int(rng, 1, max_size));
            for (int y = cy; y < cy + rh; ++y) {
                for (int x = cx; x < cx + rw; ++x) put(y, x, r, g, b);
            }
        } else if (shape == 1) { // circle
            const int rad = static_cast<int>(uniform_int(rng, 1, std::max(1, max_size / 2)));
            for (int y = cy - rad; y <= cy + rad; ++y) {
                for (int x = cx - rad; x <= cx + rad; ++x) {
                    const int dy = y - cy, dx = x - cx;
                    if (dy * dy + dx * dx <= rad * rad) put(y, x, r, g, b);
                }
            }
        } else { // line
            const double angle = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
            const int len = static_cast<int>(uniform_int(rng, 1, max_size));
            const double ux = std::cos(angle), uy = std::sin(angle);
            for (int s = 0; s < len; ++s) {
                put(static_cast<int>(std::lround(cy + uy * s)), static_cast<int>(std::lround(cx + ux * s)),
                    r, g, b);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The random-application policy: with probability cfg.threshold, apply exactly
// one technique chosen uniformly among the six, with parameters drawn
// uniformly from the configured ranges. Returns the names of what was applied.
// ---------------------------------------------------------------------------

struct AugmentResult {
    Image image;
    std::vector<std::string> applied;
};

inline AugmentResult apply_random(const Image& img, const AugmentConfig& cfg, Rng& rng) {
    cfg.validate();
    AugmentResult res;
    if (uniform01(rng) >= cfg.threshold) {
        res.image = img;
        return res;
    }
    const int tech = static_cast<int>(uniform_int(rng, 0, 5));
    switch (tech) {
        case 0: {
            const int mx = static_cast<int>(cfg.translation_max * img.width);
            const int my = static_cast<int>(cfg.translation_max * img.height);
            const int dx = static_cast<int>(uniform_int(rng, -mx, mx));
            const int dy = static_cast<int>(uniform_int(rng, -my, my));
            res.image = translate(img, dx, dy);
            res.applied.push_back("translate");
            break;
        }
        case 1:
            res.image = rotate(img, uniform_real(rng, -cfg.rotation_max_deg, cfg.rotation_max_deg));
            res.applied.push_back("rotate");
            break;
        case 2:
            res.image = scale(img, uniform_real(rng, cfg.scale_lo, cfg.scale_hi));
            res.applied.push_back("scale");
            break;
        case 3:
            res.image =
                adjust_brightness(img, uniform_real(rng, -cfg.brightness_delta, cfg.brightness_delta));
            res.applied.push_back("brightness");
            break;
        case 4:
            res.image = gaussian_blur(img, uniform_real(rng, cfg.blur_sigma_lo, cfg.blur_sigma_hi));
            res.applied.push_back("blur");
            break;
        default:
            res.image = random_figures(img, cfg, rng);
            res.applied.push_back("figures");
            break;
    }
    return res;
}

} // namespace banknet

#endif
