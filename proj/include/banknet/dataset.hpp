#ifndef BANKNET_DATASET_HPP
#define BANKNET_DATASET_HPP

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "banknet/errors.hpp"
#include "banknet/image.hpp"
#include "banknet/rng.hpp"

namespace banknet {

inline constexpr std::array<int, 5> kDenominations{1000, 2000, 5000, 10000, 20000};

enum class Side { Front, Back };

inline const char* side_name(Side s) { return s == Side::Front ? "front" : "back"; }

struct LabeledImage {
    Image image;
    int label = 0;
    Side side = Side::Front;
};

struct Dataset {
    enum class Provenance { Synthetic, External };

    std::vector<LabeledImage> items;
    int class_count = 5;
    Provenance provenance = Provenance::External;
};

struct SplitSpec {
    double test_fraction = 0.33;
    double val_fraction_of_train = 0.33;
    bool stratified = true;
    std::uint64_t seed = 0;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

struct SplitResult {
    Dataset train;
    Dataset val;
    Dataset test;
};

// ---------------------------------------------------------------------------
// Splitting. Test first (round(frac * n) per class when stratified), then the
// validation cut from the remaining pool with the same rule. Indices within
// each part are sorted ascending.
// ---------------------------------------------------------------------------

inline SplitIndices split_indices(const std::vector<int>& labels, int class_count, const SplitSpec& spec) {
    if (spec.test_fraction <= 0.0 || spec.test_fraction >= 1.0 || spec.val_fraction_of_train <= 0.0 ||
        spec.val_fraction_of_train >= 1.0) {
        throw ConfigError("split: fractions must be in (0,1)");
    }
    Rng rng = make_rng(spec.seed, {stream::kSplit});
    SplitIndices out;
    auto cut = [&](std::vector<std::size_t>& pool) {
        banknet::shuffle(pool, rng);
        const auto n_test =
            static_cast<std::size_t>(std::llround(spec.test_fraction * static_cast<double>(pool.size())));
        out.test.insert(out.test.end(), pool.begin(), pool.begin() + n_test);
        const std::size_t rem = pool.size() - n_test;
        const auto n_val =
            static_cast<std::size_t>(std::llround(spec.val_fraction_of_train * static_cast<double>(rem)));
        out.val.insert(out.val.end(), pool.begin() + n_test, pool.begin() + n_test + n_val);
        out.train.insert(out.train.end(), pool.begin() + n_test + n_val, pool.end());
    };

    if (spec.stratified) {
        for (int c = 0; c < class_count; ++c) {
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == c) pool.push_back(i);
            }
            if (pool.size() < 3) {
                throw ConfigError("split: class " + std::to_string(c) + " has " +
                                  std::to_string(pool.size()) + " items, need >= 3 for stratification");
            }
            cut(pool);
        }
    } else {
        std::vector<std::size_t> pool(labels.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
        cut(pool);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

inline std::vector<int> dataset_labels(const Dataset& ds) {
    std::vector<int> labels;
    labels.reserve(ds.items.size());
    for (const auto& it : ds.items) labels.push_back(it.label);
    return labels;
}

inline Dataset subset(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.class_count = ds.class_count;
    out.provenance = ds.provenance;
    out.items.reserve(idx.size());
    for (std::size_t i : idx) out.items.push_back(ds.items[i]);
    return out;
}

inline SplitResult split(const Dataset& ds, const SplitSpec& spec) {
    const SplitIndices idx = split_indices(dataset_labels(ds), ds.class_count, spec);
    return SplitResult{subset(ds, idx.train), subset(ds, idx.val), subset(ds, idx.test)};
}

inline Dataset resized(const Dataset& ds, int h, int w) {
    Dataset out;
    out.class_count = ds.class_count;
    out.provenance = ds.provenance;
    out.items.reserve(ds.items.size());
    for (const auto& it : ds.items) {
        out.items.push_back({resize_bilinear(it.image, h, w), it.label, it.side});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic banknote generator. Each class gets a distinctive template: a
// unique base hue, a unique geometric motif and the denomination numeral in
// blocky digit strokes; backs mirror the layout. Per-sample uniform noise of
// amplitude +-3 keeps samples distinct while staying far below the
// inter-class template distance.
// ---------------------------------------------------------------------------

namespace synth {

inline constexpr int kCanvas = 150;
inline constexpr int kNoiseAmplitude = 3;

inline constexpr std::array<std::array<int, 3>, 5> kBaseColor{{
    {40, 150, 60},   // $1000 green
    {135, 60, 160},  // $2000 purple
    {200, 50, 45},   // $5000 red
    {35, 90, 185},   // $10000 blue
    {230, 150, 40},  // $20000 orange
}};

// 3x5 blocky digit cells for the digits appearing in denominations.
inline const std::array<std::uint16_t, 10>& digit_rows() {
    // Each digit packs 5 rows of 3 bits, top row in the high bits.
    static const std::array<std::uint16_t, 10> table = [] {
        std::array<std::uint16_t, 10> t{};
        auto pack = [](const char* rows) {
            std::uint16_t v = 0;
            for (int i = 0; i < 15; ++i) v = static_cast<std::uint16_t>((v << 1) | (rows[i] == '1'));
            return v;
        };
        t[0] = pack("111101101101111");
        t[1] = pack("010110010010111");
        t[2] = pack("111001111100111");
        t[3] = pack("111001111001111");
        t[4] = pack("101101111001001");
        t[5] = pack("111100111001111");
        t[6] = pack("111100111101111");
        t[7] = pack("111001010010010");
        t[8] = pack("111101111101111");
        t[9] = pack("111101111001111");
        return t;
    }();
    return table;
}

inline void draw_digit(Image& img, int digit, int x0, int y0, int cell, std::uint8_t r, std::uint8_t g,
                       std::uint8_t b) {
    const std::uint16_t rows = digit_rows()[static_cast<std::size_t>(digit)];
    for (int ry = 0; ry < 5; ++ry) {
        for (int rx = 0; rx < 3; ++rx) {
            if (!((rows >> (14 - (ry * 3 + rx))) & 1)) continue;
            for (int y = y0 + ry * cell; y < y0 + (ry + 1) * cell; ++y) {
                for (int x = x0 + rx * cell; x < x0 + (rx + 1) * cell; ++x) {
                    if (y < 0 || y >= img.height || x < 0 || x >= img.width) continue;
                    img.at(y, x, 0) = r;
                    img.at(y, x, 1) = g;
                    img.at(y, x, 2) = b;
                }
            }
        }
    }
}

inline void draw_number(Image& img, int value, int x0, int y0, int cell) {
    const std::string digits = std::to_string(value);
    int x = x0;
    for (char ch : digits) {
        draw_digit(img, ch - '0', x, y0, cell, 245, 245, 240);
        x += 3 * cell + cell; // glyph plus one cell of gap
    }
}

inline void fill_rect(Image& img, int y0, int x0, int y1, int x1, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b) {
    for (int y = std::max(0, y0); y < std::min(img.height, y1); ++y) {
        for (int x = std::max(0, x0); x < std::min(img.width, x1); ++x) {
            img.at(y, x, 0) = r;
            img.at(y, x, 1) = g;
            img.at(y, x, 2) = b;
        }
    }
}

inline void draw_motif(Image& img, int cls, int cx, int cy) {
    const auto& base = kBaseColor[static_cast<std::size_t>(cls)];
    const auto r = static_cast<std::uint8_t>(255 - base[0]);
    const auto g = static_cast<std::uint8_t>(255 - base[1]);
    const auto b = static_cast<std::uint8_t>(255 - base[2]);
    switch (cls) {
        case 0: { // filled disc
            const int rad = 20;
            for (int y = cy - rad; y <= cy + rad; ++y) {
                for (int x = cx - rad; x <= cx + rad; ++x) {
                    if (y < 0 || y >= img.height || x < 0 || x >= img.width) continue;
                    const int dy = y - cy, dx = x - cx;
                    if (dy * dy + dx * dx <= rad * rad) {
                        img.at(y, x, 0) = r;
                        img.at(y, x, 1) = g;
                        img.at(y, x, 2) = b;
                    }
                }
            }
            break;
        }
        case 1: { // diamond
            const int rad = 24;
            for (int y = cy - rad; y <= cy + rad; ++y) {
                for (int x = cx - rad; x <= cx + rad; ++x) {
                    if (y < 0 || y >= img.height || x < 0 || x >= img.width) continue;
                    if (std::abs(y - cy) + std::abs(x - cx) <= rad) {
                        img.at(y, x, 0) = r;
                        img.at(y, x, 1) = g;
                        img.at(y, x, 2) = b;
                    }
                }
            }
            break;
        }
        case 2: // horizontal bars
            for (int bar = 0; bar < 3; ++bar) {
                fill_rect(img, cy - 21 + bar * 16, cx - 24, cy - 21 + bar * 16 + 8, cx + 24, r, g, b);
            }
            break;
        case 3: // checker blocks
            for (int by = 0; by < 3; ++by) {
                for (int bx = 0; bx < 3; ++bx) {
                    if ((by + bx) % 2) continue;
                    fill_rect(img, cy - 21 + by * 14, cx - 21 + bx * 14, cy - 21 + by * 14 + 14,
                              cx - 21 + bx * 14 + 14, r, g, b);
                }
            }
            break;
        default: // diagonal stripes
            for (int y = cy - 24; y <= cy + 24; ++y) {
                for (int x = cx - 24; x <= cx + 24; ++x) {
                    if (y < 0 || y >= img.height || x < 0 || x >= img.width) continue;
                    const int d = (y - cy) - (x - cx);
                    if ((d >= -20 && d <= -8) || (d >= 4 && d <= 16)) {
                        img.at(y, x, 0) = r;
                        img.at(y, x, 1) = g;
                        img.at(y, x, 2) = b;
                    }
                }
            }
            break;
    }
}

inline Image class_template(int cls, Side side) {
    Image img(kCanvas, kCanvas);
    const auto& base = kBaseColor[static_cast<std::size_t>(cls)];
    for (int y = 0; y < kCanvas; ++y) {
        const double f = 0.72 + 0.5 * static_cast<double>(y) / (kCanvas - 1);
        for (int x = 0; x < kCanvas; ++x) {
            for (int c = 0; c < 3; ++c) img.at(y, x, c) = clamp_u8(base[c] * f);
        }
    }
    // frame
    const auto fr = static_cast<std::uint8_t>(base[0] * 45 / 100);
    const auto fg = static_cast<std::uint8_t>(base[1] * 45 / 100);
    const auto fb = static_cast<std::uint8_t>(base[2] * 45 / 100);
    fill_rect(img, 4, 4, 7, kCanvas - 4, fr, fg, fb);
    fill_rect(img, kCanvas - 7, 4, kCanvas - 4, kCanvas - 4, fr, fg, fb);
    fill_rect(img, 4, 4, kCanvas - 4, 7, fr, fg, fb);
    fill_rect(img, 4, kCanvas - 7, kCanvas - 4, kCanvas - 4, fr, fg, fb);

    const bool front = side == Side::Front;
    const int motif_x = front ? 42 : kCanvas - 1 - 42;
    draw_motif(img, cls, motif_x, 62);
    const int denom = kDenominations[static_cast<std::size_t>(cls)];
    const int digits = static_cast<int>(std::to_string(denom).size());
    const int cell = 5;
    const int text_w = digits * 3 * cell + (digits - 1) * cell;
    const int text_x = front ? kCanvas - 14 - text_w : 14;
    draw_number(img, denom, text_x, 112, cell);
    return img;
}

} // namespace synth

inline Dataset generate_synthetic(int class_count, int per_class, std::uint64_t seed) {
    if (class_count < 1 || class_count > 5) throw ValueError("generate_synthetic: class_count must be 1..5");
    if (per_class < 2) throw ValueError("generate_synthetic: per_class must be >= 2");
    Dataset ds;
    ds.class_count = class_count;
    ds.provenance = Dataset::Provenance::Synthetic;
    const int fronts = (per_class + 1) / 2;
    for (int cls = 0; cls < class_count; ++cls) {
        for (int s = 0; s < 2; ++s) {
            const Side side = s == 0 ? Side::Front : Side::Back;
            const Image tmpl = synth::class_template(cls, side);
            const int count = s == 0 ? fronts : per_class - fronts;
            for (int serial = 0; serial < count; ++serial) {
                Rng rng = make_rng(seed, {stream::kGenerator, static_cast<std::uint64_t>(cls),
                                          static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(serial)});
                LabeledImage item{tmpl, cls, side};
                for (auto& v : item.image.pixels) {
                    const auto noise =
                        static_cast<int>(uniform_int(rng, -synth::kNoiseAmplitude, synth::kNoiseAmplitude));
                    v = static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + noise, 0, 255));
                }
                ds.items.push_back(std::move(item));
            }
        }
    }
    return ds;
}

// ---------------------------------------------------------------------------
// On-disk layout: <root>/<class>_<denomination>/<side>_<serial>.ppm plus a
// manifest.tsv (path, label, side) that is trusted over directory scanning
// when present.
// ---------------------------------------------------------------------------

inline std::string class_dir_name(int cls) {
    return std::to_string(cls) + "_" + std::to_string(kDenominations[static_cast<std::size_t>(cls)]);
}

inline void write_dataset(const Dataset& ds, const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root);
    std::vector<int> serial(static_cast<std::size_t>(ds.class_count) * 2, 0);
    std::ostringstream manifest;
    for (const auto& item : ds.items) {
        const std::string dir = class_dir_name(item.label);
        fs::create_directories(root / dir);
        const std::size_t key =
            static_cast<std::size_t>(item.label) * 2 + (item.side == Side::Front ? 0 : 1);
        char name[32];
        std::snprintf(name, sizeof(name), "%s_%04d.ppm", side_name(item.side), serial[key]++);
        const std::string rel = dir + "/" + name;
        save_ppm(item.image, root / rel);
        manifest << rel << '\t' << item.label << '\t' << side_name(item.side) << '\n';
    }
    std::ofstream mf(root / "manifest.tsv", std::ios::binary);
    if (!mf) throw IoError("cannot write manifest at " + (root / "manifest.tsv").string());
    mf << manifest.str();
}

inline Dataset load_dataset(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::exists(root)) throw IoError("dataset root does not exist: " + root.string());
    Dataset ds;
    int max_label = -1;
    const fs::path manifest = root / "manifest.tsv";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest);
        if (!in) throw IoError("cannot read manifest at " + manifest.string());
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string path, label_str, side_str;
            if (!std::getline(row, path, '\t') || !std::getline(row, label_str, '\t') ||
                !std::getline(row, side_str, '\t')) {
                throw IoError("manifest: malformed line " + std::to_string(lineno));
            }
            LabeledImage item;
            item.image = load_ppm(root / path);
            item.label = std::stoi(label_str);
            if (item.label < 0) throw IoError("manifest: negative label on line " + std::to_string(lineno));
            if (side_str == "front") {
                item.side = Side::Front;
            } else if (side_str == "back") {
                item.side = Side::Back;
            } else {
                throw IoError("manifest: unknown side '" + side_str + "' on line " + std::to_string(lineno));
            }
            max_label = std::max(max_label, item.label);
            ds.items.push_back(std::move(item));
        }
    } else {
        std::vector<fs::path> dirs;
        for (const auto& e : fs::directory_iterator(root)) {
            if (e.is_directory()) dirs.push_back(e.path());
        }
        std::sort(dirs.begin(), dirs.end());
        for (const auto& dir : dirs) {
            const std::string stem = dir.filename().string();
            const auto underscore = stem.find('_');
            if (underscore == std::string::npos) continue;
            int label = 0;
            try {
                label = std::stoi(stem.substr(0, underscore));
            } catch (const std::exception&) {
                continue;
            }
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(dir)) {
                if (e.path().extension() == ".ppm") files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                LabeledImage item;
                item.image = load_ppm(f);
                item.label = label;
                item.side = f.filename().string().rfind("back", 0) == 0 ? Side::Back : Side::Front;
                max_label = std::max(max_label, label);
                ds.items.push_back(std::move(item));
            }
        }
    }
    if (ds.items.empty()) throw IoError("no dataset items under " + root.string());
    ds.class_count = max_label + 1;
    return ds;
}

} // namespace banknet

#endif
