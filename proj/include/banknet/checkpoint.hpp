#ifndef BANKNET_CHECKPOINT_HPP
#define BANKNET_CHECKPOINT_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "banknet/errors.hpp"
#include "banknet/model.hpp"

namespace banknet {

inline std::uint32_t crc32(const unsigned char* data, std::size_t n, std::uint32_t seed = 0) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = seed ^ 0xFFFFFFFFu;
    for (std::size_t i = 0; i < n; ++i) crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

namespace detail {

inline void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f32(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

// Bounds-checked little-endian reader over an in-memory checkpoint image.
struct Reader {
    const unsigned char* p;
    std::size_t n;
    std::size_t pos = 0;

    void need(std::size_t k) const {
        if (pos + k > n) throw CheckpointError(CheckpointError::Kind::Truncated, "checkpoint truncated");
    }
    std::uint16_t u16() {
        need(2);
        const std::uint16_t v = static_cast<std::uint16_t>(p[pos] | (p[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    std::string bytes(std::size_t k) {
        need(k);
        std::string s(reinterpret_cast<const char*>(p + pos), k);
        pos += k;
        return s;
    }
};

} // namespace detail

inline constexpr char kCheckpointMagic[4] = {'B', 'F', 'C', 'K'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

template <class T>
std::string serialize_checkpoint(Network<T>& net, std::uint64_t split_seed) {
    std::string out;
    out.append(kCheckpointMagic, 4);
    detail::put_u16(out, kCheckpointVersion);
    const std::string text = config_to_text(net.config()) + "split_seed " + std::to_string(split_seed) + "\n";
    detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
    out += text;
    for (const auto& nt : net.checkpoint_tensors()) {
        detail::put_u32(out, static_cast<std::uint32_t>(nt.name.size()));
        out += nt.name;
        detail::put_u32(out, static_cast<std::uint32_t>(nt.tensor->rank()));
        for (std::size_t d = 0; d < nt.tensor->rank(); ++d) {
            detail::put_u32(out, static_cast<std::uint32_t>(nt.tensor->extent(d)));
        }
        const T* data = nt.tensor->data();
        for (std::size_t i = 0; i < nt.tensor->size(); ++i) {
            detail::put_f32(out, static_cast<float>(data[i]));
        }
    }
    detail::put_u32(out, crc32(reinterpret_cast<const unsigned char*>(out.data()), out.size()));
    return out;
}

template <class T>
void save_checkpoint(Network<T>& net, const std::filesystem::path& path, std::uint64_t split_seed) {
    const std::string bytes = serialize_checkpoint(net, split_seed);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("checkpoint write failed: " + path.string());
}

template <class T>
struct LoadedCheckpoint {
    Network<T> net;
    std::uint64_t split_seed = 0;
};

template <class T>
LoadedCheckpoint<T> deserialize_checkpoint(const std::string& bytes) {
    using Kind = CheckpointError::Kind;
    detail::Reader r{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()};
    r.need(4);
    if (std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0) {
        throw CheckpointError(Kind::BadMagic, "not a checkpoint: bad magic");
    }
    r.pos = 4;
    const std::uint16_t version = r.u16();
    if (version != kCheckpointVersion) {
        throw CheckpointError(Kind::BadVersion,
                              "unsupported checkpoint version " + std::to_string(version));
    }
    const std::string text = r.bytes(r.u32());

    std::string config_text;
    std::uint64_t split_seed = 0;
    bool saw_seed = false;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("split_seed ", 0) == 0) {
            try {
                split_seed = std::stoull(line.substr(11));
            } catch (const std::exception&) {
                throw CheckpointError(Kind::BadConfig, "checkpoint: bad split_seed line");
            }
            saw_seed = true;
        } else {
            config_text += line;
            config_text += '\n';
        }
    }
    if (!saw_seed) throw CheckpointError(Kind::BadConfig, "checkpoint: missing split_seed");
    NetworkConfig cfg;
    try {
        cfg = config_from_text(config_text);
    } catch (const ConfigError& e) {
        throw CheckpointError(Kind::BadConfig, std::string("checkpoint: ") + e.what());
    }

    LoadedCheckpoint<T> out{Network<T>(cfg), split_seed};
    for (const auto& nt : out.net.checkpoint_tensors()) {
        const std::string name = r.bytes(r.u32());
        if (name != nt.name) {
            throw CheckpointError(Kind::BadConfig,
                                  "checkpoint: expected tensor '" + nt.name + "', found '" + name + "'");
        }
        const std::uint32_t rank = r.u32();
        if (rank != nt.tensor->rank()) {
            throw CheckpointError(Kind::BadConfig, "checkpoint: rank mismatch for '" + name + "'");
        }
        for (std::size_t d = 0; d < rank; ++d) {
            if (r.u32() != nt.tensor->extent(d)) {
                throw CheckpointError(Kind::BadConfig, "checkpoint: extent mismatch for '" + name + "'");
            }
        }
        T* data = nt.tensor->data();
        for (std::size_t i = 0; i < nt.tensor->size(); ++i) data[i] = static_cast<T>(r.f32());
    }
    if (r.pos + 4 > r.n) throw CheckpointError(Kind::Truncated, "checkpoint truncated before checksum");
    if (r.pos + 4 < r.n) throw CheckpointError(Kind::BadConfig, "checkpoint: trailing bytes");
    const std::uint32_t stored = r.u32();
    const std::uint32_t actual = crc32(r.p, r.n - 4);
    if (stored != actual) {
        throw CheckpointError(Kind::BadChecksum, "checkpoint checksum mismatch");
    }
    return out;
}

template <class T>
LoadedCheckpoint<T> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_checkpoint<T>(bytes);
}

} // namespace banknet

#endif
