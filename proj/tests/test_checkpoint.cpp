#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "banknet/checkpoint.hpp"
#include "banknet/model.hpp"
#include "banknet/rng.hpp"
#include "banknet/tensor.hpp"

using banknet::CheckpointError;
using banknet::LayerSpec;
using banknet::Mode;
using banknet::Network;
using banknet::NetworkConfig;
using banknet::Tensor;

namespace {

namespace fs = std::filesystem;

NetworkConfig small_config() {
    NetworkConfig cfg;
    cfg.input_h = 8;
    cfg.input_w = 8;
    cfg.input_c = 3;
    cfg.class_count = 3;
    cfg.layers = {LayerSpec::conv2d(2, 3, 3), LayerSpec::batchnorm(), LayerSpec::relu(),
                  LayerSpec::flatten(),       LayerSpec::dense(3),    LayerSpec::softmax()};
    return cfg;
}

template <class T>
Network<T> trained_net(std::uint64_t seed) {
    Network<T> net(small_config());
    net.init_params(seed);
    // a couple of train steps so running stats and weights move off init
    banknet::Rng rng = banknet::make_rng(seed, {99});
    Tensor<T> batch = Tensor<T>::zeros({4, 8, 8, 3});
    for (auto& v : batch.values()) v = static_cast<T>(banknet::uniform01(rng));
    banknet::Rng step = banknet::make_rng(seed, {98});
    for (int i = 0; i < 3; ++i) net.train_step(batch, {0, 1, 2, 1}, T(0.05), step);
    return net;
}

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "banknet_ckpt_tests";
    fs::create_directories(dir);
    return dir / name;
}

CheckpointError::Kind kind_of(const std::string& bytes) {
    try {
        (void)banknet::deserialize_checkpoint<float>(bytes);
    } catch (const CheckpointError& e) {
        return e.kind();
    }
    FAIL("expected a checkpoint error");
    return CheckpointError::Kind::BadMagic;
}

} // namespace

TEST_CASE("checkpoint save then load then save is byte-identical", "[checkpoint]") {
    auto net = trained_net<float>(3);
    const std::string first = banknet::serialize_checkpoint(net, 77);
    auto loaded = banknet::deserialize_checkpoint<float>(first);
    REQUIRE(loaded.split_seed == 77);
    const std::string second = banknet::serialize_checkpoint(loaded.net, loaded.split_seed);
    REQUIRE(second == first);

    // the same round trip through a file
    const auto path = temp_file("round.bfck");
    banknet::save_checkpoint(net, path, 77);
    auto from_file = banknet::load_checkpoint<float>(path);
    REQUIRE(banknet::serialize_checkpoint(from_file.net, from_file.split_seed) == first);
}

TEST_CASE("a double-precision net round-trips to identical bytes", "[checkpoint]") {
    auto net = trained_net<double>(5);
    const std::string first = banknet::serialize_checkpoint(net, 1);
    auto loaded = banknet::deserialize_checkpoint<double>(first);
    REQUIRE(banknet::serialize_checkpoint(loaded.net, 1) == first);
}

TEST_CASE("loaded checkpoints reproduce inference bit-exactly", "[checkpoint]") {
    auto net = trained_net<float>(11);
    const std::string bytes = banknet::serialize_checkpoint(net, 0);
    auto loaded = banknet::deserialize_checkpoint<float>(bytes);

    banknet::Rng rng = banknet::make_rng(11, {7});
    Tensor<float> batch = Tensor<float>::zeros({5, 8, 8, 3});
    for (auto& v : batch.values()) v = static_cast<float>(banknet::uniform01(rng));
    const Tensor<float> want = net.forward(batch, Mode::Infer);
    const Tensor<float> got = loaded.net.forward(batch, Mode::Infer);
    REQUIRE(got.values() == want.values());

    // every stored tensor matches, running statistics included
    auto a = net.checkpoint_tensors();
    auto b = loaded.net.checkpoint_tensors();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].name == b[i].name);
        REQUIRE(a[i].tensor->values() == b[i].tensor->values());
    }
}

TEST_CASE("the split seed survives the round trip", "[checkpoint]") {
    auto net = trained_net<float>(13);
    for (const std::uint64_t seed : {std::uint64_t{0}, std::uint64_t{42}, ~std::uint64_t{0}}) {
        const std::string bytes = banknet::serialize_checkpoint(net, seed);
        REQUIRE(banknet::deserialize_checkpoint<float>(bytes).split_seed == seed);
    }
}

TEST_CASE("corrupted checkpoints fail with the matching error kind", "[checkpoint]") {
    auto net = trained_net<float>(17);
    const std::string good = banknet::serialize_checkpoint(net, 9);

    SECTION("too short for a magic") {
        REQUIRE(kind_of("") == CheckpointError::Kind::Truncated);
        REQUIRE(kind_of("BF") == CheckpointError::Kind::Truncated);
    }

    SECTION("bad magic") {
        std::string bytes = good;
        bytes[0] = 'X';
        REQUIRE(kind_of(bytes) == CheckpointError::Kind::BadMagic);
    }

    SECTION("unknown version") {
        std::string bytes = good;
        bytes[4] = 2; // little-endian u16 version
        REQUIRE(kind_of(bytes) == CheckpointError::Kind::BadVersion);
    }

    SECTION("truncated mid-tensor") {
        REQUIRE(kind_of(good.substr(0, good.size() - 10)) == CheckpointError::Kind::Truncated);
        REQUIRE(kind_of(good.substr(0, good.size() / 2)) == CheckpointError::Kind::Truncated);
    }

    SECTION("truncated just before the checksum") {
        REQUIRE(kind_of(good.substr(0, good.size() - 4)) == CheckpointError::Kind::Truncated);
    }

    SECTION("flipped payload byte") {
        std::string bytes = good;
        bytes[bytes.size() - 5] ^= 0x2a; // tensor data, structure still parses
        REQUIRE(kind_of(bytes) == CheckpointError::Kind::BadChecksum);
    }

    SECTION("config text disagrees with the stored tensors") {
        std::string bytes = good;
        const auto at = bytes.find("input 8 8 3");
        REQUIRE(at != std::string::npos);
        bytes[at + 6] = '9'; // same length, different trace
        REQUIRE(kind_of(bytes) == CheckpointError::Kind::BadConfig);
    }

    SECTION("trailing bytes after the checksum") {
        REQUIRE(kind_of(good + '\0') == CheckpointError::Kind::BadConfig);
    }

    SECTION("missing file") {
        REQUIRE_THROWS_AS(banknet::load_checkpoint<float>(temp_file("missing.bfck")),
                          banknet::IoError);
    }
}

TEST_CASE("crc32 matches its reference vector", "[checkpoint]") {
    // the standard IEEE 802.3 check value
    const char* s = "123456789";
    REQUIRE(banknet::crc32(reinterpret_cast<const unsigned char*>(s), 9) == 0xCBF43926u);
}
