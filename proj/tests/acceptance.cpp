// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 4 and 5 drive the CLI binary given as argv[1]; the rest
// run in-process against the library. Tolerances are pinned inline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "banknet/augment.hpp"
#include "banknet/checkpoint.hpp"
#include "banknet/dataset.hpp"
#include "banknet/image.hpp"
#include "banknet/metrics.hpp"
#include "banknet/model.hpp"
#include "banknet/nn.hpp"
#include "banknet/rng.hpp"
#include "banknet/tensor.hpp"
#include "banknet/train.hpp"

namespace fs = std::filesystem;
using banknet::Image;
using banknet::Mode;
using banknet::Rng;
using banknet::Tensor;

namespace {

std::vector<std::string> g_notes; // failure details for the current criterion

bool check(bool ok, const std::string& what) {
    if (!ok) g_notes.push_back(what);
    return ok;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

Tensor<double> rand_tensor(std::vector<std::size_t> shape, Rng& rng, double lo = -1.0,
                           double hi = 1.0) {
    Tensor<double> t = Tensor<double>::zeros(std::move(shape));
    for (auto& v : t.values()) v = banknet::uniform_real(rng, lo, hi);
    return t;
}

double dot(const Tensor<double>& a, const Tensor<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Central finite differences against the analytic gradient; true when the
// worst relative error stays within tol.
bool fd_matches(Tensor<double>& param, const std::function<double()>& loss,
                const Tensor<double>& analytic, double tol, const std::string& what) {
    const double h = 1e-5;
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double orig = param[i];
        param[i] = orig + h;
        const double lp = loss();
        param[i] = orig - h;
        const double lm = loss();
        param[i] = orig;
        const double numeric = (lp - lm) / (2.0 * h);
        if (std::abs(analytic[i] - numeric) > tol * std::max(1.0, std::abs(numeric))) {
            g_notes.push_back(what + ": element " + std::to_string(i) + " analytic " +
                              std::to_string(analytic[i]) + " vs numeric " + std::to_string(numeric));
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// criterion 1: the metrics module reproduces the reference table from the
// reference confusion matrix
// ---------------------------------------------------------------------------

bool criterion_metrics() {
    const std::int64_t m[5][5] = {{322, 5, 1, 1, 1},
                                  {4, 316, 5, 3, 2},
                                  {3, 5, 311, 9, 2},
                                  {4, 15, 4, 305, 2},
                                  {10, 8, 5, 4, 303}};
    banknet::ConfusionMatrix cm(5);
    for (int t = 0; t < 5; ++t) {
        for (int p = 0; p < 5; ++p) cm.accumulate(t, p, m[t][p]);
    }
    const banknet::MetricsReport rep = banknet::compute_report(cm);

    const char* want_p[5] = {"0.939", "0.905", "0.954", "0.947", "0.977"};
    const char* want_r[5] = {"0.976", "0.958", "0.942", "0.924", "0.918"};
    const char* want_f[5] = {"0.957", "0.931", "0.948", "0.936", "0.947"};
    bool ok = true;
    for (int c = 0; c < 5; ++c) {
        ok &= check(banknet::format3(rep.precision[c]) == want_p[c], "precision class " + std::to_string(c));
        ok &= check(banknet::format3(rep.recall[c]) == want_r[c], "recall class " + std::to_string(c));
        ok &= check(banknet::format3(rep.f1[c]) == want_f[c], "f1 class " + std::to_string(c));
    }
    for (const double v : {rep.micro.precision, rep.micro.recall, rep.micro.f1}) {
        ok &= check(banknet::format3(v) == "0.944", "micro row");
    }
    ok &= check(banknet::format3(rep.macro.precision) == "0.945", "macro precision");
    // reference macro recall 0.944 vs the unrounded mean 0.9436: +-0.001
    ok &= check(std::abs(rep.macro.recall - 0.944) <= 0.001, "macro recall");
    ok &= check(banknet::format3(rep.macro.f1) == "0.944", "macro f1");
    ok &= check(banknet::format3(rep.weighted.precision) == "0.945", "weighted precision");
    ok &= check(banknet::format3(rep.weighted.recall) == "0.944", "weighted recall");
    ok &= check(banknet::format3(rep.weighted.f1) == "0.944", "weighted f1");
    ok &= check(banknet::format3(rep.accuracy) == "0.944", "accuracy");
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 2: analytic gradients match central finite differences for every
// layer kind and for the miniature whole network, 5 seeded instances each
// ---------------------------------------------------------------------------

bool criterion_gradients() {
    const double tol = 1e-4;
    bool ok = true;

    for (std::uint64_t inst = 0; inst < 5; ++inst) {
        Rng rng = banknet::make_rng(1000, {inst});

        { // conv
            Tensor<double> x = rand_tensor({2, 5, 4, 2}, rng);
            Tensor<double> k = rand_tensor({3, 2, 2, 2}, rng);
            Tensor<double> b = rand_tensor({2}, rng);
            banknet::Conv2dCache<double> cache;
            const auto out = banknet::conv2d_forward(x, k, b, &cache);
            const Tensor<double> w = rand_tensor(out.shape(), rng);
            const auto g = banknet::conv2d_backward(w, cache);
            auto loss = [&] { return dot(w, banknet::conv2d_forward(x, k, b)); };
            ok &= fd_matches(x, loss, g.input, tol, "conv input");
            ok &= fd_matches(k, loss, g.kernel, tol, "conv kernel");
            ok &= fd_matches(b, loss, g.bias, tol, "conv bias");
        }
        { // dense
            Tensor<double> x = rand_tensor({3, 5}, rng);
            Tensor<double> w = rand_tensor({5, 4}, rng);
            Tensor<double> b = rand_tensor({4}, rng);
            banknet::DenseCache<double> cache;
            const auto out = banknet::dense_forward(x, w, b, &cache);
            const Tensor<double> gw = rand_tensor(out.shape(), rng);
            const auto g = banknet::dense_backward(gw, cache);
            auto loss = [&] { return dot(gw, banknet::dense_forward(x, w, b)); };
            ok &= fd_matches(x, loss, g.input, tol, "dense input");
            ok &= fd_matches(w, loss, g.weight, tol, "dense weight");
            ok &= fd_matches(b, loss, g.bias, tol, "dense bias");
        }
        { // batchnorm, train mode
            Tensor<double> x = rand_tensor({6, 3}, rng);
            Tensor<double> gamma = rand_tensor({3}, rng, 0.5, 1.5);
            Tensor<double> beta = rand_tensor({3}, rng);
            auto bn = [&](banknet::BatchNormCache<double>* cache) {
                auto rm = Tensor<double>::zeros({3});
                auto rv = Tensor<double>::full({3}, 1.0);
                return banknet::batchnorm_forward(x, gamma, beta, rm, rv, 1e-5, 0.99, Mode::Train,
                                                  cache);
            };
            banknet::BatchNormCache<double> cache;
            const auto y = bn(&cache);
            const Tensor<double> w = rand_tensor(y.shape(), rng);
            const auto g = banknet::batchnorm_backward(w, cache);
            auto loss = [&] { return dot(w, bn(nullptr)); };
            ok &= fd_matches(x, loss, g.input, tol, "batchnorm input");
            ok &= fd_matches(gamma, loss, g.gamma, tol, "batchnorm gamma");
            ok &= fd_matches(beta, loss, g.beta, tol, "batchnorm beta");
        }
        { // relu, inputs pushed away from the kink
            Tensor<double> x = rand_tensor({4, 5}, rng);
            for (auto& v : x.values()) {
                if (std::abs(v) < 1e-3) v = v < 0 ? -0.5 : 0.5;
            }
            banknet::ReluCache<double> cache;
            const auto y = banknet::relu(x, &cache);
            const Tensor<double> w = rand_tensor(y.shape(), rng);
            const auto g = banknet::relu_backward(w, cache);
            auto loss = [&] { return dot(w, banknet::relu(x)); };
            ok &= fd_matches(x, loss, g, tol, "relu input");
        }
        { // maxpool, regenerating until windows have a clear winner
            Tensor<double> x = rand_tensor({1, 4, 6, 2}, rng);
            auto near_tie = [&] {
                for (std::size_t n = 0; n < 1; ++n) {
                    for (std::size_t y0 = 0; y0 + 2 <= 4; y0 += 2) {
                        for (std::size_t x0 = 0; x0 + 2 <= 6; x0 += 2) {
                            for (std::size_t c = 0; c < 2; ++c) {
                                double best = -1e300, second = -1e300;
                                for (std::size_t dy = 0; dy < 2; ++dy) {
                                    for (std::size_t dx = 0; dx < 2; ++dx) {
                                        const double v = x.at({n, y0 + dy, x0 + dx, c});
                                        if (v > best) {
                                            second = best;
                                            best = v;
                                        } else if (v > second) {
                                            second = v;
                                        }
                                    }
                                }
                                if (best - second < 1e-2) return true;
                            }
                        }
                    }
                }
                return false;
            };
            while (near_tie()) x = rand_tensor({1, 4, 6, 2}, rng);
            banknet::MaxPoolCache<double> cache;
            const auto y = banknet::maxpool2d_forward(x, 2, 2, 2, 2, &cache);
            const Tensor<double> w = rand_tensor(y.shape(), rng);
            const auto g = banknet::maxpool2d_backward(w, cache);
            auto loss = [&] { return dot(w, banknet::maxpool2d_forward(x, 2, 2, 2, 2)); };
            ok &= fd_matches(x, loss, g, tol, "maxpool input");
        }
        { // fused softmax + cross-entropy
            Tensor<double> logits = rand_tensor({3, 5}, rng);
            std::vector<int> labels;
            for (int i = 0; i < 3; ++i) {
                labels.push_back(static_cast<int>(banknet::uniform_int(rng, 0, 4)));
            }
            const auto analytic =
                banknet::cross_entropy_loss(banknet::softmax(logits), labels).grad_logits;
            auto loss = [&] {
                return banknet::cross_entropy_loss(banknet::softmax(logits), labels).loss;
            };
            ok &= fd_matches(logits, loss, analytic, tol, "softmax+ce logits");
        }
    }

    // miniature whole network: conv 4@3x3 -> pool -> dense 8 -> dense 3,
    // batchnorm on, dropout off, 16x16x3 input
    banknet::NetworkConfig cfg;
    cfg.input_h = cfg.input_w = 16;
    cfg.input_c = 3;
    cfg.class_count = 3;
    using LS = banknet::LayerSpec;
    cfg.layers = {LS::conv2d(4, 3, 3), LS::batchnorm(), LS::relu(), LS::maxpool(2, 2),
                  LS::flatten(),       LS::dense(8),    LS::batchnorm(), LS::relu(),
                  LS::dense(3),        LS::softmax()};
    for (std::uint64_t inst = 0; inst < 5; ++inst) {
        banknet::Network<double> net(cfg);
        net.init_params(2000 + inst);
        Rng rng = banknet::make_rng(3000, {inst});
        Tensor<double> batch = rand_tensor({4, 16, 16, 3}, rng, 0.0, 1.0);
        std::vector<int> labels;
        for (int i = 0; i < 4; ++i) labels.push_back(static_cast<int>(banknet::uniform_int(rng, 0, 2)));

        typename banknet::Network<double>::Caches caches;
        const auto probs = net.forward(batch, Mode::Train, nullptr, &caches);
        const auto loss = banknet::cross_entropy_loss(probs, labels);
        const auto grads = net.backward(loss.grad_logits, caches);
        auto loss_at = [&] {
            return banknet::cross_entropy_loss(net.forward(batch, Mode::Train), labels).loss;
        };
        for (std::size_t li = 0; li < cfg.layers.size(); ++li) {
            auto& p = net.layer_params(li);
            const std::pair<Tensor<double>*, const Tensor<double>*> pairs[4] = {
                {&p.weight, &grads[li].weight},
                {&p.bias, &grads[li].bias},
                {&p.gamma, &grads[li].gamma},
                {&p.beta, &grads[li].beta}};
            for (const auto& [param, grad] : pairs) {
                if (param->empty()) continue;
                ok &= fd_matches(*param, loss_at, *grad, tol,
                                 "whole-net layer " + std::to_string(li));
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 3: brute-force oracle equivalence on 20 random instances per op
// ---------------------------------------------------------------------------

bool criterion_oracles() {
    bool ok = true;
    Rng rng = banknet::make_rng(4000, {1});

    for (int it = 0; it < 20; ++it) { // conv
        const auto n = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 2));
        const auto h = static_cast<std::size_t>(banknet::uniform_int(rng, 3, 10));
        const auto w = static_cast<std::size_t>(banknet::uniform_int(rng, 3, 10));
        const auto cin = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 3));
        const auto cout = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 4));
        const auto kh = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 3));
        const auto kw = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 3));
        const auto x = rand_tensor({n, h, w, cin}, rng);
        const auto k = rand_tensor({kh, kw, cin, cout}, rng);
        const auto b = rand_tensor({cout}, rng);
        const auto got = banknet::conv2d_forward(x, k, b);
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t y = 0; y + kh <= h && ok; ++y) {
                for (std::size_t xx = 0; xx + kw <= w && ok; ++xx) {
                    for (std::size_t f = 0; f < cout && ok; ++f) {
                        double acc = b[f];
                        for (std::size_t dy = 0; dy < kh; ++dy) {
                            for (std::size_t dx = 0; dx < kw; ++dx) {
                                for (std::size_t c = 0; c < cin; ++c) {
                                    acc += x.at({i, y + dy, xx + dx, c}) * k.at({dy, dx, c, f});
                                }
                            }
                        }
                        ok &= check(std::abs(got.at({i, y, xx, f}) - acc) <=
                                        1e-12 * std::max(1.0, std::abs(acc)),
                                    "conv oracle mismatch");
                    }
                }
            }
        }
    }

    for (int it = 0; it < 20 && ok; ++it) { // maxpool
        const auto h = static_cast<std::size_t>(banknet::uniform_int(rng, 2, 9));
        const auto w = static_cast<std::size_t>(banknet::uniform_int(rng, 2, 9));
        const auto c = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 3));
        const auto x = rand_tensor({1, h, w, c}, rng);
        const auto got = banknet::maxpool2d_forward(x, 2, 2, 2, 2);
        const std::size_t oh = (h - 2) / 2 + 1, ow = (w - 2) / 2 + 1;
        for (std::size_t y = 0; y < oh && ok; ++y) {
            for (std::size_t xx = 0; xx < ow && ok; ++xx) {
                for (std::size_t ch = 0; ch < c && ok; ++ch) {
                    double best = x.at({0, y * 2, xx * 2, ch});
                    for (std::size_t dy = 0; dy < 2; ++dy) {
                        for (std::size_t dx = 0; dx < 2; ++dx) {
                            best = std::max(best, x.at({0, y * 2 + dy, xx * 2 + dx, ch}));
                        }
                    }
                    ok &= check(got.at({0, y, xx, ch}) == best, "maxpool oracle mismatch");
                }
            }
        }
    }

    for (int it = 0; it < 20 && ok; ++it) { // dense
        const auto n = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 5));
        const auto din = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 6));
        const auto dout = static_cast<std::size_t>(banknet::uniform_int(rng, 1, 6));
        const auto x = rand_tensor({n, din}, rng);
        const auto w = rand_tensor({din, dout}, rng);
        const auto b = rand_tensor({dout}, rng);
        const auto got = banknet::dense_forward(x, w, b);
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = 0; j < dout && ok; ++j) {
                double acc = b[j];
                for (std::size_t p = 0; p < din; ++p) acc += x.at({i, p}) * w.at({p, j});
                ok &= check(std::abs(got.at({i, j}) - acc) <= 1e-12 * std::max(1.0, std::abs(acc)),
                            "dense oracle mismatch");
            }
        }
    }

    for (int it = 0; it < 20 && ok; ++it) { // gaussian blur, within one level
        const int h = static_cast<int>(banknet::uniform_int(rng, 6, 16));
        const int w = static_cast<int>(banknet::uniform_int(rng, 6, 16));
        const double sigma = banknet::uniform_real(rng, 0.5, 2.0);
        Image img(h, w);
        for (auto& p : img.pixels) p = static_cast<std::uint8_t>(banknet::uniform_int(rng, 0, 255));
        const Image got = banknet::gaussian_blur(img, sigma);

        const int radius = static_cast<int>(std::ceil(3.0 * sigma));
        const int k = 2 * radius + 1;
        std::vector<double> kern(static_cast<std::size_t>(k) * k);
        double sum = 0.0;
        for (int i = -radius; i <= radius; ++i) {
            for (int j = -radius; j <= radius; ++j) {
                const double v = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
                kern[static_cast<std::size_t>(i + radius) * k + (j + radius)] = v;
                sum += v;
            }
        }
        for (double& v : kern) v /= sum;
        for (int y = 0; y < h && ok; ++y) {
            for (int x = 0; x < w && ok; ++x) {
                for (int c = 0; c < 3 && ok; ++c) {
                    double acc = 0.0;
                    for (int i = -radius; i <= radius; ++i) {
                        for (int j = -radius; j <= radius; ++j) {
                            const int sy = std::clamp(y + i, 0, h - 1);
                            const int sx = std::clamp(x + j, 0, w - 1);
                            acc += kern[static_cast<std::size_t>(i + radius) * k + (j + radius)] *
                                   img.at(sy, sx, c);
                        }
                    }
                    ok &= check(std::abs(static_cast<int>(got.at(y, x, c)) -
                                         static_cast<int>(banknet::clamp_u8(acc))) <= 1,
                                "blur oracle mismatch");
                }
            }
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// criteria 4 and 5: desk-scale end-to-end through the CLI, twice, with
// byte-identical artifacts
// ---------------------------------------------------------------------------

struct PipelineArtifacts {
    fs::path history, model, report;
    bool ok = false;
};

PipelineArtifacts run_pipeline(const std::string& cli, const fs::path& dir) {
    PipelineArtifacts art;
    fs::remove_all(dir);
    fs::create_directories(dir);
    art.history = dir / "history.tsv";
    art.model = dir / "model.bfck";
    art.report = dir / "report.tsv";

    const std::string gen = cli + " gen --out " + quoted(dir / "data") +
                            " --per-class 60 --seed 7 > " + quoted(dir / "gen.log") + " 2>&1";
    if (!check(run(gen) == 0, "gen failed in " + dir.string())) return art;

    const std::string train = cli + " train --data " + quoted(dir / "data") + " --out " +
                              quoted(art.model) +
                              " --image-size 32 --width-scale 0.25 --epochs 150 --batch 20" +
                              " --lr 0.01 > " + quoted(art.history) + " 2> " +
                              quoted(dir / "train.err");
    if (!check(run(train) == 0, "train failed in " + dir.string())) return art;

    const std::string eval = cli + " eval --model " + quoted(art.model) + " --data " +
                             quoted(dir / "data") + " --report " + quoted(art.report) + " > " +
                             quoted(dir / "eval.txt") + " 2>&1";
    if (!check(run(eval) == 0, "eval failed in " + dir.string())) return art;
    art.ok = true;
    return art;
}

bool criterion_end_to_end(const PipelineArtifacts& art) {
    if (!art.ok) return false;
    const std::string tsv = slurp(art.report);
    if (!check(!tsv.empty(), "report.tsv missing")) return false;
    const banknet::MetricsReport rep = banknet::parse_report_tsv(tsv);
    return check(rep.accuracy >= 0.90,
                 "test accuracy " + std::to_string(rep.accuracy) + " below 0.90");
}

bool criterion_determinism(const PipelineArtifacts& a, const PipelineArtifacts& b) {
    if (!a.ok || !b.ok) return check(false, "pipeline run missing");
    bool ok = true;
    ok &= check(slurp(a.history) == slurp(b.history), "history streams differ");
    ok &= check(slurp(a.model) == slurp(b.model), "checkpoints differ");
    ok &= check(slurp(a.report) == slurp(b.report), "TSV reports differ");
    ok &= check(!slurp(a.history).empty(), "history empty");
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 6: byte-level round trips for checkpoints, PPM files, reports
// ---------------------------------------------------------------------------

bool criterion_round_trips(const PipelineArtifacts& art, const fs::path& scratch) {
    bool ok = true;

    if (check(art.ok, "no checkpoint from the pipeline run")) {
        const std::string bytes = slurp(art.model);
        auto loaded = banknet::load_checkpoint<float>(art.model);
        ok &= check(banknet::serialize_checkpoint(loaded.net, loaded.split_seed) == bytes,
                    "checkpoint save-load-save differs");
    } else {
        ok = false;
    }

    fs::create_directories(scratch);
    Rng rng = banknet::make_rng(6000, {1});
    for (int it = 0; it < 5; ++it) {
        Image img(static_cast<int>(banknet::uniform_int(rng, 1, 24)),
                  static_cast<int>(banknet::uniform_int(rng, 1, 24)));
        for (auto& p : img.pixels) p = static_cast<std::uint8_t>(banknet::uniform_int(rng, 0, 255));
        const fs::path path = scratch / ("rt_" + std::to_string(it) + ".ppm");
        banknet::save_ppm(img, path);
        ok &= check(banknet::load_ppm(path) == img, "ppm round trip not bit-exact");
    }

    if (art.ok) {
        const std::string tsv = slurp(art.report);
        const banknet::MetricsReport rep = banknet::parse_report_tsv(tsv);
        ok &= check(banknet::render_tsv(rep) == tsv, "TSV re-parse not exact");
    }
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 7: statistical contracts
// ---------------------------------------------------------------------------

bool criterion_statistics() {
    bool ok = true;

    const Image img(8, 8);
    banknet::AugmentConfig cfg; // threshold 0.1
    Rng rng = banknet::make_rng(7000, {1});
    int applied = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        if (!banknet::apply_random(img, cfg, rng).applied.empty()) ++applied;
    }
    const double rate = static_cast<double>(applied) / trials;
    ok &= check(std::abs(rate - 0.1) <= 0.005,
                "apply_random rate " + std::to_string(rate) + " outside 0.1 +- 0.005");

    const std::size_t n = 1000000;
    const auto x = Tensor<double>::full({n}, 1.0);
    Rng drop_rng = banknet::make_rng(7000, {2});
    const auto y = banknet::dropout(x, 0.5, Mode::Train, drop_rng);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += y[i];
    const double mean = sum / static_cast<double>(n);
    ok &= check(std::abs(mean - 1.0) <= 0.005,
                "dropout expectation " + std::to_string(mean) + " off by more than 0.5%");
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 8: the split protocol at the reference scale
// ---------------------------------------------------------------------------

bool criterion_split() {
    bool ok = true;
    std::vector<int> labels;
    for (int c = 0; c < 5; ++c) labels.insert(labels.end(), 1000, c);

    for (std::uint64_t seed = 0; seed < 50 && ok; ++seed) {
        banknet::SplitSpec spec;
        spec.seed = seed;
        const auto idx = banknet::split_indices(labels, 5, spec);
        ok &= check(idx.test.size() == 1650, "test size not 1650");
        for (int c = 0; c < 5; ++c) {
            std::size_t k = 0;
            for (auto i : idx.test) k += labels[i] == c;
            ok &= check(k == 330, "test class " + std::to_string(c) + " not 330");
        }
        std::vector<std::size_t> all;
        all.insert(all.end(), idx.train.begin(), idx.train.end());
        all.insert(all.end(), idx.val.begin(), idx.val.end());
        all.insert(all.end(), idx.test.begin(), idx.test.end());
        ok &= check(all.size() == labels.size(), "split not exhaustive");
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < all.size() && ok; ++i) {
            ok &= check(all[i] == i, "split not disjoint/exhaustive at seed " + std::to_string(seed));
        }
    }
    return ok;
}

struct Outcome {
    int id;
    std::string name;
    bool passed;
    double seconds;
    std::vector<std::string> notes;
};

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? quoted(fs::path(argv[1])) : std::string{};
    const fs::path work = fs::temp_directory_path() / "banknet_acceptance";

    std::vector<Outcome> outcomes;
    auto record = [&](int id, const std::string& name, double budget,
                      const std::function<bool()>& fn) {
        g_notes.clear();
        const auto t0 = std::chrono::steady_clock::now();
        bool passed = false;
        try {
            passed = fn();
        } catch (const std::exception& e) {
            g_notes.push_back(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (passed && budget > 0.0 && secs >= budget) {
            passed = false;
            g_notes.push_back("runtime " + std::to_string(secs) + "s exceeds " +
                              std::to_string(budget) + "s budget");
        }
        outcomes.push_back({id, name, passed, secs, g_notes});
    };

    record(1, "metrics oracle reproduces the reference table", 1.0, criterion_metrics);
    record(2, "gradients match finite differences", 60.0, criterion_gradients);
    record(3, "brute-force oracle equivalence", 30.0, criterion_oracles);

    PipelineArtifacts run_a, run_b;
    record(4, "desk-scale end-to-end accuracy >= 0.90", 900.0, [&] {
        if (!check(!cli.empty(), "no CLI binary path given")) return false;
        run_a = run_pipeline(cli, work / "run_a");
        return criterion_end_to_end(run_a);
    });
    record(5, "two identical runs are byte-identical", 900.0, [&] {
        if (!check(!cli.empty(), "no CLI binary path given")) return false;
        run_b = run_pipeline(cli, work / "run_b");
        return criterion_determinism(run_a, run_b);
    });
    record(6, "checkpoint, PPM and TSV round trips", 60.0,
           [&] { return criterion_round_trips(run_a, work / "scratch"); });
    record(7, "statistical contracts hold", 60.0, criterion_statistics);
    record(8, "split protocol at the reference scale", 60.0, criterion_split);

    int failures = 0;
    for (const auto& o : outcomes) {
        std::printf("%s criterion %d: %s (%.2fs)\n", o.passed ? "PASS" : "FAIL", o.id,
                    o.name.c_str(), o.seconds);
        for (const auto& note : o.notes) std::printf("     - %s\n", note.c_str());
        failures += !o.passed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(outcomes.size()) - failures,
                outcomes.size());
    return failures == 0 ? 0 : 1;
}
