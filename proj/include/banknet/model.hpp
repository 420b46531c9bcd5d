#ifndef BANKNET_MODEL_HPP
#define BANKNET_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "banknet/errors.hpp"
#include "banknet/nn.hpp"
#include "banknet/rng.hpp"
#include "banknet/tensor.hpp"

namespace banknet {

inline constexpr double kBnEpsilon = 1e-5;
inline constexpr double kBnMomentum = 0.99;

struct LayerSpec {
    enum class Kind { Conv2d, Pad, MaxPool, Flatten, Dense, BatchNorm, Relu, Dropout, Softmax };

    Kind kind = Kind::Relu;
    int out_channels = 0, kernel_h = 0, kernel_w = 0; // conv
    int pad_h = 0, pad_w = 0;                         // pad
    int window_h = 0, window_w = 0;                   // maxpool
    int stride_h = 0, stride_w = 0;
    int units = 0;     // dense
    double rate = 0.0; // dropout

    static LayerSpec conv2d(int out_channels, int kh, int kw) {
        LayerSpec s;
        s.kind = Kind::Conv2d;
        s.out_channels = out_channels;
        s.kernel_h = kh;
        s.kernel_w = kw;
        return s;
    }
    static LayerSpec pad(int ph, int pw) {
        LayerSpec s;
        s.kind = Kind::Pad;
        s.pad_h = ph;
        s.pad_w = pw;
        return s;
    }
    static LayerSpec maxpool(int wh, int ww, int sh = 0, int sw = 0) {
        LayerSpec s;
        s.kind = Kind::MaxPool;
        s.window_h = wh;
        s.window_w = ww;
        s.stride_h = sh == 0 ? wh : sh;
        s.stride_w = sw == 0 ? ww : sw;
        return s;
    }
    static LayerSpec flatten() {
        LayerSpec s;
        s.kind = Kind::Flatten;
        return s;
    }
    static LayerSpec dense(int units) {
        LayerSpec s;
        s.kind = Kind::Dense;
        s.units = units;
        return s;
    }
    static LayerSpec batchnorm() {
        LayerSpec s;
        s.kind = Kind::BatchNorm;
        return s;
    }
    static LayerSpec relu() {
        LayerSpec s;
        s.kind = Kind::Relu;
        return s;
    }
    static LayerSpec dropout(double rate) {
        LayerSpec s;
        s.kind = Kind::Dropout;
        s.rate = rate;
        return s;
    }
    static LayerSpec softmax() {
        LayerSpec s;
        s.kind = Kind::Softmax;
        return s;
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::Conv2d: os << "conv2d " << out_channels << ' ' << kernel_h << ' ' << kernel_w; break;
            case Kind::Pad: os << "pad " << pad_h << ' ' << pad_w; break;
            case Kind::MaxPool:
                os << "maxpool " << window_h << ' ' << window_w << ' ' << stride_h << ' ' << stride_w;
                break;
            case Kind::Flatten: os << "flatten"; break;
            case Kind::Dense: os << "dense " << units; break;
            case Kind::BatchNorm: os << "batchnorm"; break;
            case Kind::Relu: os << "relu"; break;
            case Kind::Dropout: {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "dropout %.17g", rate);
                os << buf;
                break;
            }
            case Kind::Softmax: os << "softmax"; break;
        }
        return os.str();
    }
};

struct NetworkConfig {
    int input_h = 150;
    int input_w = 150;
    int input_c = 3;
    int class_count = 5;
    std::vector<LayerSpec> layers;
};

// Shape of the activation after each layer while tracing a config.
struct TraceEntry {
    bool flat = false;
    int h = 0, w = 0, c = 0; // spatial form
    int d = 0;               // flattened form
    int features() const { return flat ? d : c; }
};

inline std::vector<TraceEntry> trace_shapes(const NetworkConfig& cfg) {
    if (cfg.input_h < 1 || cfg.input_w < 1 || cfg.input_c < 1) {
        throw ConfigError("network: input shape must be positive");
    }
    if (cfg.class_count < 2) throw ConfigError("network: need at least two classes");
    if (cfg.layers.empty()) throw ConfigError("network: empty layer list");

    TraceEntry cur;
    cur.flat = false;
    cur.h = cfg.input_h;
    cur.w = cfg.input_w;
    cur.c = cfg.input_c;
    std::vector<TraceEntry> trace;
    trace.reserve(cfg.layers.size() + 1);
    trace.push_back(cur);

    for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
        const LayerSpec& l = cfg.layers[i];
        const std::string where = "layer " + std::to_string(i) + " (" + l.describe() + ")";
        switch (l.kind) {
            case LayerSpec::Kind::Conv2d:
                if (cur.flat) throw ConfigError(where + ": conv after flatten");
                if (l.out_channels < 1 || l.kernel_h < 1 || l.kernel_w < 1) {
                    throw ConfigError(where + ": non-positive conv parameters");
                }
                if (cur.h < l.kernel_h || cur.w < l.kernel_w) {
                    throw ConfigError(where + ": kernel " + std::to_string(l.kernel_h) + "x" +
                                      std::to_string(l.kernel_w) + " does not fit input " +
                                      std::to_string(cur.h) + "x" + std::to_string(cur.w));
                }
                cur.h = cur.h - l.kernel_h + 1;
                cur.w = cur.w - l.kernel_w + 1;
                cur.c = l.out_channels;
                break;
            case LayerSpec::Kind::Pad:
                if (cur.flat) throw ConfigError(where + ": pad after flatten");
                if (l.pad_h < 0 || l.pad_w < 0) throw ConfigError(where + ": negative padding");
                cur.h += 2 * l.pad_h;
                cur.w += 2 * l.pad_w;
                break;
            case LayerSpec::Kind::MaxPool:
                if (cur.flat) throw ConfigError(where + ": pool after flatten");
                if (l.window_h < 1 || l.window_w < 1 || l.stride_h < 1 || l.stride_w < 1) {
                    throw ConfigError(where + ": non-positive pool parameters");
                }
                if (cur.h < l.window_h || cur.w < l.window_w) {
                    throw ConfigError(where + ": window " + std::to_string(l.window_h) + "x" +
                                      std::to_string(l.window_w) + " does not fit input " +
                                      std::to_string(cur.h) + "x" + std::to_string(cur.w));
                }
                cur.h = (cur.h - l.window_h) / l.stride_h + 1;
                cur.w = (cur.w - l.window_w) / l.stride_w + 1;
                break;
            case LayerSpec::Kind::Flatten:
                if (cur.flat) throw ConfigError(where + ": flatten twice");
                cur.d = cur.h * cur.w * cur.c;
                cur.flat = true;
                break;
            case LayerSpec::Kind::Dense:
                if (!cur.flat) throw ConfigError(where + ": dense requires flattened input");
                if (l.units < 1) throw ConfigError(where + ": non-positive unit count");
                cur.d = l.units;
                break;
            case LayerSpec::Kind::BatchNorm:
            case LayerSpec::Kind::Relu:
                break;
            case LayerSpec::Kind::Dropout:
                if (l.rate < 0.0 || l.rate >= 1.0) throw ConfigError(where + ": rate must be in [0,1)");
                break;
            case LayerSpec::Kind::Softmax:
                if (!cur.flat) throw ConfigError(where + ": softmax requires flattened input");
                if (i + 1 != cfg.layers.size()) throw ConfigError(where + ": softmax must be last");
                break;
        }
        trace.push_back(cur);
    }
    if (cfg.layers.back().kind != LayerSpec::Kind::Softmax) {
        throw ConfigError("network: final layer must be softmax");
    }
    if (!trace.back().flat || trace.back().d != cfg.class_count) {
        throw ConfigError("network: final width " + std::to_string(trace.back().features()) + " vs " +
                          std::to_string(cfg.class_count) + " classes");
    }
    return trace;
}

inline void validate_config(const NetworkConfig& cfg) { trace_shapes(cfg); }

// The 8-layer stack: five conv blocks (32/64/128/256/256 filters; pooling
// after blocks 1, 2, 3, 5; 1-pixel pre-padding on the 3x3 convs), then
// dense 512 and dense 32 with dropout 0.5, then the classifier head. Every
// block up to the head carries BatchNorm + ReLU. A pool stage whose input is
// already smaller than its window is elided so small desk-scale inputs trace;
// a conv that does not fit is a hard config error.
inline NetworkConfig build_alexnet_variant(int input_h = 150, int input_w = 150, int input_c = 3,
                                           int class_count = 5, double width_scale = 1.0) {
    if (width_scale <= 0.0) throw ConfigError("build: width_scale must be positive");
    auto scaled = [width_scale](int w) {
        return std::max(1, static_cast<int>(std::llround(width_scale * w)));
    };
    NetworkConfig cfg;
    cfg.input_h = input_h;
    cfg.input_w = input_w;
    cfg.input_c = input_c;
    cfg.class_count = class_count;

    int h = input_h, w = input_w;
    auto conv_block = [&](int filters, int k, bool pre_pad) {
        if (pre_pad) {
            cfg.layers.push_back(LayerSpec::pad(1, 1));
            h += 2;
            w += 2;
        }
        if (h < k || w < k) {
            throw ConfigError("build: " + std::to_string(k) + "x" + std::to_string(k) +
                              " conv does not fit " + std::to_string(h) + "x" + std::to_string(w));
        }
        cfg.layers.push_back(LayerSpec::conv2d(scaled(filters), k, k));
        cfg.layers.push_back(LayerSpec::batchnorm());
        cfg.layers.push_back(LayerSpec::relu());
        h = h - k + 1;
        w = w - k + 1;
    };
    auto pool = [&] {
        if (h < 2 || w < 2) return; // elide: nothing left to pool
        cfg.layers.push_back(LayerSpec::maxpool(2, 2));
        h /= 2;
        w /= 2;
    };

    conv_block(32, 11, false);
    pool();
    conv_block(64, 5, false);
    pool();
    conv_block(128, 3, true);
    pool();
    conv_block(256, 3, true);
    conv_block(256, 3, true);
    pool();
    cfg.layers.push_back(LayerSpec::flatten());
    for (int units : {512, 32}) {
        cfg.layers.push_back(LayerSpec::dense(scaled(units)));
        cfg.layers.push_back(LayerSpec::batchnorm());
        cfg.layers.push_back(LayerSpec::relu());
        cfg.layers.push_back(LayerSpec::dropout(0.5));
    }
    cfg.layers.push_back(LayerSpec::dense(class_count));
    cfg.layers.push_back(LayerSpec::softmax());
    validate_config(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Canonical config text, used inside checkpoints. One line per layer,
// whitespace-separated, dropout rate printed at full precision.
// ---------------------------------------------------------------------------

inline std::string config_to_text(const NetworkConfig& cfg) {
    std::ostringstream os;
    os << "input " << cfg.input_h << ' ' << cfg.input_w << ' ' << cfg.input_c << '\n';
    os << "classes " << cfg.class_count << '\n';
    for (const auto& l : cfg.layers) os << "layer " << l.describe() << '\n';
    return os.str();
}

inline NetworkConfig config_from_text(const std::string& text) {
    NetworkConfig cfg;
    cfg.layers.clear();
    std::istringstream in(text);
    std::string line;
    bool saw_input = false, saw_classes = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "input") {
            if (!(row >> cfg.input_h >> cfg.input_w >> cfg.input_c)) {
                throw ConfigError("config text: bad input line");
            }
            saw_input = true;
        } else if (tag == "classes") {
            if (!(row >> cfg.class_count)) throw ConfigError("config text: bad classes line");
            saw_classes = true;
        } else if (tag == "layer") {
            std::string kind;
            row >> kind;
            LayerSpec l;
            bool ok = true;
            if (kind == "conv2d") {
                ok = static_cast<bool>(row >> l.out_channels >> l.kernel_h >> l.kernel_w);
                l.kind = LayerSpec::Kind::Conv2d;
            } else if (kind == "pad") {
                ok = static_cast<bool>(row >> l.pad_h >> l.pad_w);
                l.kind = LayerSpec::Kind::Pad;
            } else if (kind == "maxpool") {
                ok = static_cast<bool>(row >> l.window_h >> l.window_w >> l.stride_h >> l.stride_w);
                l.kind = LayerSpec::Kind::MaxPool;
            } else if (kind == "flatten") {
                l.kind = LayerSpec::Kind::Flatten;
            } else if (kind == "dense") {
                ok = static_cast<bool>(row >> l.units);
                l.kind = LayerSpec::Kind::Dense;
            } else if (kind == "batchnorm") {
                l.kind = LayerSpec::Kind::BatchNorm;
            } else if (kind == "relu") {
                l.kind = LayerSpec::Kind::Relu;
            } else if (kind == "dropout") {
                ok = static_cast<bool>(row >> l.rate);
                l.kind = LayerSpec::Kind::Dropout;
            } else if (kind == "softmax") {
                l.kind = LayerSpec::Kind::Softmax;
            } else {
                throw ConfigError("config text: unknown layer kind '" + kind + "'");
            }
            if (!ok) throw ConfigError("config text: bad arguments for '" + kind + "'");
            cfg.layers.push_back(l);
        } else {
            throw ConfigError("config text: unknown tag '" + tag + "'");
        }
    }
    if (!saw_input || !saw_classes) throw ConfigError("config text: missing input/classes line");
    validate_config(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Network: parameter storage plus forward/backward over a validated config.
// ---------------------------------------------------------------------------

template <class T>
class Network {
  public:
    struct LayerParams {
        Tensor<T> weight, bias;                              // conv / dense
        Tensor<T> gamma, beta, running_mean, running_var;    // batchnorm
    };
    struct LayerState {
        Conv2dCache<T> conv;
        MaxPoolCache<T> pool;
        DenseCache<T> dense;
        ReluCache<T> relu;
        BatchNormCache<T> bn;
        DropoutCache<T> drop;
        std::vector<std::size_t> pre_flatten;
    };
    using Caches = std::vector<LayerState>;
    struct LayerGrads {
        Tensor<T> weight, bias, gamma, beta;
    };
    struct NamedTensor {
        std::string name;
        Tensor<T>* tensor;
    };

    explicit Network(NetworkConfig cfg) : cfg_(std::move(cfg)) {
        trace_ = trace_shapes(cfg_);
        params_.resize(cfg_.layers.size());
        for (std::size_t i = 0; i < cfg_.layers.size(); ++i) {
            const LayerSpec& l = cfg_.layers[i];
            const TraceEntry& in = trace_[i];
            LayerParams& p = params_[i];
            switch (l.kind) {
                case LayerSpec::Kind::Conv2d:
                    p.weight = Tensor<T>::zeros({static_cast<std::size_t>(l.kernel_h),
                                                 static_cast<std::size_t>(l.kernel_w),
                                                 static_cast<std::size_t>(in.c),
                                                 static_cast<std::size_t>(l.out_channels)});
                    p.bias = Tensor<T>::zeros({static_cast<std::size_t>(l.out_channels)});
                    break;
                case LayerSpec::Kind::Dense:
                    p.weight = Tensor<T>::zeros(
                        {static_cast<std::size_t>(in.d), static_cast<std::size_t>(l.units)});
                    p.bias = Tensor<T>::zeros({static_cast<std::size_t>(l.units)});
                    break;
                case LayerSpec::Kind::BatchNorm: {
                    const auto c = static_cast<std::size_t>(in.features());
                    p.gamma = Tensor<T>::full({c}, T(1));
                    p.beta = Tensor<T>::zeros({c});
                    p.running_mean = Tensor<T>::zeros({c});
                    p.running_var = Tensor<T>::full({c}, T(1));
                    break;
                }
                default: break;
            }
        }
    }

    const NetworkConfig& config() const { return cfg_; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    LayerParams& layer_params(std::size_t i) { return params_[i]; }
    const LayerParams& layer_params(std::size_t i) const { return params_[i]; }

    // He-uniform on conv/dense weights, identity-transform BatchNorm, zero
    // biases. One init stream consumed in layer order.
    void init_params(std::uint64_t seed) {
        Rng rng = make_rng(seed, {stream::kInit});
        for (std::size_t i = 0; i < cfg_.layers.size(); ++i) {
            const LayerSpec& l = cfg_.layers[i];
            LayerParams& p = params_[i];
            switch (l.kind) {
                case LayerSpec::Kind::Conv2d:
                case LayerSpec::Kind::Dense: {
                    const std::size_t fan_in = l.kind == LayerSpec::Kind::Conv2d
                                                   ? p.weight.size() / p.weight.extent(3)
                                                   : p.weight.extent(0);
                    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
                    for (auto& v : p.weight.values()) {
                        v = static_cast<T>(uniform_real(rng, -limit, limit));
                    }
                    for (auto& v : p.bias.values()) v = T(0);
                    break;
                }
                case LayerSpec::Kind::BatchNorm:
                    for (auto& v : p.gamma.values()) v = T(1);
                    for (auto& v : p.beta.values()) v = T(0);
                    for (auto& v : p.running_mean.values()) v = T(0);
                    for (auto& v : p.running_var.values()) v = T(1);
                    break;
                default: break;
            }
        }
    }

    Tensor<T> forward(const Tensor<T>& batch, Mode mode, Rng* rng = nullptr, Caches* caches = nullptr) {
        if (batch.rank() != 4 || batch.extent(1) != static_cast<std::size_t>(cfg_.input_h) ||
            batch.extent(2) != static_cast<std::size_t>(cfg_.input_w) ||
            batch.extent(3) != static_cast<std::size_t>(cfg_.input_c)) {
            throw ShapeError("forward: batch " + batch.shape_str() + " does not match config input " +
                             std::to_string(cfg_.input_h) + "x" + std::to_string(cfg_.input_w) + "x" +
                             std::to_string(cfg_.input_c));
        }
        if (caches) {
            caches->clear();
            caches->resize(cfg_.layers.size());
        }
        Rng infer_rng(0); // never consulted: dropout is identity outside training
        Tensor<T> x = batch;
        for (std::size_t i = 0; i < cfg_.layers.size(); ++i) {
            const LayerSpec& l = cfg_.layers[i];
            LayerParams& p = params_[i];
            LayerState* st = caches ? &(*caches)[i] : nullptr;
            switch (l.kind) {
                case LayerSpec::Kind::Conv2d:
                    x = conv2d_forward(x, p.weight, p.bias, st ? &st->conv : nullptr);
                    break;
                case LayerSpec::Kind::Pad:
                    x = zero_pad2d(x, static_cast<std::size_t>(l.pad_h), static_cast<std::size_t>(l.pad_w));
                    break;
                case LayerSpec::Kind::MaxPool:
                    x = maxpool2d_forward(x, static_cast<std::size_t>(l.window_h),
                                          static_cast<std::size_t>(l.window_w),
                                          static_cast<std::size_t>(l.stride_h),
                                          static_cast<std::size_t>(l.stride_w), st ? &st->pool : nullptr);
                    break;
                case LayerSpec::Kind::Flatten: {
                    if (st) st->pre_flatten = x.shape();
                    const std::size_t n = x.extent(0);
                    x = x.reshaped({n, x.size() / n});
                    break;
                }
                case LayerSpec::Kind::Dense:
                    x = dense_forward(x, p.weight, p.bias, st ? &st->dense : nullptr);
                    break;
                case LayerSpec::Kind::BatchNorm:
                    x = batchnorm_forward(x, p.gamma, p.beta, p.running_mean, p.running_var,
                                          static_cast<T>(kBnEpsilon), static_cast<T>(kBnMomentum), mode,
                                          st ? &st->bn : nullptr);
                    break;
                case LayerSpec::Kind::Relu:
                    x = relu(x, st ? &st->relu : nullptr);
                    break;
                case LayerSpec::Kind::Dropout:
                    if (mode == Mode::Train && l.rate > 0.0 && rng == nullptr) {
                        throw ValueError("forward: training with dropout needs an rng");
                    }
                    x = dropout(x, l.rate, mode, rng ? *rng : infer_rng, st ? &st->drop : nullptr);
                    break;
                case LayerSpec::Kind::Softmax:
                    x = softmax(x);
                    break;
            }
        }
        return x;
    }

    // Takes d(loss)/d(logits); the softmax layer is fused with the
    // cross-entropy loss, so its backward here is the identity.
    std::vector<LayerGrads> backward(const Tensor<T>& grad_logits, Caches& caches) {
        if (caches.size() != cfg_.layers.size()) {
            throw ShapeError("backward: caches do not match a training forward pass");
        }
        std::vector<LayerGrads> grads(cfg_.layers.size());
        Tensor<T> g = grad_logits;
        for (std::size_t n = cfg_.layers.size(); n-- > 0;) {
            const LayerSpec& l = cfg_.layers[n];
            LayerState& st = caches[n];
            switch (l.kind) {
                case LayerSpec::Kind::Conv2d: {
                    Conv2dGrads<T> cg = conv2d_backward(g, st.conv);
                    grads[n].weight = std::move(cg.kernel);
                    grads[n].bias = std::move(cg.bias);
                    g = std::move(cg.input);
                    break;
                }
                case LayerSpec::Kind::Pad:
                    g = zero_pad2d_backward(g, static_cast<std::size_t>(l.pad_h),
                                            static_cast<std::size_t>(l.pad_w));
                    break;
                case LayerSpec::Kind::MaxPool:
                    g = maxpool2d_backward(g, st.pool);
                    break;
                case LayerSpec::Kind::Flatten:
                    g = g.reshaped(st.pre_flatten);
                    break;
                case LayerSpec::Kind::Dense: {
                    DenseGrads<T> dg = dense_backward(g, st.dense);
                    grads[n].weight = std::move(dg.weight);
                    grads[n].bias = std::move(dg.bias);
                    g = std::move(dg.input);
                    break;
                }
                case LayerSpec::Kind::BatchNorm: {
                    BatchNormGrads<T> bg = batchnorm_backward(g, st.bn);
                    grads[n].gamma = std::move(bg.gamma);
                    grads[n].beta = std::move(bg.beta);
                    g = std::move(bg.input);
                    break;
                }
                case LayerSpec::Kind::Relu:
                    g = relu_backward(g, st.relu);
                    break;
                case LayerSpec::Kind::Dropout:
                    g = dropout_backward(g, st.drop);
                    break;
                case LayerSpec::Kind::Softmax:
                    break;
            }
        }
        return grads;
    }

    void apply_sgd(const std::vector<LayerGrads>& grads, T lr) {
        auto axpy = [lr](Tensor<T>& param, const Tensor<T>& grad) {
            if (grad.size() == 0) return;
            if (!param.same_shape(grad)) throw ShapeError("sgd: gradient shape mismatch");
            T* p = param.data();
            const T* g = grad.data();
            for (std::size_t k = 0; k < param.size(); ++k) p[k] -= lr * g[k];
        };
        for (std::size_t i = 0; i < params_.size(); ++i) {
            axpy(params_[i].weight, grads[i].weight);
            axpy(params_[i].bias, grads[i].bias);
            axpy(params_[i].gamma, grads[i].gamma);
            axpy(params_[i].beta, grads[i].beta);
        }
    }

    // One forward + backward + vanilla SGD update; returns the pre-update
    // loss. epoch/step only annotate the divergence error.
    T train_step(const Tensor<T>& batch, const std::vector<int>& labels, T lr, Rng& rng,
                 std::size_t epoch = 0, std::size_t step = 0, Tensor<T>* probs_out = nullptr) {
        Caches caches;
        Tensor<T> probs = forward(batch, Mode::Train, &rng, &caches);
        LossResult<T> loss = cross_entropy_loss(probs, labels);
        if (!std::isfinite(static_cast<double>(loss.loss))) {
            throw DivergedError(epoch, step,
                                "training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                                    ", step " + std::to_string(step));
        }
        apply_sgd(backward(loss.grad_logits, caches), lr);
        if (probs_out) *probs_out = std::move(probs);
        return loss.loss;
    }

    std::vector<NamedTensor> trainable_tensors() {
        return collect(false);
    }
    std::vector<NamedTensor> checkpoint_tensors() {
        return collect(true);
    }

    std::size_t param_count() {
        std::size_t n = 0;
        for (const auto& nt : trainable_tensors()) n += nt.tensor->size();
        return n;
    }

  private:
    std::vector<NamedTensor> collect(bool with_running_stats) {
        std::vector<NamedTensor> out;
        for (std::size_t i = 0; i < cfg_.layers.size(); ++i) {
            const std::string prefix = "layer" + std::to_string(i) + ".";
            LayerParams& p = params_[i];
            switch (cfg_.layers[i].kind) {
                case LayerSpec::Kind::Conv2d:
                case LayerSpec::Kind::Dense:
                    out.push_back({prefix + "weight", &p.weight});
                    out.push_back({prefix + "bias", &p.bias});
                    break;
                case LayerSpec::Kind::BatchNorm:
                    out.push_back({prefix + "gamma", &p.gamma});
                    out.push_back({prefix + "beta", &p.beta});
                    if (with_running_stats) {
                        out.push_back({prefix + "running_mean", &p.running_mean});
                        out.push_back({prefix + "running_var", &p.running_var});
                    }
                    break;
                default: break;
            }
        }
        return out;
    }

    NetworkConfig cfg_;
    std::vector<TraceEntry> trace_;
    std::vector<LayerParams> params_;
};

template <class T>
struct Prediction {
    std::vector<int> labels;
    Tensor<T> probabilities; // [n, k]
};

// Argmax per row, ties broken toward the lowest class index.
template <class T>
Prediction<T> predict(Network<T>& net, const Tensor<T>& batch) {
    Prediction<T> out;
    out.probabilities = net.forward(batch, Mode::Infer);
    const std::size_t n = out.probabilities.extent(0), k = out.probabilities.extent(1);
    const T* p = out.probabilities.data();
    out.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j) {
            if (p[i * k + j] > p[i * k + best]) best = j;
        }
        out.labels.push_back(static_cast<int>(best));
    }
    return out;
}

} // namespace banknet

#endif
