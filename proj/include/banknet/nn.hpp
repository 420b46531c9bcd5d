#ifndef BANKNET_NN_HPP
#define BANKNET_NN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "banknet/errors.hpp"
#include "banknet/rng.hpp"
#include "banknet/tensor.hpp"

namespace banknet {

enum class Mode { Train, Infer };

// ---------------------------------------------------------------------------
// Convolution. Unit stride, valid (no implicit padding), cross-correlation
// orientation: out[n,y,x,f] = bias[f] + sum_{dy,dx,c} in[n,y+dy,x+dx,c] * k[dy,dx,c,f].
// ---------------------------------------------------------------------------

template <class T>
struct Conv2dCache {
    Tensor<T> input;
    Tensor<T> kernel;
};

template <class T>
struct Conv2dGrads {
    Tensor<T> input;
    Tensor<T> kernel;
    Tensor<T> bias;
};

template <class T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                         Conv2dCache<T>* cache = nullptr) {
    if (input.rank() != 4 || kernel.rank() != 4 || bias.rank() != 1) {
        throw ShapeError("conv2d: input rank-4, kernel rank-4, bias rank-1 required");
    }
    const std::size_t n = input.extent(0), h = input.extent(1), w = input.extent(2), ci = input.extent(3);
    const std::size_t kh = kernel.extent(0), kw = kernel.extent(1);
    if (kernel.extent(2) != ci) {
        throw ShapeError("conv2d: kernel input channels " + std::to_string(kernel.extent(2)) + " vs " +
                         std::to_string(ci));
    }
    const std::size_t co = kernel.extent(3);
    if (bias.extent(0) != co) throw ShapeError("conv2d: bias length vs output channels");
    if (h < kh || w < kw) {
        throw ShapeError("conv2d: kernel " + std::to_string(kh) + "x" + std::to_string(kw) +
                         " larger than input " + std::to_string(h) + "x" + std::to_string(w));
    }
    const std::size_t oh = h - kh + 1, ow = w - kw + 1;
    Tensor<T> out = Tensor<T>::zeros({n, oh, ow, co});

    const T* pin = input.data();
    const T* pk = kernel.data();
    const T* pb = bias.data();
    T* po = out.data();
    for (std::size_t b = 0; b < n; ++b) {
        const T* img = pin + b * h * w * ci;
        for (std::size_t y = 0; y < oh; ++y) {
            for (std::size_t x = 0; x < ow; ++x) {
                T* orow = po + ((b * oh + y) * ow + x) * co;
                for (std::size_t f = 0; f < co; ++f) orow[f] = pb[f];
                for (std::size_t dy = 0; dy < kh; ++dy) {
                    const T* irow = img + ((y + dy) * w + x) * ci;
                    const T* krow = pk + dy * kw * ci * co;
                    for (std::size_t dx = 0; dx < kw; ++dx) {
                        const T* ipix = irow + dx * ci;
                        const T* kpix = krow + dx * ci * co;
                        for (std::size_t c = 0; c < ci; ++c) {
                            const T v = ipix[c];
                            const T* kf = kpix + c * co;
                            for (std::size_t f = 0; f < co; ++f) orow[f] += v * kf[f];
                        }
                    }
                }
            }
        }
    }
    if (cache) {
        cache->input = input;
        cache->kernel = kernel;
    }
    return out;
}

template <class T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& grad_out, const Conv2dCache<T>& cache) {
    const Tensor<T>& input = cache.input;
    const Tensor<T>& kernel = cache.kernel;
    const std::size_t n = input.extent(0), h = input.extent(1), w = input.extent(2), ci = input.extent(3);
    const std::size_t kh = kernel.extent(0), kw = kernel.extent(1), co = kernel.extent(3);
    const std::size_t oh = h - kh + 1, ow = w - kw + 1;
    if (grad_out.shape() != std::vector<std::size_t>{n, oh, ow, co}) {
        throw ShapeError("conv2d_backward: grad_out " + grad_out.shape_str() + " inconsistent with cache");
    }

    Conv2dGrads<T> g;
    g.input = zeros_like(input);
    g.kernel = zeros_like(kernel);
    g.bias = Tensor<T>::zeros({co});

    const T* pin = input.data();
    const T* pk = kernel.data();
    const T* pg = grad_out.data();
    T* gi = g.input.data();
    T* gk = g.kernel.data();
    T* gb = g.bias.data();

    for (std::size_t b = 0; b < n; ++b) {
        const T* img = pin + b * h * w * ci;
        T* gimg = gi + b * h * w * ci;
        for (std::size_t y = 0; y < oh; ++y) {
            for (std::size_t x = 0; x < ow; ++x) {
                const T* grow = pg + ((b * oh + y) * ow + x) * co;
                for (std::size_t f = 0; f < co; ++f) gb[f] += grow[f];
                for (std::size_t dy = 0; dy < kh; ++dy) {
                    for (std::size_t dx = 0; dx < kw; ++dx) {
                        const std::size_t ioff = ((y + dy) * w + x + dx) * ci;
                        const T* ipix = img + ioff;
                        T* gpix = gimg + ioff;
                        for (std::size_t c = 0; c < ci; ++c) {
                            const std::size_t koff = ((dy * kw + dx) * ci + c) * co;
                            const T* kf = pk + koff;
                            T* gkf = gk + koff;
                            const T v = ipix[c];
                            T acc = 0;
                            for (std::size_t f = 0; f < co; ++f) {
                                const T go = grow[f];
                                gkf[f] += v * go;
                                acc += kf[f] * go;
                            }
                            gpix[c] += acc;
                        }
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Zero padding; backward is the crop.
// ---------------------------------------------------------------------------

template <class T>
Tensor<T> zero_pad2d(const Tensor<T>& input, std::size_t ph, std::size_t pw) {
    if (input.rank() != 4) throw ShapeError("zero_pad2d: rank-4 input required");
    const std::size_t n = input.extent(0), h = input.extent(1), w = input.extent(2), c = input.extent(3);
    Tensor<T> out = Tensor<T>::zeros({n, h + 2 * ph, w + 2 * pw, c});
    const std::size_t wo = w + 2 * pw;
    const T* pin = input.data();
    T* po = out.data();
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t y = 0; y < h; ++y) {
            const T* src = pin + (b * h + y) * w * c;
            T* dst = po + ((b * (h + 2 * ph) + y + ph) * wo + pw) * c;
            std::copy(src, src + w * c, dst);
        }
    }
    return out;
}

template <class T>
Tensor<T> zero_pad2d_backward(const Tensor<T>& grad_out, std::size_t ph, std::size_t pw) {
    if (grad_out.rank() != 4) throw ShapeError("zero_pad2d_backward: rank-4 input required");
    const std::size_t n = grad_out.extent(0), hp = grad_out.extent(1), wp = grad_out.extent(2),
                      c = grad_out.extent(3);
    if (hp < 2 * ph + 1 || wp < 2 * pw + 1) throw ShapeError("zero_pad2d_backward: padded extent too small");
    const std::size_t h = hp - 2 * ph, w = wp - 2 * pw;
    Tensor<T> out = Tensor<T>::zeros({n, h, w, c});
    const T* pg = grad_out.data();
    T* po = out.data();
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t y = 0; y < h; ++y) {
            const T* src = pg + ((b * hp + y + ph) * wp + pw) * c;
            T* dst = po + (b * h + y) * w * c;
            std::copy(src, src + w * c, dst);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Max pooling. Floor output extents; a trailing odd row/column is dropped.
// Ties go to the first maximal element in row-major window order.
// ---------------------------------------------------------------------------

template <class T>
struct MaxPoolCache {
    std::vector<std::size_t> input_shape;
    std::vector<std::size_t> argmax; // flat input index per output element
};

template <class T>
Tensor<T> maxpool2d_forward(const Tensor<T>& input, std::size_t wh, std::size_t ww, std::size_t sh,
                            std::size_t sw, MaxPoolCache<T>* cache = nullptr) {
    if (input.rank() != 4) throw ShapeError("maxpool2d: rank-4 input required");
    if (wh == 0 || ww == 0 || sh == 0 || sw == 0) throw ShapeError("maxpool2d: zero window or stride");
    const std::size_t n = input.extent(0), h = input.extent(1), w = input.extent(2), c = input.extent(3);
    if (h < wh || w < ww) {
        throw ShapeError("maxpool2d: input " + std::to_string(h) + "x" + std::to_string(w) +
                         " smaller than window " + std::to_string(wh) + "x" + std::to_string(ww));
    }
    const std::size_t oh = (h - wh) / sh + 1, ow = (w - ww) / sw + 1;
    Tensor<T> out = Tensor<T>::zeros({n, oh, ow, c});
    if (cache) {
        cache->input_shape = input.shape();
        cache->argmax.assign(out.size(), 0);
    }
    const T* pin = input.data();
    T* po = out.data();
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t y = 0; y < oh; ++y) {
            for (std::size_t x = 0; x < ow; ++x) {
                for (std::size_t ch = 0; ch < c; ++ch) {
                    const std::size_t y0 = y * sh, x0 = x * sw;
                    std::size_t best = ((b * h + y0) * w + x0) * c + ch;
                    T bestv = pin[best];
                    for (std::size_t dy = 0; dy < wh; ++dy) {
                        for (std::size_t dx = 0; dx < ww; ++dx) {
                            const std::size_t idx = ((b * h + y0 + dy) * w + x0 + dx) * c + ch;
                            if (pin[idx] > bestv) {
                                bestv = pin[idx];
                                best = idx;
                            }
                        }
                    }
                    const std::size_t oidx = ((b * oh + y) * ow + x) * c + ch;
                    po[oidx] = bestv;
                    if (cache) cache->argmax[oidx] = best;
                }
            }
        }
    }
    return out;
}

template <class T>
Tensor<T> maxpool2d_backward(const Tensor<T>& grad_out, const MaxPoolCache<T>& cache) {
    if (grad_out.size() != cache.argmax.size()) {
        throw ShapeError("maxpool2d_backward: grad_out inconsistent with cache");
    }
    Tensor<T> g = Tensor<T>::zeros(cache.input_shape);
    T* pg = g.data();
    const T* po = grad_out.data();
    for (std::size_t i = 0; i < grad_out.size(); ++i) pg[cache.argmax[i]] += po[i];
    return g;
}

// ---------------------------------------------------------------------------
// Dense (fully connected): out = input * weight + bias, per row.
// ---------------------------------------------------------------------------

template <class T>
struct DenseCache {
    Tensor<T> input;
    Tensor<T> weight;
};

template <class T>
struct DenseGrads {
    Tensor<T> input;
    Tensor<T> weight;
    Tensor<T> bias;
};

template <class T>
Tensor<T> dense_forward(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                        DenseCache<T>* cache = nullptr) {
    if (input.rank() != 2 || weight.rank() != 2 || bias.rank() != 1) {
        throw ShapeError("dense: input/weight rank-2, bias rank-1 required");
    }
    const std::size_t n = input.extent(0), din = input.extent(1);
    if (weight.extent(0) != din || weight.extent(1) != bias.extent(0)) {
        throw ShapeError("dense: weight " + weight.shape_str() + " vs input " + input.shape_str() +
                         " and bias " + bias.shape_str());
    }
    const std::size_t dout = weight.extent(1);
    Tensor<T> out = matmul(input, weight);
    T* po = out.data();
    const T* pb = bias.data();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dout; ++j) po[i * dout + j] += pb[j];
    }
    if (cache) {
        cache->input = input;
        cache->weight = weight;
    }
    return out;
}

template <class T>
DenseGrads<T> dense_backward(const Tensor<T>& grad_out, const DenseCache<T>& cache) {
    const std::size_t n = cache.input.extent(0), din = cache.input.extent(1);
    const std::size_t dout = cache.weight.extent(1);
    if (grad_out.shape() != std::vector<std::size_t>{n, dout}) {
        throw ShapeError("dense_backward: grad_out " + grad_out.shape_str() + " inconsistent with cache");
    }
    DenseGrads<T> g;
    // grad_input = grad_out * W^T ; grad_weight = X^T * grad_out
    g.input = Tensor<T>::zeros({n, din});
    g.weight = Tensor<T>::zeros({din, dout});
    g.bias = Tensor<T>::zeros({dout});
    const T* px = cache.input.data();
    const T* pw = cache.weight.data();
    const T* pg = grad_out.data();
    T* gi = g.input.data();
    T* gw = g.weight.data();
    T* gb = g.bias.data();
    for (std::size_t i = 0; i < n; ++i) {
        const T* grow = pg + i * dout;
        for (std::size_t j = 0; j < dout; ++j) gb[j] += grow[j];
        for (std::size_t p = 0; p < din; ++p) {
            const T* wrow = pw + p * dout;
            T* gwrow = gw + p * dout;
            const T xv = px[i * din + p];
            T acc = 0;
            for (std::size_t j = 0; j < dout; ++j) {
                acc += wrow[j] * grow[j];
                gwrow[j] += xv * grow[j];
            }
            gi[i * din + p] = acc;
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// ReLU. Gradient is 0 at exactly 0.
// ---------------------------------------------------------------------------

template <class T>
struct ReluCache {
    Tensor<T> input;
};

template <class T>
Tensor<T> relu(const Tensor<T>& input, ReluCache<T>* cache = nullptr) {
    Tensor<T> out = zeros_like(input);
    const T* pin = input.data();
    T* po = out.data();
    for (std::size_t i = 0; i < input.size(); ++i) po[i] = pin[i] > T(0) ? pin[i] : T(0);
    if (cache) cache->input = input;
    return out;
}

template <class T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const ReluCache<T>& cache) {
    if (!grad_out.same_shape(cache.input)) throw ShapeError("relu_backward: grad_out inconsistent with cache");
    Tensor<T> g = zeros_like(grad_out);
    const T* pin = cache.input.data();
    const T* pg = grad_out.data();
    T* po = g.data();
    for (std::size_t i = 0; i < g.size(); ++i) po[i] = pin[i] > T(0) ? pg[i] : T(0);
    return g;
}

// ---------------------------------------------------------------------------
// Softmax over the last axis of a rank-2 tensor, max-subtracted.
// ---------------------------------------------------------------------------

template <class T>
Tensor<T> softmax(const Tensor<T>& input) {
    if (input.rank() != 2) throw ShapeError("softmax: rank-2 input required");
    const std::size_t n = input.extent(0), k = input.extent(1);
    Tensor<T> out = zeros_like(input);
    const T* pin = input.data();
    T* po = out.data();
    for (std::size_t i = 0; i < n; ++i) {
        const T* row = pin + i * k;
        T* orow = po + i * k;
        T mx = row[0];
        for (std::size_t j = 1; j < k; ++j) mx = std::max(mx, row[j]);
        T sum = 0;
        for (std::size_t j = 0; j < k; ++j) {
            orow[j] = std::exp(row[j] - mx);
            sum += orow[j];
        }
        for (std::size_t j = 0; j < k; ++j) orow[j] /= sum;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Categorical cross-entropy on softmax outputs. Returns the mean loss and the
// fused gradient with respect to the pre-softmax logits: (probs - onehot)/n.
// ---------------------------------------------------------------------------

template <class T>
struct LossResult {
    T loss;
    Tensor<T> grad_logits;
};

template <class T>
LossResult<T> cross_entropy_loss(const Tensor<T>& probs, const std::vector<int>& labels) {
    if (probs.rank() != 2) throw ShapeError("cross_entropy: rank-2 probs required");
    const std::size_t n = probs.extent(0), k = probs.extent(1);
    if (labels.size() != n) throw ShapeError("cross_entropy: label count vs batch size");
    LossResult<T> r;
    r.grad_logits = zeros_like(probs);
    const T* pp = probs.data();
    T* pg = r.grad_logits.data();
    double loss = 0;
    const T invn = T(1) / static_cast<T>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= k) {
            throw ValueError("cross_entropy: label " + std::to_string(y) + " out of range [0," +
                             std::to_string(k) + ")");
        }
        const T p = std::max(pp[i * k + static_cast<std::size_t>(y)], T(1e-12));
        loss -= std::log(static_cast<double>(p));
        for (std::size_t j = 0; j < k; ++j) pg[i * k + j] = pp[i * k + j] * invn;
        pg[i * k + static_cast<std::size_t>(y)] -= invn;
    }
    r.loss = static_cast<T>(loss / static_cast<double>(n));
    return r;
}

// ---------------------------------------------------------------------------
// Batch normalization over the last axis (features/channels); all other axes
// are reduced. Train mode uses batch statistics (biased variance) and updates
// running stats in place; infer mode reads running stats only.
// ---------------------------------------------------------------------------

template <class T>
struct BatchNormCache {
    Tensor<T> xhat;
    std::vector<T> inv_std; // per feature
    Tensor<T> gamma;
    std::size_t reduce_count = 0;
};

template <class T>
Tensor<T> batchnorm_forward(const Tensor<T>& input, const Tensor<T>& gamma, const Tensor<T>& beta,
                            Tensor<T>& running_mean, Tensor<T>& running_var, T epsilon, T momentum,
                            Mode mode, BatchNormCache<T>* cache = nullptr) {
    if (input.rank() < 2) throw ShapeError("batchnorm: rank >= 2 input required");
    const std::size_t c = input.extent(input.rank() - 1);
    if (gamma.size() != c || beta.size() != c || running_mean.size() != c || running_var.size() != c) {
        throw ShapeError("batchnorm: parameter length vs feature count " + std::to_string(c));
    }
    const std::size_t m = input.size() / c; // reduce count per feature
    Tensor<T> out = zeros_like(input);
    const T* pin = input.data();
    T* po = out.data();
    const T* pgam = gamma.data();
    const T* pbet = beta.data();

    if (mode == Mode::Infer) {
        const T* pm = running_mean.data();
        const T* pv = running_var.data();
        std::vector<T> istd(c);
        for (std::size_t j = 0; j < c; ++j) istd[j] = T(1) / std::sqrt(pv[j] + epsilon);
        for (std::size_t i = 0; i < m; ++i) {
            const T* row = pin + i * c;
            T* orow = po + i * c;
            for (std::size_t j = 0; j < c; ++j) {
                orow[j] = pgam[j] * (row[j] - pm[j]) * istd[j] + pbet[j];
            }
        }
        return out;
    }

    if (m < 2) throw ShapeError("batchnorm: train mode needs >= 2 values per feature");

    std::vector<double> mean(c, 0.0), var(c, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const T* row = pin + i * c;
        for (std::size_t j = 0; j < c; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < c; ++j) mean[j] /= static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const T* row = pin + i * c;
        for (std::size_t j = 0; j < c; ++j) {
            const double d = row[j] - mean[j];
            var[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < c; ++j) var[j] /= static_cast<double>(m);

    std::vector<T> istd(c);
    for (std::size_t j = 0; j < c; ++j) {
        istd[j] = static_cast<T>(1.0 / std::sqrt(var[j] + static_cast<double>(epsilon)));
    }
    Tensor<T> xhat = zeros_like(input);
    T* ph = xhat.data();
    for (std::size_t i = 0; i < m; ++i) {
        const T* row = pin + i * c;
        T* hrow = ph + i * c;
        T* orow = po + i * c;
        for (std::size_t j = 0; j < c; ++j) {
            hrow[j] = (row[j] - static_cast<T>(mean[j])) * istd[j];
            orow[j] = pgam[j] * hrow[j] + pbet[j];
        }
    }

    T* prm = running_mean.data();
    T* prv = running_var.data();
    for (std::size_t j = 0; j < c; ++j) {
        prm[j] = momentum * prm[j] + (T(1) - momentum) * static_cast<T>(mean[j]);
        prv[j] = momentum * prv[j] + (T(1) - momentum) * static_cast<T>(var[j]);
    }

    if (cache) {
        cache->xhat = std::move(xhat);
        cache->inv_std = std::move(istd);
        cache->gamma = gamma;
        cache->reduce_count = m;
    }
    return out;
}

template <class T>
struct BatchNormGrads {
    Tensor<T> input;
    Tensor<T> gamma;
    Tensor<T> beta;
};

template <class T>
BatchNormGrads<T> batchnorm_backward(const Tensor<T>& grad_out, const BatchNormCache<T>& cache) {
    if (!grad_out.same_shape(cache.xhat)) {
        throw ShapeError("batchnorm_backward: grad_out inconsistent with cache");
    }
    const std::size_t c = cache.gamma.size();
    const std::size_t m = cache.reduce_count;
    BatchNormGrads<T> g;
    g.input = zeros_like(grad_out);
    g.gamma = Tensor<T>::zeros({c});
    g.beta = Tensor<T>::zeros({c});

    const T* pg = grad_out.data();
    const T* ph = cache.xhat.data();
    const T* pgam = cache.gamma.data();
    T* ggam = g.gamma.data();
    T* gbet = g.beta.data();

    // Per-feature sums of dy and dy*xhat; then the standard full-batch formula
    // dx = gamma*istd*(dy - mean(dy) - xhat*mean(dy*xhat)).
    std::vector<double> s1(c, 0.0), s2(c, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const T* grow = pg + i * c;
        const T* hrow = ph + i * c;
        for (std::size_t j = 0; j < c; ++j) {
            s1[j] += grow[j];
            s2[j] += grow[j] * hrow[j];
        }
    }
    for (std::size_t j = 0; j < c; ++j) {
        gbet[j] = static_cast<T>(s1[j]);
        ggam[j] = static_cast<T>(s2[j]);
    }
    const double invm = 1.0 / static_cast<double>(m);
    T* gi = g.input.data();
    for (std::size_t i = 0; i < m; ++i) {
        const T* grow = pg + i * c;
        const T* hrow = ph + i * c;
        T* girow = gi + i * c;
        for (std::size_t j = 0; j < c; ++j) {
            const double dxhat = grow[j] - s1[j] * invm - hrow[j] * s2[j] * invm;
            girow[j] = static_cast<T>(pgam[j] * cache.inv_std[j] * dxhat);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Inverted dropout: train zeroes each element with probability `rate` and
// scales survivors by 1/(1-rate); infer is the identity.
// ---------------------------------------------------------------------------

template <class T>
struct DropoutCache {
    Tensor<T> mask; // 0 or 1/(1-rate); empty for infer mode
};

template <class T>
Tensor<T> dropout(const Tensor<T>& input, double rate, Mode mode, Rng& rng,
                  DropoutCache<T>* cache = nullptr) {
    if (rate < 0.0 || rate >= 1.0) throw ValueError("dropout: rate must be in [0,1)");
    if (mode == Mode::Infer || rate == 0.0) {
        if (cache) cache->mask = Tensor<T>();
        return input;
    }
    const T scale = static_cast<T>(1.0 / (1.0 - rate));
    Tensor<T> mask = zeros_like(input);
    Tensor<T> out = zeros_like(input);
    const T* pin = input.data();
    T* pm = mask.data();
    T* po = out.data();
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (uniform01(rng) >= rate) {
            pm[i] = scale;
            po[i] = pin[i] * scale;
        }
    }
    if (cache) cache->mask = std::move(mask);
    return out;
}

template <class T>
Tensor<T> dropout_backward(const Tensor<T>& grad_out, const DropoutCache<T>& cache) {
    if (cache.mask.empty()) return grad_out; // identity pass
    return mul(grad_out, cache.mask);
}

} // namespace banknet

#endif
