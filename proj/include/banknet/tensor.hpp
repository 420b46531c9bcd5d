#ifndef BANKNET_TENSOR_HPP
#define BANKNET_TENSOR_HPP

#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "banknet/errors.hpp"

namespace banknet {

// Minimal row-major N-d array. The scalar type is the precision tag: float
// for training, double for finite-difference checks. No broadcasting; all
// elementwise operations demand identical shapes.
template <class T>
class Tensor {
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>,
                  "Tensor supports 32-bit and 64-bit precision only");

public:
    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> shape) {
        const std::size_t n = checked_volume(shape);
        Tensor t;
        t.shape_ = std::move(shape);
        t.data_.assign(n, T(0));
        return t;
    }

    static Tensor full(std::vector<std::size_t> shape, T value) {
        Tensor t = zeros(std::move(shape));
        t.data_.assign(t.data_.size(), value);
        return t;
    }

    static Tensor from_data(std::vector<std::size_t> shape, std::vector<T> values) {
        const std::size_t n = checked_volume(shape);
        if (values.size() != n) {
            throw ShapeError("from_data: " + std::to_string(values.size()) + " values for shape of volume " +
                             std::to_string(n));
        }
        Tensor t;
        t.shape_ = std::move(shape);
        t.data_ = std::move(values);
        return t;
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t extent(std::size_t axis) const { return shape_[axis]; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& values() { return data_; }
    const std::vector<T>& values() const { return data_; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    // Checked multi-index access; for tests and cold paths.
    T& at(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
    const T& at(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }

    std::size_t offset(std::initializer_list<std::size_t> idx) const {
        if (idx.size() != shape_.size()) throw ShapeError("index rank mismatch");
        std::size_t off = 0;
        std::size_t axis = 0;
        for (std::size_t i : idx) {
            if (i >= shape_[axis]) throw ShapeError("index out of range on axis " + std::to_string(axis));
            off = off * shape_[axis] + i;
            ++axis;
        }
        return off;
    }

    Tensor reshaped(std::vector<std::size_t> new_shape) const {
        const std::size_t n = checked_volume(new_shape);
        if (n != data_.size()) {
            throw ShapeError("reshape: volume " + std::to_string(n) + " != " + std::to_string(data_.size()));
        }
        Tensor t;
        t.shape_ = std::move(new_shape);
        t.data_ = data_;
        return t;
    }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    std::string shape_str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
        os << ']';
        return os.str();
    }

private:
    static std::size_t checked_volume(const std::vector<std::size_t>& shape) {
        if (shape.empty()) throw ShapeError("empty shape");
        std::size_t n = 1;
        for (std::size_t e : shape) {
            if (e == 0) throw ShapeError("zero extent in shape");
            n *= e;
        }
        return n;
    }

    std::vector<std::size_t> shape_;
    std::vector<T> data_;
};

template <class T>
Tensor<T> zeros_like(const Tensor<T>& t) {
    return Tensor<T>::zeros(t.shape());
}

namespace detail {
template <class T, class F>
Tensor<T> zip(const Tensor<T>& a, const Tensor<T>& b, F f, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor<T> out = zeros_like(a);
    const T* pa = a.data();
    const T* pb = b.data();
    T* po = out.data();
    for (std::size_t i = 0; i < a.size(); ++i) po[i] = f(pa[i], pb[i]);
    return out;
}
} // namespace detail

template <class T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::zip(a, b, [](T x, T y) { return x + y; }, "add");
}

template <class T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::zip(a, b, [](T x, T y) { return x - y; }, "sub");
}

template <class T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
    return detail::zip(a, b, [](T x, T y) { return x * y; }, "mul");
}

// Rank-2 [m,k] x [k,n] -> [m,n].
template <class T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.rank() != 2 || b.rank() != 2) throw ShapeError("matmul: rank-2 tensors required");
    const std::size_t m = a.extent(0), k = a.extent(1);
    const std::size_t k2 = b.extent(0), n = b.extent(1);
    if (k != k2) {
        throw ShapeError("matmul: inner dimensions " + std::to_string(k) + " vs " + std::to_string(k2));
    }
    Tensor<T> out = Tensor<T>::zeros({m, n});
    const T* pa = a.data();
    const T* pb = b.data();
    T* po = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const T av = pa[i * k + p];
            const T* brow = pb + p * n;
            T* orow = po + i * n;
            for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
        }
    }
    return out;
}

} // namespace banknet

#endif
