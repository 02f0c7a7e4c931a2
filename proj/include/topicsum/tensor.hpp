#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "topicsum/common.hpp"

namespace topicsum::ad {

// Dense row-major tensor. Rank 1 and 2 cover everything the model needs.
template <typename S>
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<S> v;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> dims) : shape(std::move(dims)) {
        v.assign(count(shape), S(0));
    }
    Tensor(std::vector<std::size_t> dims, std::vector<S> values)
        : shape(std::move(dims)), v(std::move(values)) {
        if (v.size() != count(shape)) throw ValidationError("tensor value count mismatch");
    }

    static std::size_t count(const std::vector<std::size_t>& dims) {
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        return n;
    }

    static Tensor zeros(std::vector<std::size_t> dims) { return Tensor(std::move(dims)); }
    static Tensor scalar(S value) { return Tensor({1}, {value}); }
    static Tensor vector(std::vector<S> values) {
        const std::size_t n = values.size();
        return Tensor({n}, std::move(values));
    }

    std::size_t size() const { return v.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
    std::size_t cols() const { return shape.size() < 2 ? (shape.empty() ? 0 : 1) : shape[1]; }

    S& at(std::size_t i) { return v[i]; }
    S at(std::size_t i) const { return v[i]; }
    S& at(std::size_t r, std::size_t c) { return v[r * cols() + c]; }
    S at(std::size_t r, std::size_t c) const { return v[r * cols() + c]; }

    void fill(S value) { std::fill(v.begin(), v.end(), value); }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    template <typename T>
    Tensor<T> cast() const {
        Tensor<T> out;
        out.shape = shape;
        out.v.reserve(v.size());
        for (S x : v) out.v.push_back(static_cast<T>(x));
        return out;
    }

    std::string shape_str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < shape.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(shape[i]);
        }
        return s + ")";
    }
};

}  // namespace topicsum::ad
