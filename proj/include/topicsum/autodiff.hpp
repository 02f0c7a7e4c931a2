#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "topicsum/tensor.hpp"

namespace topicsum::ad {

// Learnable tensor living outside any graph; gradients accumulate across
// graphs until zero_grad, which is what mini-batch accumulation needs.
template <typename S>
struct Parameter {
    std::string name;
    Tensor<S> value;
    Tensor<S> grad;

    Parameter() = default;
    Parameter(std::string n, Tensor<S> v) : name(std::move(n)), value(std::move(v)) {
        grad = Tensor<S>::zeros(value.shape);
    }

    void zero_grad() { grad.fill(S(0)); }
};

using Var = int;

// Dynamic computation graph: ops evaluate eagerly and push a backward
// closure; backward() replays closures in reverse creation order. One graph
// per forward pass; parameters alias external storage.
template <typename S>
class Graph {
public:
    explicit Graph(bool training = false, std::mt19937_64* rng = nullptr)
        : training_(training), rng_(rng) {}

    bool training() const { return training_; }
    std::mt19937_64& rng() {
        if (!rng_) throw ValidationError("graph has no RNG attached");
        return *rng_;
    }

    Var constant(Tensor<S> value) {
        nodes_.emplace_back();
        Node& n = nodes_.back();
        n.storage = std::move(value);
        n.value = &n.storage;
        n.grad = nullptr;
        n.needs_grad = false;
        return static_cast<Var>(nodes_.size() - 1);
    }

    Var param(Parameter<S>& p) {
        nodes_.emplace_back();
        Node& n = nodes_.back();
        n.value = &p.value;
        n.grad = &p.grad;
        n.needs_grad = true;
        return static_cast<Var>(nodes_.size() - 1);
    }

    // Low-level node constructor for ops (and for test doubles with
    // deliberately wrong backward passes).
    Var make_node(Tensor<S> value, bool needs_grad, std::function<void()> backward) {
        nodes_.emplace_back();
        Node& n = nodes_.back();
        n.storage = std::move(value);
        n.value = &n.storage;
        n.needs_grad = needs_grad;
        if (needs_grad) {
            n.grad_storage = Tensor<S>::zeros(n.storage.shape);
            n.grad = &n.grad_storage;
            n.backward = std::move(backward);
        }
        return static_cast<Var>(nodes_.size() - 1);
    }

    const Tensor<S>& value(Var v) const { return *nodes_[static_cast<std::size_t>(v)].value; }
    bool needs_grad(Var v) const { return nodes_[static_cast<std::size_t>(v)].needs_grad; }
    Tensor<S>* grad_ptr(Var v) { return nodes_[static_cast<std::size_t>(v)].grad; }
    const Tensor<S>& grad(Var v) const {
        const Node& n = nodes_[static_cast<std::size_t>(v)];
        if (!n.grad) throw ValidationError("node has no gradient");
        return *n.grad;
    }

    void backward(Var root) {
        Node& r = nodes_[static_cast<std::size_t>(root)];
        if (r.value->size() != 1) throw ValidationError("backward root must be a scalar");
        if (!r.needs_grad) return;  // nothing upstream is learnable
        r.grad->v[0] = S(1);
        for (std::size_t i = static_cast<std::size_t>(root) + 1; i-- > 0;) {
            Node& n = nodes_[i];
            if (n.needs_grad && n.backward) n.backward();
        }
    }

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Tensor<S> storage;
        Tensor<S> grad_storage;
        const Tensor<S>* value = nullptr;
        Tensor<S>* grad = nullptr;
        std::function<void()> backward;
        bool needs_grad = false;
    };

    // deque keeps node addresses stable for the pointer-capturing closures.
    std::deque<Node> nodes_;
    bool training_;
    std::mt19937_64* rng_;
};

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

namespace ops_detail {

template <typename S>
void check_2d(const Tensor<S>& t, const char* who) {
    if (t.rank() != 2) throw ValidationError(std::string(who) + ": expected rank-2 tensor, got " +
                                             t.shape_str());
}

}  // namespace ops_detail

// C = A(m×k) · B(k×n)
template <typename S>
Var matmul(Graph<S>& g, Var a, Var b) {
    const Tensor<S>& A = g.value(a);
    const Tensor<S>& B = g.value(b);
    ops_detail::check_2d(A, "matmul");
    ops_detail::check_2d(B, "matmul");
    if (A.cols() != B.rows())
        throw ValidationError("matmul: inner dimensions " + A.shape_str() + " x " + B.shape_str());
    const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
    Tensor<S> C({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        const S* arow = &A.v[i * k];
        S* crow = &C.v[i * n];
        for (std::size_t t = 0; t < k; ++t) {
            const S av = arow[t];
            if (av == S(0)) continue;
            const S* brow = &B.v[t * n];
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
    const bool ng = g.needs_grad(a) || g.needs_grad(b);
    Var out = g.make_node(std::move(C), ng, nullptr);
    if (!ng) return out;
    Tensor<S>* ga = g.grad_ptr(a);
    Tensor<S>* gb = g.grad_ptr(b);
    const Tensor<S>* Ap = &g.value(a);
    const Tensor<S>* Bp = &g.value(b);
    const Tensor<S>* gout = &g.grad(out);
    return g.make_node_replace_backward(out, [=]() {
        // dA = dC·Bᵀ, dB = Aᵀ·dC
        if (ga) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const S gv = gout->v[i * n + j];
                    if (gv == S(0)) continue;
                    for (std::size_t t = 0; t < k; ++t)
                        ga->v[i * k + t] += gv * Bp->v[t * n + j];
                }
        }
        if (gb) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t t = 0; t < k; ++t) {
                    const S av = Ap->v[i * k + t];
                    if (av == S(0)) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        gb->v[t * n + j] += av * gout->v[i * n + j];
                }
        }
    });
}

}  // namespace topicsum::ad
