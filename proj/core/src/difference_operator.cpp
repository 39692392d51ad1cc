#include "qtf/difference_operator.hpp"

#include "qtf/errors.hpp"

#include <string>

namespace qtf {

DifferenceOperator::DifferenceOperator(std::size_t n, std::size_t order)
    : n_(n), order_(order), stencil_(order + 1, 0.0) {
    if (order < 1) {
        throw DimensionError("difference order must be >= 1");
    }
    if (n < order + 1) {
        throw DimensionError("series length " + std::to_string(n) +
                             " too small for difference order " + std::to_string(order));
    }
    // Build the stencil by the recursion D^(m+1) = D^(1) D^(m):
    // each step convolves with [-1, 1].
    stencil_[0] = -1.0;
    stencil_[1] = 1.0;
    for (std::size_t m = 1; m < order; ++m) {
        std::vector<double> next(m + 2, 0.0);
        for (std::size_t p = 0; p <= m + 1; ++p) {
            const double prev = (p >= 1) ? stencil_[p - 1] : 0.0;
            const double cur = (p <= m) ? stencil_[p] : 0.0;
            next[p] = prev - cur;
        }
        stencil_.swap(next);
    }
    stencil_.resize(order + 1);
}

void DifferenceOperator::apply(std::span<const double> v, std::span<double> out) const {
    if (v.size() != n_) {
        throw DimensionError("apply: expected vector of length " + std::to_string(n_));
    }
    if (out.size() != rows()) {
        throw DimensionError("apply: output length mismatch");
    }
    const std::size_t m = rows();
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t p = 0; p <= order_; ++p) {
            acc += stencil_[p] * v[i + p];
        }
        out[i] = acc;
    }
}

std::vector<double> DifferenceOperator::apply(std::span<const double> v) const {
    std::vector<double> out(rows());
    apply(v, out);
    return out;
}

void DifferenceOperator::apply_transpose(std::span<const double> u, std::span<double> out) const {
    if (u.size() != rows()) {
        throw DimensionError("apply_transpose: expected vector of length " +
                             std::to_string(rows()));
    }
    if (out.size() != n_) {
        throw DimensionError("apply_transpose: output length mismatch");
    }
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t m = rows();
    for (std::size_t i = 0; i < m; ++i) {
        const double ui = u[i];
        for (std::size_t p = 0; p <= order_; ++p) {
            out[i + p] += stencil_[p] * ui;
        }
    }
}

std::vector<double> DifferenceOperator::apply_transpose(std::span<const double> u) const {
    std::vector<double> out(n_);
    apply_transpose(u, out);
    return out;
}

}  // namespace qtf
