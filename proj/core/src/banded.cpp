#include "qtf/banded.hpp"

#include "qtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtf {

BandedSPDSystem::BandedSPDSystem(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(std::min(bandwidth, n > 0 ? n - 1 : 0)) {
    if (n == 0) {
        throw DimensionError("banded system dimension must be positive");
    }
    bands_.resize(bw_ + 1);
    for (std::size_t d = 0; d <= bw_; ++d) {
        bands_[d].assign(n_ - d, 0.0);
    }
}

void BandedSPDSystem::add_scaled_identity(double a) {
    for (std::size_t i = 0; i < n_; ++i) {
        bands_[0][i] += a;
    }
}

void BandedSPDSystem::add_scaled_gram(const DifferenceOperator& op, double b) {
    if (op.length() != n_) {
        throw DimensionError("add_scaled_gram: operator length mismatch");
    }
    if (op.order() > bw_) {
        throw DimensionError("add_scaled_gram: operator order exceeds bandwidth");
    }
    const auto& c = op.stencil();
    const std::size_t m = op.rows();
    // (D^T D)(r+p, r+q) accumulates c[p] * c[q] over rows r.
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t p = 0; p <= op.order(); ++p) {
            for (std::size_t q = 0; q <= p; ++q) {
                bands_[p - q][r + q] += b * c[p] * c[q];
            }
        }
    }
}

std::vector<double> BandedSPDSystem::multiply(std::span<const double> x) const {
    if (x.size() != n_) {
        throw DimensionError("multiply: vector length mismatch");
    }
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        y[i] += bands_[0][i] * x[i];
        for (std::size_t d = 1; d <= bw_ && i + d < n_; ++d) {
            y[i + d] += bands_[d][i] * x[i];
            y[i] += bands_[d][i] * x[i + d];
        }
    }
    return y;
}

BandedCholesky BandedSPDSystem::factorize() const {
    BandedCholesky chol(n_, bw_);
    chol.bands_ = bands_;
    auto& L = chol.bands_;
    for (std::size_t j = 0; j < n_; ++j) {
        double diag = L[0][j];
        const std::size_t k_lo = (j > bw_) ? j - bw_ : 0;
        for (std::size_t k = k_lo; k < j; ++k) {
            const double ljk = L[j - k][k];
            diag -= ljk * ljk;
        }
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw FactorizationError("banded Cholesky: non-positive pivot at column " +
                                     std::to_string(j));
        }
        const double ljj = std::sqrt(diag);
        L[0][j] = ljj;
        const std::size_t i_hi = std::min(j + bw_, n_ - 1);
        for (std::size_t i = j + 1; i <= i_hi; ++i) {
            double acc = L[i - j][j];
            const std::size_t k_start = std::max(k_lo, (i > bw_) ? i - bw_ : 0);
            for (std::size_t k = k_start; k < j; ++k) {
                acc -= L[i - k][k] * L[j - k][k];
            }
            L[i - j][j] = acc / ljj;
        }
    }
    return chol;
}

void BandedCholesky::solve_in_place(std::span<double> x) const {
    if (x.size() != n_) {
        throw DimensionError("solve: rhs length mismatch");
    }
    const auto& L = bands_;
    // forward: L z = b
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = x[i];
        const std::size_t k_lo = (i > bw_) ? i - bw_ : 0;
        for (std::size_t k = k_lo; k < i; ++k) {
            acc -= L[i - k][k] * x[k];
        }
        x[i] = acc / L[0][i];
    }
    // backward: L^T x = z
    for (std::size_t ii = n_; ii-- > 0;) {
        double acc = x[ii];
        const std::size_t i_hi = std::min(ii + bw_, n_ - 1);
        for (std::size_t i = ii + 1; i <= i_hi; ++i) {
            acc -= L[i - ii][ii] * x[i];
        }
        x[ii] = acc / L[0][ii];
    }
}

std::vector<double> BandedCholesky::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

std::vector<double> solve_banded(const BandedSPDSystem& system, std::span<const double> rhs) {
    return system.factorize().solve(rhs);
}

}  // namespace qtf
