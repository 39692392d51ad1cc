#ifndef QTF_BANDED_HPP
#define QTF_BANDED_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qtf/difference_operator.hpp"

namespace qtf {

class BandedCholesky;

/*
 * Symmetric positive-definite matrix stored by its lower bands:
 * bands_[d][i] = A(i+d, i) for d = 0..bandwidth. Only the lower triangle
 * is kept; the matrix is symmetric by construction.
 */
class BandedSPDSystem {
public:
    BandedSPDSystem(std::size_t n, std::size_t bandwidth);

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return bw_; }

    /// Entry A(i+d, i) of the lower triangle; d <= bandwidth, i+d < n.
    double& at(std::size_t d, std::size_t i) { return bands_[d][i]; }
    double at(std::size_t d, std::size_t i) const { return bands_[d][i]; }

    /// A += a * I
    void add_scaled_identity(double a);

    /// A += b * D^T D for a difference operator of matching length.
    /// The operator's order must not exceed the stored bandwidth.
    void add_scaled_gram(const DifferenceOperator& op, double b);

    /// y = A x (used by residual checks).
    std::vector<double> multiply(std::span<const double> x) const;

    /// Banded LL^T factorization; throws FactorizationError on a
    /// non-positive pivot.
    BandedCholesky factorize() const;

private:
    std::size_t n_;
    std::size_t bw_;
    std::vector<std::vector<double>> bands_;  // bands_[d] has length n - d
};

/// Lower-triangular banded Cholesky factor; read-only after construction
/// and safe to share across threads.
class BandedCholesky {
public:
    std::size_t size() const { return n_; }

    void solve_in_place(std::span<double> x) const;
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    friend class BandedSPDSystem;
    BandedCholesky(std::size_t n, std::size_t bw) : n_(n), bw_(bw) {}

    std::size_t n_;
    std::size_t bw_;
    std::vector<std::vector<double>> bands_;
};

/// One-shot factorize + solve.
std::vector<double> solve_banded(const BandedSPDSystem& system, std::span<const double> rhs);

}  // namespace qtf

#endif
