#ifndef QTF_TYPES_HPP
#define QTF_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qtf {

/// Column-major matrix of quantile trends; column j is the trend of the
/// j-th quantile level.
struct TrendMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // column-major, rows * cols

    TrendMatrix() = default;
    TrendMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }

    std::span<double> col(std::size_t j) { return {data.data() + j * rows, rows}; }
    std::span<const double> col(std::size_t j) const { return {data.data() + j * rows, rows}; }
};

/// Quantile levels, per-quantile penalties and the difference order
/// parameter k (the penalty differences have order k+1).
struct QuantileSpec {
    std::vector<double> taus;
    std::vector<double> lambdas;
    std::size_t k = 2;

    std::size_t count() const { return taus.size(); }

    /// Throws DimensionError / std::invalid_argument when the levels are
    /// not strictly increasing in (0,1), a lambda is negative, or the
    /// sizes disagree.
    void validate() const;

    static QuantileSpec uniform(std::vector<double> taus, double lambda, std::size_t k = 2);
};

/// Per-observation 0/1 weights; zeros mark missing or held-out points.
struct WeightMask {
    std::vector<std::uint8_t> weights;

    std::size_t size() const { return weights.size(); }
    bool all_ones() const;
    std::size_t count_ones() const;

    static WeightMask ones(std::size_t n) { return WeightMask{std::vector<std::uint8_t>(n, 1)}; }
};

/// Proximity term tying a block solve to an outer consensus iterate:
/// sum_j (theta_j - anchor_j)' dual_j + (gamma/2) ||theta_j - anchor_j||^2.
struct CouplingTerm {
    TrendMatrix anchor;
    TrendMatrix duals;
    double gamma = 1.0;
};

struct FitResult {
    TrendMatrix theta;
    std::size_t inner_iterations = 0;
    double objective = 0.0;            // check loss + penalty at theta
    std::vector<std::size_t> knots;    // per quantile: nonzero entries of D theta
};

/// Inner ADMM controls for solve_block.
struct InnerControls {
    double gamma = 1.0;                // initial splitting penalty
    bool adapt_gamma = true;           // residual balancing (x2 / /2 at 10x imbalance)
    double obj_tol = 1e-8;             // |f_m - f_{m-1}| <= obj_tol * (1 + |f_m|)
    double cons_tol = 1e-8;            // max split-constraint gap, relative to 1 + ||y||_inf
    std::size_t max_iterations = 10000;
    std::vector<double>* objective_trace = nullptr;  // per-iteration objective, when set
};

}  // namespace qtf

#endif
