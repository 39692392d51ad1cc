#ifndef QTF_SOLVER_HPP
#define QTF_SOLVER_HPP

#include <cstddef>
#include <span>

#include "qtf/types.hpp"

namespace qtf {

/*
 * Solve the single-block multi-quantile trend filtering problem
 *
 *   minimize_{Theta in C}  sum_j [ rho_tau_j(y - theta_j)
 *                                  + lambda_j ||D^(k+1) theta_j||_1 ]
 *
 * over the non-crossing cone C = { theta_{ij} <= theta_{ij'} for j <= j' },
 * optionally plus a window-coupling term
 *
 *   sum_j [ (theta_j - anchor_j)' dual_j + (gamma/2)||theta_j - anchor_j||^2 ].
 *
 * The check loss is masked: entries with weight 0 contribute nothing and
 * cannot influence the fit.
 *
 * Inner algorithm: ADMM on the splitting r_j = y - theta_j (check-loss
 * prox), z_j = D theta_j (soft threshold), and a row-projected copy of
 * Theta for the non-crossing constraint. Each theta_j update solves one
 * banded SPD system whose factorization is reused across iterations.
 *
 * Throws ConvergenceError when the iteration budget runs out and
 * DimensionError on inconsistent inputs.
 */
FitResult solve_block(std::span<const double> y, const QuantileSpec& spec,
                      const WeightMask& mask, const CouplingTerm* coupling = nullptr,
                      const InnerControls& controls = {},
                      const TrendMatrix* warm_start = nullptr);

/// Convenience overload: full mask, no coupling.
FitResult solve_block(std::span<const double> y, const QuantileSpec& spec,
                      const InnerControls& controls = {});

/// Masked objective of the problem above (no coupling terms) at theta.
double block_objective(std::span<const double> y, const QuantileSpec& spec,
                       const WeightMask& mask, const TrendMatrix& theta);

/// Number of working knots: entries of D^(k+1) theta exceeding
/// tol * max(1, ||D^(k+1) theta||_inf).
std::size_t count_knots(std::span<const double> theta_col, std::size_t k, double tol = 1e-6);

}  // namespace qtf

#endif
