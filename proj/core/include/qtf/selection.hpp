#ifndef QTF_SELECTION_HPP
#define QTF_SELECTION_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qtf/types.hpp"

namespace qtf {

struct LambdaGrid {
    std::vector<double> values;  // positive, strictly increasing

    void validate() const;

    static LambdaGrid log_spaced(double lo, double hi, std::size_t count);

    /// 20 log-spaced values spanning [1e-2, 1e2] * (n/5).
    static LambdaGrid default_for(std::size_t n);
};

enum class Criterion { sic, bic_scaled, ebic, validation };

const char* criterion_name(Criterion c);
Criterion criterion_from_name(const std::string& name);

/// log[(1/n) rho_tau(y - theta)] + nu log(n) / (2n).
/// A zero check loss yields -inf and is flagged degenerate by callers.
double sic(std::span<const double> y, std::span<const double> theta_col, double tau,
           std::size_t nu);

/// (2/sigma) rho_tau(y - theta) + nu log(n) with the asymmetric-Laplace
/// scale sigma = (1 - |1 - 2 tau|) / 2.
double bic_scaled(std::span<const double> y, std::span<const double> theta_col, double tau,
                  std::size_t nu);

/// bic_scaled + 2 log C(P, nu) with P = n - k - 1; log-binomial via
/// lgamma. Throws std::domain_error when nu > P.
double ebic(std::span<const double> y, std::span<const double> theta_col, double tau,
            std::size_t nu, std::size_t k);

/// Fit with the holdout entries masked out, then return the check loss of
/// each quantile restricted to the holdout set.
std::vector<double> validation_errors(std::span<const double> y, std::span<const double> taus,
                                      double lambda, std::size_t k, const WeightMask& holdout,
                                      const InnerControls& controls = {});

/// Mask with every stride-th observation held out (weight 0), starting at
/// offset stride-1.
WeightMask holdout_every(std::size_t n, std::size_t stride);

struct CriterionValue {
    Criterion criterion = Criterion::sic;
    double lambda = 0.0;
    double tau = 0.0;
    double value = 0.0;
    std::size_t nu = 0;
    bool degenerate = false;  // zero check loss inside the SIC log
};

struct SelectionReport {
    Criterion criterion = Criterion::sic;
    LambdaGrid grid;
    std::vector<double> taus;
    std::vector<CriterionValue> table;      // one row per (lambda, tau)
    std::vector<double> chosen_lambdas;     // per tau
    std::vector<std::size_t> chosen_nus;    // knot counts at the refit

    std::string to_json() const;
};

struct SelectionOptions {
    std::size_t holdout_stride = 5;  // validation criterion only
    InnerControls controls;
    WeightMask mask;                 // empty -> all ones
};

struct SelectionResult {
    SelectionReport report;
    FitResult refit;
};

/*
 * Shared-lambda grid sweep: fit all quantiles jointly at each grid value,
 * score the criterion per (lambda, tau), pick the per-quantile minimizer
 * (ties toward the larger, smoother lambda), then refit once with the
 * chosen lambda vector. The J-dimensional grid is deliberately not
 * searched.
 */
SelectionResult select_lambdas(std::span<const double> y, std::vector<double> taus,
                               const LambdaGrid& grid, Criterion criterion, std::size_t k,
                               const SelectionOptions& options = {});

}  // namespace qtf

#endif
