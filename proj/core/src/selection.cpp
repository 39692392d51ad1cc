#include "qtf/selection.hpp"

#include "qtf/errors.hpp"
#include "qtf/prox.hpp"
#include "qtf/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace qtf {

void LambdaGrid::validate() const {
    if (values.empty()) {
        throw std::invalid_argument("lambda grid is empty");
    }
    double prev = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("lambda grid values must be positive");
        }
        if (v <= prev) {
            throw std::invalid_argument("lambda grid must be strictly increasing");
        }
        prev = v;
    }
}

LambdaGrid LambdaGrid::log_spaced(double lo, double hi, std::size_t count) {
    if (count < 1 || !(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("log_spaced: need 0 < lo < hi and count >= 1");
    }
    LambdaGrid grid;
    grid.values.reserve(count);
    if (count == 1) {
        grid.values.push_back(lo);
        return grid;
    }
    const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid.values.push_back(std::exp(std::log(lo) + step * static_cast<double>(i)));
    }
    return grid;
}

LambdaGrid LambdaGrid::default_for(std::size_t n) {
    const double anchor = static_cast<double>(n) / 5.0;
    return log_spaced(1e-2 * anchor, 1e2 * anchor, 20);
}

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::sic: return "sic";
        case Criterion::bic_scaled: return "bic";
        case Criterion::ebic: return "ebic";
        case Criterion::validation: return "validation";
    }
    return "unknown";
}

Criterion criterion_from_name(const std::string& name) {
    if (name == "sic") return Criterion::sic;
    if (name == "bic" || name == "bic_scaled") return Criterion::bic_scaled;
    if (name == "ebic") return Criterion::ebic;
    if (name == "validation" || name == "valid") return Criterion::validation;
    throw std::invalid_argument("unknown criterion: " + name);
}

namespace {

double loss_at(std::span<const double> y, std::span<const double> theta_col, double tau) {
    if (y.size() != theta_col.size()) {
        throw DimensionError("criterion: theta length mismatch");
    }
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        r[i] = y[i] - theta_col[i];
    }
    return check_loss(r, tau);
}

double al_sigma(double tau) { return (1.0 - std::abs(1.0 - 2.0 * tau)) / 2.0; }

double log_binomial(std::size_t p, std::size_t nu) {
    return std::lgamma(static_cast<double>(p) + 1.0) -
           std::lgamma(static_cast<double>(nu) + 1.0) -
           std::lgamma(static_cast<double>(p - nu) + 1.0);
}

}  // namespace

double sic(std::span<const double> y, std::span<const double> theta_col, double tau,
           std::size_t nu) {
    const double n = static_cast<double>(y.size());
    const double loss = loss_at(y, theta_col, tau);
    if (loss <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(loss / n) + static_cast<double>(nu) * std::log(n) / (2.0 * n);
}

double bic_scaled(std::span<const double> y, std::span<const double> theta_col, double tau,
                  std::size_t nu) {
    const double n = static_cast<double>(y.size());
    const double loss = loss_at(y, theta_col, tau);
    return 2.0 / al_sigma(tau) * loss + static_cast<double>(nu) * std::log(n);
}

double ebic(std::span<const double> y, std::span<const double> theta_col, double tau,
            std::size_t nu, std::size_t k) {
    const std::size_t n = y.size();
    if (n < k + 2) {
        throw DimensionError("ebic: series shorter than k+2");
    }
    const std::size_t P = n - k - 1;
    if (nu > P) {
        throw std::domain_error("ebic: nu exceeds the parameter count P = n-k-1");
    }
    const double gamma_ebic = 1.0;
    return bic_scaled(y, theta_col, tau, nu) + 2.0 * gamma_ebic * log_binomial(P, nu);
}

WeightMask holdout_every(std::size_t n, std::size_t stride) {
    if (stride < 2) {
        throw std::invalid_argument("holdout stride must be >= 2");
    }
    WeightMask mask = WeightMask::ones(n);
    for (std::size_t i = stride - 1; i < n; i += stride) {
        mask.weights[i] = 0;
    }
    return mask;
}

std::vector<double> validation_errors(std::span<const double> y, std::span<const double> taus,
                                      double lambda, std::size_t k, const WeightMask& holdout,
                                      const InnerControls& controls) {
    if (holdout.size() != y.size()) {
        throw DimensionError("validation: holdout mask length mismatch");
    }
    const std::size_t held = y.size() - holdout.count_ones();
    if (held == 0) {
        throw std::invalid_argument("validation: holdout set is empty");
    }
    QuantileSpec spec = QuantileSpec::uniform({taus.begin(), taus.end()}, lambda, k);
    FitResult fit = solve_block(y, spec, holdout, nullptr, controls, nullptr);

    std::vector<double> errors(spec.count(), 0.0);
    for (std::size_t j = 0; j < spec.count(); ++j) {
        auto col = fit.theta.col(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (!holdout.weights[i]) {
                const double r = y[i] - col[i];
                acc += r * (spec.taus[j] - (r < 0.0 ? 1.0 : 0.0));
            }
        }
        errors[j] = acc;
    }
    return errors;
}

SelectionResult select_lambdas(std::span<const double> y, std::vector<double> taus,
                               const LambdaGrid& grid, Criterion criterion, std::size_t k,
                               const SelectionOptions& options) {
    grid.validate();
    const std::size_t J = taus.size();
    const std::size_t n = y.size();
    WeightMask mask = options.mask.size() == n ? options.mask : WeightMask::ones(n);

    SelectionReport report;
    report.criterion = criterion;
    report.grid = grid;
    report.taus = taus;

    WeightMask train_mask = mask;
    if (criterion == Criterion::validation) {
        const WeightMask holdout = holdout_every(n, options.holdout_stride);
        for (std::size_t i = 0; i < n; ++i) {
            train_mask.weights[i] = mask.weights[i] && holdout.weights[i];
        }
        if (train_mask.count_ones() == 0) {
            throw std::invalid_argument("validation: no training observations left");
        }
    }

    // grid points are independent fits; run them concurrently and then
    // assemble the table sequentially in grid order
    std::vector<std::future<FitResult>> grid_fits;
    grid_fits.reserve(grid.values.size());
    for (double lambda : grid.values) {
        grid_fits.push_back(std::async(std::launch::async, [&, lambda] {
            QuantileSpec spec = QuantileSpec::uniform(taus, lambda, k);
            return solve_block(y, spec, train_mask, nullptr, options.controls, nullptr);
        }));
    }

    for (std::size_t g = 0; g < grid.values.size(); ++g) {
        const double lambda = grid.values[g];
        FitResult fit = grid_fits[g].get();
        for (std::size_t j = 0; j < J; ++j) {
            CriterionValue cv;
            cv.criterion = criterion;
            cv.lambda = lambda;
            cv.tau = taus[j];
            cv.nu = fit.knots[j];
            auto col = fit.theta.col(j);
            switch (criterion) {
                case Criterion::sic:
                    cv.value = sic(y, col, taus[j], cv.nu);
                    cv.degenerate = std::isinf(cv.value);
                    break;
                case Criterion::bic_scaled:
                    cv.value = bic_scaled(y, col, taus[j], cv.nu);
                    break;
                case Criterion::ebic:
                    cv.value = ebic(y, col, taus[j], cv.nu, k);
                    break;
                case Criterion::validation: {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (mask.weights[i] && !train_mask.weights[i]) {
                            const double r = y[i] - col[i];
                            acc += r * (taus[j] - (r < 0.0 ? 1.0 : 0.0));
                        }
                    }
                    cv.value = acc;
                    break;
                }
            }
            report.table.push_back(cv);
        }
    }

    // per-quantile argmin over the grid, ties toward larger lambda
    report.chosen_lambdas.assign(J, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        double best = std::numeric_limits<double>::infinity();
        double best_lambda = std::numeric_limits<double>::quiet_NaN();
        for (const auto& cv : report.table) {
            if (cv.tau != taus[j] || cv.degenerate) {
                continue;
            }
            if (cv.value < best || (cv.value == best && cv.lambda > best_lambda)) {
                best = cv.value;
                best_lambda = cv.lambda;
            }
        }
        if (!std::isfinite(best)) {
            std::string flagged;
            for (const auto& cv : report.table) {
                if (cv.tau == taus[j] && cv.degenerate) {
                    flagged += (flagged.empty() ? "" : ", ") + std::to_string(cv.lambda);
                }
            }
            throw std::runtime_error("select_lambdas: all criterion values degenerate at tau=" +
                                     std::to_string(taus[j]) + " (lambda: " + flagged + ")");
        }
        report.chosen_lambdas[j] = best_lambda;
    }

    QuantileSpec refit_spec;
    refit_spec.taus = taus;
    refit_spec.lambdas = report.chosen_lambdas;
    refit_spec.k = k;
    refit_spec.validate();

    SelectionResult result;
    result.refit = solve_block(y, refit_spec, mask, nullptr, options.controls, nullptr);
    report.chosen_nus = result.refit.knots;
    result.report = std::move(report);
    return result;
}

std::string SelectionReport::to_json() const {
    nlohmann::json j;
    j["criterion"] = criterion_name(criterion);
    j["grid"] = grid.values;
    j["taus"] = taus;
    j["table"] = nlohmann::json::array();
    for (const auto& cv : table) {
        nlohmann::json row;
        row["lambda"] = cv.lambda;
        row["tau"] = cv.tau;
        row["nu"] = cv.nu;
        row["degenerate"] = cv.degenerate;
        if (std::isfinite(cv.value)) {
            row["value"] = cv.value;
        } else {
            row["value"] = nullptr;
        }
        j["table"].push_back(row);
    }
    j["chosen_lambdas"] = chosen_lambdas;
    j["chosen_nus"] = chosen_nus;
    return j.dump(2);
}

}  // namespace qtf
