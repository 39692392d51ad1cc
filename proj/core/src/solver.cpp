#include "qtf/solver.hpp"

#include "qtf/banded.hpp"
#include "qtf/difference_operator.hpp"
#include "qtf/errors.hpp"
#include "qtf/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtf {

void QuantileSpec::validate() const {
    if (taus.empty()) {
        throw std::invalid_argument("quantile spec needs at least one level");
    }
    if (taus.size() != lambdas.size()) {
        throw DimensionError("quantile spec: taus and lambdas size mismatch");
    }
    double prev = 0.0;
    for (double tau : taus) {
        if (!(tau > 0.0 && tau < 1.0)) {
            throw std::invalid_argument("quantile level must lie strictly in (0,1)");
        }
        if (tau <= prev) {
            throw std::invalid_argument("quantile levels must be strictly increasing");
        }
        prev = tau;
    }
    for (double lambda : lambdas) {
        if (!(lambda >= 0.0)) {
            throw std::invalid_argument("penalty weights must be nonnegative");
        }
    }
}

QuantileSpec QuantileSpec::uniform(std::vector<double> taus, double lambda, std::size_t k) {
    QuantileSpec spec;
    spec.lambdas.assign(taus.size(), lambda);
    spec.taus = std::move(taus);
    spec.k = k;
    spec.validate();
    return spec;
}

bool WeightMask::all_ones() const {
    return std::all_of(weights.begin(), weights.end(), [](std::uint8_t w) { return w != 0; });
}

std::size_t WeightMask::count_ones() const {
    std::size_t c = 0;
    for (std::uint8_t w : weights) {
        c += (w != 0);
    }
    return c;
}

double block_objective(std::span<const double> y, const QuantileSpec& spec,
                       const WeightMask& mask, const TrendMatrix& theta) {
    const std::size_t n = y.size();
    if (theta.rows != n || theta.cols != spec.count()) {
        throw DimensionError("block_objective: theta dimension mismatch");
    }
    DifferenceOperator diff(n, spec.k + 1);
    std::vector<double> resid(n);
    std::vector<double> dtheta(diff.rows());
    double obj = 0.0;
    for (std::size_t j = 0; j < spec.count(); ++j) {
        auto col = theta.col(j);
        for (std::size_t i = 0; i < n; ++i) {
            resid[i] = y[i] - col[i];
        }
        obj += check_loss(resid, spec.taus[j], mask);
        diff.apply(col, dtheta);
        double l1 = 0.0;
        for (double d : dtheta) {
            l1 += std::abs(d);
        }
        obj += spec.lambdas[j] * l1;
    }
    return obj;
}

std::size_t count_knots(std::span<const double> theta_col, std::size_t k, double tol) {
    DifferenceOperator diff(theta_col.size(), k + 1);
    std::vector<double> d = diff.apply(theta_col);
    double max_abs = 0.0;
    for (double v : d) {
        max_abs = std::max(max_abs, std::abs(v));
    }
    const double threshold = tol * std::max(1.0, max_abs);
    std::size_t nu = 0;
    for (double v : d) {
        if (std::abs(v) > threshold) {
            ++nu;
        }
    }
    return nu;
}

namespace {

struct BlockWork {
    // per-quantile splitting state, all length n except z/u_z (length m)
    std::vector<std::vector<double>> r, z, u_r, u_z;
    TrendMatrix theta;   // current iterate
    TrendMatrix v;       // row-projected copy
    TrendMatrix u_v;     // scaled duals for theta = v
    std::vector<std::vector<double>> dtheta;  // D theta_j buffers
};

double linf(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

BandedCholesky factor_system(std::size_t n, const DifferenceOperator& diff, double gamma_in,
                             double gamma_couple) {
    BandedSPDSystem sys(n, diff.order());
    sys.add_scaled_identity(2.0 * gamma_in + gamma_couple);
    sys.add_scaled_gram(diff, gamma_in);
    return sys.factorize();
}

}  // namespace

FitResult solve_block(std::span<const double> y, const QuantileSpec& spec,
                      const WeightMask& mask, const CouplingTerm* coupling,
                      const InnerControls& controls, const TrendMatrix* warm_start) {
    spec.validate();
    const std::size_t n = y.size();
    const std::size_t J = spec.count();
    if (n < spec.k + 2) {
        throw DimensionError("solve_block: series shorter than k+2");
    }
    if (mask.size() != n) {
        throw DimensionError("solve_block: mask length mismatch");
    }
    if (mask.count_ones() == 0) {
        throw std::invalid_argument("solve_block: mask is all zeros");
    }
    if (coupling) {
        if (coupling->anchor.rows != n || coupling->anchor.cols != J ||
            coupling->duals.rows != n || coupling->duals.cols != J) {
            throw DimensionError("solve_block: coupling dimension mismatch");
        }
        if (!(coupling->gamma > 0.0)) {
            throw std::invalid_argument("solve_block: coupling gamma must be positive");
        }
    }
    if (warm_start && (warm_start->rows != n || warm_start->cols != J)) {
        throw DimensionError("solve_block: warm start dimension mismatch");
    }

    const DifferenceOperator diff(n, spec.k + 1);
    const std::size_t m = diff.rows();
    const double gamma_couple = coupling ? coupling->gamma : 0.0;

    double gamma = controls.gamma;
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("solve_block: inner gamma must be positive");
    }
    BandedCholesky chol = factor_system(n, diff, gamma, gamma_couple);

    BlockWork w;
    w.theta = TrendMatrix(n, J);
    w.v = TrendMatrix(n, J);
    w.u_v = TrendMatrix(n, J);
    w.r.assign(J, std::vector<double>(n));
    w.u_r.assign(J, std::vector<double>(n, 0.0));
    w.z.assign(J, std::vector<double>(m));
    w.u_z.assign(J, std::vector<double>(m, 0.0));
    w.dtheta.assign(J, std::vector<double>(m));

    for (std::size_t j = 0; j < J; ++j) {
        auto th = w.theta.col(j);
        if (warm_start) {
            auto src = warm_start->col(j);
            std::copy(src.begin(), src.end(), th.begin());
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                th[i] = mask.weights[i] ? y[i] : 0.0;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            w.r[j][i] = y[i] - th[i];
        }
        diff.apply(th, w.dtheta[j]);
        w.z[j] = w.dtheta[j];
    }
    w.v = w.theta;
    {
        std::vector<double> vrow(J);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < J; ++j) {
                vrow[j] = w.v(i, j);
            }
            project_noncrossing(std::span<double>(vrow));
            for (std::size_t j = 0; j < J; ++j) {
                w.v(i, j) = vrow[j];
            }
        }
    }

    const double y_scale = 1.0 + linf(y);
    std::vector<double> rhs(n), row(J), resid(n);
    std::vector<double> r_old(n), z_old(m);
    double prev_obj = std::numeric_limits<double>::infinity();
    double last_obj_change = std::numeric_limits<double>::infinity();
    double last_cons = std::numeric_limits<double>::infinity();

    auto objective_at = [&](const TrendMatrix& theta) {
        double obj = block_objective(y, spec, mask, theta);
        if (coupling) {
            for (std::size_t j = 0; j < J; ++j) {
                auto th = theta.col(j);
                auto anchor = coupling->anchor.col(j);
                auto dual = coupling->duals.col(j);
                for (std::size_t i = 0; i < n; ++i) {
                    const double gap = th[i] - anchor[i];
                    obj += gap * dual[i] + 0.5 * gamma_couple * gap * gap;
                }
            }
        }
        return obj;
    };

    for (std::size_t iter = 1; iter <= controls.max_iterations; ++iter) {
        double primal_sq = 0.0;
        double dual_sq = 0.0;

        // theta_j updates share one factorization
        for (std::size_t j = 0; j < J; ++j) {
            auto th = w.theta.col(j);
            for (std::size_t i = 0; i < n; ++i) {
                rhs[i] = gamma * (y[i] - w.r[j][i] + w.u_r[j][i]) +
                         gamma * (w.v(i, j) - w.u_v(i, j));
            }
            // + gamma * D' (z - u_z)
            for (std::size_t i = 0; i < m; ++i) {
                const double s = gamma * (w.z[j][i] - w.u_z[j][i]);
                for (std::size_t p = 0; p <= diff.order(); ++p) {
                    rhs[i + p] += diff.stencil()[p] * s;
                }
            }
            if (coupling) {
                auto anchor = coupling->anchor.col(j);
                auto dual = coupling->duals.col(j);
                for (std::size_t i = 0; i < n; ++i) {
                    rhs[i] += gamma_couple * anchor[i] - dual[i];
                }
            }
            chol.solve_in_place(rhs);
            std::copy(rhs.begin(), rhs.end(), th.begin());
            diff.apply(th, w.dtheta[j]);
        }

        // r and z prox updates
        for (std::size_t j = 0; j < J; ++j) {
            auto th = w.theta.col(j);
            const double tau = spec.taus[j];
            const double t = spec.lambdas[j] / gamma;
            std::swap(r_old, w.r[j]);
            for (std::size_t i = 0; i < n; ++i) {
                const double vi = y[i] - th[i] + w.u_r[j][i];
                w.r[j][i] = mask.weights[i] ? prox_check(vi, tau, 1.0 / gamma) : vi;
            }
            std::swap(z_old, w.z[j]);
            for (std::size_t i = 0; i < m; ++i) {
                const double vi = w.dtheta[j][i] + w.u_z[j][i];
                w.z[j][i] = (vi > t) ? vi - t : (vi < -t ? vi + t : 0.0);
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double d = w.r[j][i] - r_old[i];
                dual_sq += d * d;
            }
            for (std::size_t i = 0; i < m; ++i) {
                const double d = w.z[j][i] - z_old[i];
                dual_sq += d * d;
            }
        }

        // row-wise projection copy
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < J; ++j) {
                row[j] = w.theta(i, j) + w.u_v(i, j);
            }
            project_noncrossing(std::span<double>(row));
            for (std::size_t j = 0; j < J; ++j) {
                const double d = row[j] - w.v(i, j);
                dual_sq += d * d;
                w.v(i, j) = row[j];
            }
        }

        // scaled dual ascent + primal residual accumulation
        double cons = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            auto th = w.theta.col(j);
            for (std::size_t i = 0; i < n; ++i) {
                const double gap = (y[i] - th[i]) - w.r[j][i];
                w.u_r[j][i] += gap;
                primal_sq += gap * gap;
                cons = std::max(cons, std::abs(gap));
            }
            for (std::size_t i = 0; i < m; ++i) {
                const double gap = w.dtheta[j][i] - w.z[j][i];
                w.u_z[j][i] += gap;
                primal_sq += gap * gap;
                cons = std::max(cons, std::abs(gap));
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double gap = th[i] - w.v(i, j);
                w.u_v(i, j) += gap;
                primal_sq += gap * gap;
                cons = std::max(cons, std::abs(gap));
            }
        }

        const double obj = objective_at(w.theta);
        if (controls.objective_trace) {
            controls.objective_trace->push_back(obj);
        }
        last_obj_change = std::abs(obj - prev_obj);
        last_cons = cons / y_scale;
        prev_obj = obj;
        if (iter >= 2 && last_obj_change <= controls.obj_tol * (1.0 + std::abs(obj)) &&
            last_cons <= controls.cons_tol) {
            FitResult result;
            result.inner_iterations = iter;
            // final feasibility polish: exact row monotonicity
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < J; ++j) {
                    row[j] = w.theta(i, j);
                }
                project_noncrossing(std::span<double>(row));
                for (std::size_t j = 0; j < J; ++j) {
                    w.theta(i, j) = row[j];
                }
            }
            result.theta = std::move(w.theta);
            result.objective = block_objective(y, spec, mask, result.theta);
            result.knots.resize(J);
            for (std::size_t j = 0; j < J; ++j) {
                result.knots[j] = count_knots(result.theta.col(j), spec.k);
            }
            return result;
        }

        // residual balancing keeps the splitting penalty in a workable
        // range across the wide lambda scales the selection grid visits
        if (controls.adapt_gamma) {
            const double rp = std::sqrt(primal_sq);
            const double rd = gamma * std::sqrt(dual_sq);
            if (rp > 10.0 * rd && gamma < 1e12) {
                gamma *= 2.0;
                for (std::size_t j = 0; j < J; ++j) {
                    for (double& u : w.u_r[j]) u *= 0.5;
                    for (double& u : w.u_z[j]) u *= 0.5;
                }
                for (double& u : w.u_v.data) u *= 0.5;
                chol = factor_system(n, diff, gamma, gamma_couple);
            } else if (rd > 10.0 * rp && gamma > 1e-6) {
                gamma *= 0.5;
                for (std::size_t j = 0; j < J; ++j) {
                    for (double& u : w.u_r[j]) u *= 2.0;
                    for (double& u : w.u_z[j]) u *= 2.0;
                }
                for (double& u : w.u_v.data) u *= 2.0;
                chol = factor_system(n, diff, gamma, gamma_couple);
            }
        }
    }

    throw ConvergenceError("solve_block: no convergence within " +
                               std::to_string(controls.max_iterations) + " iterations",
                           controls.max_iterations, last_obj_change, last_cons);
}

FitResult solve_block(std::span<const double> y, const QuantileSpec& spec,
                      const InnerControls& controls) {
    return solve_block(y, spec, WeightMask::ones(y.size()), nullptr, controls, nullptr);
}

}  // namespace qtf
