#include "qtf/consensus.hpp"

#include "qtf/errors.hpp"
#include "qtf/prox.hpp"
#include "qtf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace qtf {

void WindowLayout::validate(std::size_t min_window) const {
    const std::size_t W = bounds.size();
    if (W == 0 || n == 0) {
        throw LayoutError("layout: empty");
    }
    if (bounds.front().lo != 1 || bounds.back().hi != n) {
        throw LayoutError("layout: windows must cover [1, n]");
    }
    for (std::size_t w = 0; w < W; ++w) {
        if (bounds[w].lo > bounds[w].hi || bounds[w].hi > n) {
            throw LayoutError("layout: bad window bounds");
        }
        if (window_length(w) < min_window) {
            throw LayoutError("layout: window " + std::to_string(w + 1) +
                              " shorter than " + std::to_string(min_window));
        }
    }
    // 1 = l_1 < l_2 < u_1 < l_3 < u_2 < ... < u_W = n
    for (std::size_t w = 0; w + 1 < W; ++w) {
        if (!(bounds[w].lo < bounds[w + 1].lo && bounds[w + 1].lo < bounds[w].hi &&
              bounds[w].hi < bounds[w + 1].hi)) {
            throw LayoutError("layout: interleaving violated between windows " +
                              std::to_string(w + 1) + " and " + std::to_string(w + 2));
        }
    }
    for (std::size_t w = 0; w + 2 < W; ++w) {
        if (bounds[w].hi >= bounds[w + 2].lo) {
            throw LayoutError("layout: non-consecutive windows overlap");
        }
    }
}

WindowLayout make_layout(std::size_t n, std::size_t W, std::size_t overlap, std::size_t k) {
    if (W < 1) {
        throw LayoutError("make_layout: need at least one window");
    }
    WindowLayout layout;
    layout.n = n;
    if (W == 1) {
        layout.bounds.push_back({1, n});
        layout.validate(k + 2);
        return layout;
    }
    if (overlap < 1) {
        throw LayoutError("make_layout: overlap must be >= 1");
    }
    const std::size_t total = n + (W - 1) * overlap;
    const std::size_t base = total / W;
    const std::size_t rem = total % W;
    if (base < 1) {
        throw LayoutError("make_layout: more windows than observations");
    }
    std::size_t lo = 1;
    for (std::size_t w = 0; w < W; ++w) {
        const std::size_t len = base + (w < rem ? 1 : 0);
        if (len <= overlap) {
            throw LayoutError("make_layout: overlap leaves no exclusive region");
        }
        const std::size_t hi = lo + len - 1;
        layout.bounds.push_back({lo, hi});
        lo = hi - overlap + 1;
    }
    layout.validate(k + 2);
    return layout;
}

namespace {

double frob_sq(const TrendMatrix& a) {
    double acc = 0.0;
    for (double x : a.data) {
        acc += x * x;
    }
    return acc;
}

TrendMatrix slice_rows(const TrendMatrix& m, std::size_t lo, std::size_t hi) {
    TrendMatrix out(hi - lo + 1, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        for (std::size_t i = lo; i <= hi; ++i) {
            out(i - lo, j) = m(i - 1, j);
        }
    }
    return out;
}

}  // namespace

TrendMatrix consensus_update(const ConsensusState& state, const WindowLayout& layout) {
    const std::size_t W = layout.window_count();
    const std::size_t J = state.window_thetas.empty() ? 0 : state.window_thetas[0].cols;
    TrendMatrix theta(layout.n, J);
    const double inv2g = 1.0 / (2.0 * state.gamma);

    for (std::size_t w = 0; w < W; ++w) {
        const auto& win = layout.bounds[w];
        const std::size_t prev_hi = (w > 0) ? layout.bounds[w - 1].hi : 0;
        const std::size_t next_lo = (w + 1 < W) ? layout.bounds[w + 1].lo : layout.n + 1;
        // exclusive region of window w (also covers the outer edges of the
        // first and last windows)
        const std::size_t solo_lo = std::max(win.lo, prev_hi + 1);
        const std::size_t solo_hi = std::min(win.hi, next_lo - 1);
        for (std::size_t i = solo_lo; i <= solo_hi; ++i) {
            const std::size_t iw = i - win.lo;
            for (std::size_t j = 0; j < J; ++j) {
                theta(i - 1, j) = state.window_thetas[w](iw, j);
            }
        }
        // overlap with the next window: average, adjusted by the duals
        if (w + 1 < W) {
            const auto& nxt = layout.bounds[w + 1];
            for (std::size_t i = nxt.lo; i <= win.hi; ++i) {
                const std::size_t iw = i - win.lo;
                const std::size_t iw1 = i - nxt.lo;
                for (std::size_t j = 0; j < J; ++j) {
                    const double avg = 0.5 * (state.window_thetas[w](iw, j) +
                                              state.window_thetas[w + 1](iw1, j));
                    const double adj =
                        inv2g * (state.omegas[w](iw, j) + state.omegas[w + 1](iw1, j));
                    theta(i - 1, j) = avg - adj;
                }
            }
        }
    }
    return theta;
}

void dual_update(ConsensusState& state, const WindowLayout& layout) {
    const std::size_t W = layout.window_count();
    for (std::size_t w = 0; w < W; ++w) {
        const auto& win = layout.bounds[w];
        auto& omega = state.omegas[w];
        const auto& th_w = state.window_thetas[w];
        for (std::size_t j = 0; j < omega.cols; ++j) {
            for (std::size_t i = 0; i < omega.rows; ++i) {
                omega(i, j) += state.gamma * (th_w(i, j) - state.consensus(win.lo - 1 + i, j));
            }
        }
    }
}

std::pair<double, double> residuals(const ConsensusState& state, const WindowLayout& layout) {
    const std::size_t W = layout.window_count();
    double primal_sq = 0.0;
    for (std::size_t w = 0; w < W; ++w) {
        const auto& win = layout.bounds[w];
        const auto& th_w = state.window_thetas[w];
        for (std::size_t j = 0; j < th_w.cols; ++j) {
            for (std::size_t i = 0; i < th_w.rows; ++i) {
                const double gap = th_w(i, j) - state.consensus(win.lo - 1 + i, j);
                primal_sq += gap * gap;
            }
        }
    }
    double step_sq = 0.0;
    for (std::size_t idx = 0; idx < state.consensus.data.size(); ++idx) {
        const double d = state.consensus.data[idx] - state.previous_consensus.data[idx];
        step_sq += d * d;
    }
    const double dual = state.gamma * std::sqrt(static_cast<double>(W) * step_sq);
    return {std::sqrt(primal_sq), dual};
}

namespace {

bool residuals_pass(const ConsensusState& state, const StoppingRule& rule) {
    const double nj = static_cast<double>(state.consensus.rows * state.consensus.cols);
    const double sqrt_nj = std::sqrt(nj);

    double max_norm = std::sqrt(frob_sq(state.consensus));
    for (const auto& th_w : state.window_thetas) {
        max_norm = std::max(max_norm, std::sqrt(frob_sq(th_w)));
    }
    double omega_sq = 0.0;
    for (const auto& om : state.omegas) {
        omega_sq += frob_sq(om);
    }
    const bool primal_ok =
        state.primal_residual < rule.eps_abs * sqrt_nj + rule.eps_rel * max_norm;
    const bool dual_ok =
        state.dual_residual < rule.eps_abs * sqrt_nj + rule.eps_rel * std::sqrt(omega_sq);
    return primal_ok && dual_ok;
}

}  // namespace

bool stop_check(const ConsensusState& state, const StoppingRule& rule) {
    return residuals_pass(state, rule) || state.iteration >= rule.max_iterations;
}

WindowedFit fit_windows(std::span<const double> y, const QuantileSpec& spec,
                        const WindowLayout& layout, double gamma, const StoppingRule& rule,
                        const WeightMask& mask, const InnerControls& inner) {
    spec.validate();
    if (layout.n != y.size()) {
        throw DimensionError("fit_windows: layout does not cover the series");
    }
    if (mask.size() != y.size()) {
        throw DimensionError("fit_windows: mask length mismatch");
    }
    layout.validate(spec.k + 2);
    const std::size_t W = layout.window_count();

    if (W == 1) {
        WindowedFit out;
        out.fit = solve_block(y, spec, mask, nullptr, inner, nullptr);
        out.converged = true;
        out.outer_iterations = 0;
        return out;
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("fit_windows: gamma must be positive");
    }

    const std::size_t n = y.size();
    const std::size_t J = spec.count();

    std::vector<std::vector<double>> y_w(W);
    std::vector<WeightMask> mask_w(W);
    for (std::size_t w = 0; w < W; ++w) {
        const auto& win = layout.bounds[w];
        y_w[w].assign(y.begin() + win.lo - 1, y.begin() + win.hi);
        mask_w[w].weights.assign(mask.weights.begin() + win.lo - 1,
                                 mask.weights.begin() + win.hi);
    }

    ConsensusState state;
    state.gamma = gamma;
    state.window_thetas.resize(W);
    state.omegas.resize(W);
    std::size_t inner_total = 0;
    std::vector<double> window_obj(W, 0.0);

    {
        // uncoupled initialization, one task per window
        std::vector<std::future<FitResult>> tasks(W);
        for (std::size_t w = 0; w < W; ++w) {
            tasks[w] = std::async(std::launch::async, [&, w] {
                return solve_block(y_w[w], spec, mask_w[w], nullptr, inner, nullptr);
            });
        }
        for (std::size_t w = 0; w < W; ++w) {
            FitResult fit = tasks[w].get();
            inner_total += fit.inner_iterations;
            window_obj[w] = fit.objective;
            state.window_thetas[w] = std::move(fit.theta);
            state.omegas[w] = TrendMatrix(layout.window_length(w), J);
        }
    }

    WindowedFit out;
    state.consensus = TrendMatrix(n, J);
    state.previous_consensus = TrendMatrix(n, J);

    while (true) {
        state.previous_consensus = state.consensus;
        state.consensus = consensus_update(state, layout);
        state.iteration += 1;

        // coupled window solves against the fresh consensus snapshot
        std::vector<std::future<FitResult>> tasks(W);
        for (std::size_t w = 0; w < W; ++w) {
            tasks[w] = std::async(std::launch::async, [&, w] {
                const auto& win = layout.bounds[w];
                CouplingTerm coupling;
                coupling.anchor = slice_rows(state.consensus, win.lo, win.hi);
                coupling.duals = state.omegas[w];
                coupling.gamma = state.gamma;
                return solve_block(y_w[w], spec, mask_w[w], &coupling, inner,
                                   &state.window_thetas[w]);
            });
        }
        for (std::size_t w = 0; w < W; ++w) {
            FitResult fit = tasks[w].get();
            inner_total += fit.inner_iterations;
            window_obj[w] = fit.objective;
            state.window_thetas[w] = std::move(fit.theta);
        }
        dual_update(state, layout);

        auto [rp, rd] = residuals(state, layout);
        state.primal_residual = rp;
        state.dual_residual = rd;
        double obj = 0.0;
        for (std::size_t w = 0; w < W; ++w) {
            obj += window_obj[w];
        }
        out.trace.push_back({state.iteration, state.primal_residual, state.dual_residual, obj});

        const bool passed = residuals_pass(state, rule);
        if (passed || state.iteration >= rule.max_iterations) {
            out.converged = passed;
            break;
        }
    }
    out.outer_iterations = state.iteration;

    // final feasibility polish on the consensus rows
    std::vector<double> row(J);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < J; ++j) {
            row[j] = state.consensus(i, j);
        }
        project_noncrossing(std::span<double>(row));
        for (std::size_t j = 0; j < J; ++j) {
            state.consensus(i, j) = row[j];
        }
    }

    out.fit.theta = std::move(state.consensus);
    out.fit.inner_iterations = inner_total;
    out.fit.objective = block_objective(y, spec, mask, out.fit.theta);
    out.fit.knots.resize(J);
    for (std::size_t j = 0; j < J; ++j) {
        out.fit.knots[j] = count_knots(out.fit.theta.col(j), spec.k);
    }
    return out;
}

WindowedFit fit_windows(std::span<const double> y, const QuantileSpec& spec,
                        const WindowLayout& layout, double gamma, const StoppingRule& rule) {
    return fit_windows(y, spec, layout, gamma, rule, WeightMask::ones(y.size()), InnerControls{});
}

}  // namespace qtf
