#ifndef QTF_CONSENSUS_HPP
#define QTF_CONSENSUS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qtf/types.hpp"

namespace qtf {

/*
 * Overlapping window decomposition of 1..n. Bounds are 1-based inclusive
 * and interleave as
 *
 *   1 = l_1 < l_2 < u_1 < l_3 < u_2 < ... < u_W = n,
 *
 * so consecutive windows overlap and non-consecutive windows are disjoint.
 */
struct WindowLayout {
    struct Window {
        std::size_t lo = 0;  // l_w
        std::size_t hi = 0;  // u_w
    };

    std::vector<Window> bounds;
    std::size_t n = 0;

    std::size_t window_count() const { return bounds.size(); }
    std::size_t window_length(std::size_t w) const { return bounds[w].hi - bounds[w].lo + 1; }

    /// Throws LayoutError when the interleaving invariants fail or a
    /// window is shorter than min_window.
    void validate(std::size_t min_window) const;
};

/// Equally sized (+-1) windows with the requested consecutive overlap.
/// W = 1 yields the single block [1, n].
WindowLayout make_layout(std::size_t n, std::size_t W, std::size_t overlap, std::size_t k);

struct StoppingRule {
    double eps_abs = 0.01;
    double eps_rel = 0.001;
    std::size_t max_iterations = 100;
};

struct ConsensusState {
    TrendMatrix consensus;                   // n x J
    TrendMatrix previous_consensus;          // n x J, iterate m-1
    std::vector<TrendMatrix> window_thetas;  // n_w x J each
    std::vector<TrendMatrix> omegas;         // n_w x J each
    double gamma = 1.0;
    std::size_t iteration = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

/// Consensus map: averages window trends over overlap regions with the
/// dual adjustment -(omega_a + omega_b)/(2 gamma) and copies the single
/// covering window elsewhere.
TrendMatrix consensus_update(const ConsensusState& state, const WindowLayout& layout);

/// Omega_w += gamma * (Theta_w - U_w Theta), elementwise.
void dual_update(ConsensusState& state, const WindowLayout& layout);

/// (primal, dual) residuals:
///   primal = sqrt(sum_w ||Theta_w - U_w Theta||_F^2)
///   dual   = gamma * sqrt(sum_w ||Theta - Theta_prev||_F^2)
std::pair<double, double> residuals(const ConsensusState& state, const WindowLayout& layout);

/// True when both residuals clear the absolute/relative thresholds or the
/// iteration budget is spent.
bool stop_check(const ConsensusState& state, const StoppingRule& rule);

struct TraceRow {
    std::size_t iteration = 0;
    double primal = 0.0;
    double dual = 0.0;
    double objective = 0.0;  // windowed objective at the current iterates
};

struct WindowedFit {
    FitResult fit;
    std::vector<TraceRow> trace;
    bool converged = true;
    std::size_t outer_iterations = 0;
};

/*
 * Consensus ADMM over the window layout: initialize each window with an
 * uncoupled block solve, then alternate consensus map, parallel coupled
 * window solves, and dual ascent until the residual stopping rule fires.
 * Window subproblems within one iteration run concurrently; reductions
 * are ordered by window index, so traces are deterministic.
 *
 * W = 1 delegates to solve_block with no consensus machinery.
 */
WindowedFit fit_windows(std::span<const double> y, const QuantileSpec& spec,
                        const WindowLayout& layout, double gamma, const StoppingRule& rule,
                        const WeightMask& mask, const InnerControls& inner = {});

WindowedFit fit_windows(std::span<const double> y, const QuantileSpec& spec,
                        const WindowLayout& layout, double gamma = 1.0,
                        const StoppingRule& rule = {});

}  // namespace qtf

#endif
