#include "simplex.hpp"

#include "dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtf_test {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
    // rows: constraints; one extra column for the rhs
    std::vector<std::vector<double>> t;
    std::vector<std::size_t> basis;
    std::size_t rows, cols;  // cols excludes rhs

    double rhs(std::size_t r) const { return t[r][cols]; }
};

void pivot(Tableau& tab, std::size_t pr, std::size_t pc) {
    auto& t = tab.t;
    const double pv = t[pr][pc];
    for (std::size_t c = 0; c <= tab.cols; ++c) {
        t[pr][c] /= pv;
    }
    for (std::size_t r = 0; r < tab.rows; ++r) {
        if (r == pr) {
            continue;
        }
        const double f = t[r][pc];
        if (f == 0.0) {
            continue;
        }
        for (std::size_t c = 0; c <= tab.cols; ++c) {
            t[r][c] -= f * t[pr][c];
        }
    }
    tab.basis[pr] = pc;
}

/// Reduced costs for the current basis: z_j = c_j - c_B' B^{-1} A_j,
/// computed from the tableau rows.
std::vector<double> reduced_costs(const Tableau& tab, const std::vector<double>& cost) {
    std::vector<double> rc(cost);
    for (std::size_t r = 0; r < tab.rows; ++r) {
        const double cb = cost[tab.basis[r]];
        if (cb == 0.0) {
            continue;
        }
        for (std::size_t c = 0; c < tab.cols; ++c) {
            rc[c] -= cb * tab.t[r][c];
        }
    }
    return rc;
}

double objective(const Tableau& tab, const std::vector<double>& cost) {
    double obj = 0.0;
    for (std::size_t r = 0; r < tab.rows; ++r) {
        obj += cost[tab.basis[r]] * tab.rhs(r);
    }
    return obj;
}

void run_simplex(Tableau& tab, const std::vector<double>& cost) {
    double last_obj = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;
    bool bland = false;
    for (std::size_t iter = 0; iter < 2000000; ++iter) {
        const std::vector<double> rc = reduced_costs(tab, cost);
        std::size_t entering = tab.cols;
        if (bland) {
            for (std::size_t c = 0; c < tab.cols; ++c) {
                if (rc[c] < -kTol) {
                    entering = c;
                    break;
                }
            }
        } else {
            double best = -kTol;
            for (std::size_t c = 0; c < tab.cols; ++c) {
                if (rc[c] < best) {
                    best = rc[c];
                    entering = c;
                }
            }
        }
        if (entering == tab.cols) {
            return;  // optimal
        }
        std::size_t leaving = tab.rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < tab.rows; ++r) {
            const double a = tab.t[r][entering];
            if (a > kTol) {
                const double ratio = tab.rhs(r) / a;
                if (ratio < best_ratio - kTol ||
                    (ratio < best_ratio + kTol && leaving < tab.rows &&
                     tab.basis[r] < tab.basis[leaving])) {
                    best_ratio = ratio;
                    leaving = r;
                }
            }
        }
        if (leaving == tab.rows) {
            throw std::runtime_error("simplex: unbounded");
        }
        pivot(tab, leaving, entering);
        const double obj = objective(tab, cost);
        if (obj >= last_obj - 1e-12) {
            if (++stall > 100) {
                bland = true;  // anti-cycling
            }
        } else {
            stall = 0;
        }
        last_obj = obj;
    }
    throw std::runtime_error("simplex: iteration limit");
}

}  // namespace

double simplex_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                     std::vector<double> c) {
    const std::size_t m = a.size();
    const std::size_t n = c.size();
    for (std::size_t r = 0; r < m; ++r) {
        if (b[r] < 0.0) {
            b[r] = -b[r];
            for (double& v : a[r]) {
                v = -v;
            }
        }
    }

    Tableau tab;
    tab.rows = m;
    tab.cols = n + m;  // artificials appended
    tab.t.assign(m, std::vector<double>(tab.cols + 1, 0.0));
    tab.basis.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c2 = 0; c2 < n; ++c2) {
            tab.t[r][c2] = a[r][c2];
        }
        tab.t[r][n + r] = 1.0;
        tab.t[r][tab.cols] = b[r];
        tab.basis[r] = n + r;
    }

    // phase 1: drive artificials to zero
    std::vector<double> phase1_cost(tab.cols, 0.0);
    for (std::size_t c2 = n; c2 < tab.cols; ++c2) {
        phase1_cost[c2] = 1.0;
    }
    run_simplex(tab, phase1_cost);
    if (objective(tab, phase1_cost) > 1e-7) {
        throw std::runtime_error("simplex: infeasible");
    }
    // pivot remaining artificials out of the basis where possible
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis[r] >= n) {
            for (std::size_t c2 = 0; c2 < n; ++c2) {
                if (std::abs(tab.t[r][c2]) > 1e-8) {
                    pivot(tab, r, c2);
                    break;
                }
            }
        }
    }

    // phase 2 with artificials frozen at a prohibitive cost
    std::vector<double> phase2_cost(tab.cols, 0.0);
    for (std::size_t c2 = 0; c2 < n; ++c2) {
        phase2_cost[c2] = c[c2];
    }
    for (std::size_t c2 = n; c2 < tab.cols; ++c2) {
        phase2_cost[c2] = 1e12;
    }
    run_simplex(tab, phase2_cost);
    return objective(tab, phase2_cost);
}

double lp_reference_objective(std::span<const double> y, const std::vector<double>& taus,
                              const std::vector<double>& lambdas, std::size_t k) {
    const std::size_t n = y.size();
    const std::size_t J = taus.size();
    const std::size_t m = n - k - 1;
    const Matrix d = dense_difference_matrix(n, k + 1);

    // variable layout, per quantile j:
    //   a_j, b_j (theta split), p_j, q_j (residual split), s_j, t_j (penalty split)
    // then (J-1) * n non-crossing slacks
    const std::size_t per_j = 4 * n + 2 * m;
    const std::size_t n_vars = J * per_j + (J - 1) * n;
    const std::size_t n_cons = J * (n + m) + (J - 1) * n;

    auto a_of = [&](std::size_t j, std::size_t i) { return j * per_j + i; };
    auto b_of = [&](std::size_t j, std::size_t i) { return j * per_j + n + i; };
    auto p_of = [&](std::size_t j, std::size_t i) { return j * per_j + 2 * n + i; };
    auto q_of = [&](std::size_t j, std::size_t i) { return j * per_j + 3 * n + i; };
    auto s_of = [&](std::size_t j, std::size_t i) { return j * per_j + 4 * n + i; };
    auto t_of = [&](std::size_t j, std::size_t i) { return j * per_j + 4 * n + m + i; };
    auto slack_of = [&](std::size_t j, std::size_t i) { return J * per_j + j * n + i; };

    std::vector<std::vector<double>> A(n_cons, std::vector<double>(n_vars, 0.0));
    std::vector<double> rhs(n_cons, 0.0);
    std::vector<double> cost(n_vars, 0.0);

    std::size_t row = 0;
    for (std::size_t j = 0; j < J; ++j) {
        // theta_ij + p_ij - q_ij = y_i
        for (std::size_t i = 0; i < n; ++i, ++row) {
            A[row][a_of(j, i)] = 1.0;
            A[row][b_of(j, i)] = -1.0;
            A[row][p_of(j, i)] = 1.0;
            A[row][q_of(j, i)] = -1.0;
            rhs[row] = y[i];
        }
        // (D theta_j)_i - s_ij + t_ij = 0
        for (std::size_t i = 0; i < m; ++i, ++row) {
            for (std::size_t c2 = 0; c2 < n; ++c2) {
                if (d[i][c2] != 0.0) {
                    A[row][a_of(j, c2)] = d[i][c2];
                    A[row][b_of(j, c2)] = -d[i][c2];
                }
            }
            A[row][s_of(j, i)] = -1.0;
            A[row][t_of(j, i)] = 1.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            cost[p_of(j, i)] = taus[j];
            cost[q_of(j, i)] = 1.0 - taus[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            cost[s_of(j, i)] = lambdas[j];
            cost[t_of(j, i)] = lambdas[j];
        }
    }
    // theta_{i,j+1} - theta_{i,j} - slack = 0
    for (std::size_t j = 0; j + 1 < J; ++j) {
        for (std::size_t i = 0; i < n; ++i, ++row) {
            A[row][a_of(j + 1, i)] = 1.0;
            A[row][b_of(j + 1, i)] = -1.0;
            A[row][a_of(j, i)] = -1.0;
            A[row][b_of(j, i)] = 1.0;
            A[row][slack_of(j, i)] = -1.0;
        }
    }

    return simplex_solve(std::move(A), std::move(rhs), std::move(cost));
}

}  // namespace qtf_test
