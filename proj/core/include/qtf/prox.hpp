#ifndef QTF_PROX_HPP
#define QTF_PROX_HPP

#include <span>
#include <vector>

#include "qtf/types.hpp"

namespace qtf {

/// Check loss sum_i r_i (tau - 1(r_i < 0)); tau must lie in (0,1).
double check_loss(std::span<const double> r, double tau);

/// Masked check loss: entries with weight 0 contribute nothing.
double check_loss(std::span<const double> r, double tau, const WeightMask& mask);

/// argmin_x { c * x (tau - 1(x<0)) + (x - v)^2 / 2 }, c > 0.
/// Piecewise: v - c*tau above, 0 inside [c(tau-1), c*tau], v - c(tau-1) below.
double prox_check(double v, double tau, double c);

/// Elementwise sign(v) * max(|v| - t, 0).
void soft_threshold(std::span<double> v, double t);
std::vector<double> soft_threshold(std::span<const double> v, double t);

/// Euclidean projection onto the nondecreasing cone (pool adjacent
/// violators); pooled runs are replaced by their block average.
void project_noncrossing(std::span<double> row);
std::vector<double> project_noncrossing(std::span<const double> row);

}  // namespace qtf

#endif
