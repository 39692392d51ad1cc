#ifndef QTF_DIFFERENCE_OPERATOR_HPP
#define QTF_DIFFERENCE_OPERATOR_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace qtf {

/*
 * Discrete difference operator of a given order, stored by its stencil
 * instead of as an explicit (n-order) x n matrix. Every row carries the
 * same alternating binomial coefficients, e.g.
 *
 *   order 1: [-1  1]
 *   order 2: [ 1 -2  1]
 *   order 3: [-1  3 -3  1]
 *
 * Row i of the dense matrix would read  sum_p stencil[p] * v[i+p],
 * so products and transpose products are O(n * order).
 */
class DifferenceOperator {
public:
    DifferenceOperator(std::size_t n, std::size_t order);

    std::size_t length() const { return n_; }
    std::size_t order() const { return order_; }
    std::size_t rows() const { return n_ - order_; }
    const std::vector<double>& stencil() const { return stencil_; }

    /// v has length n; result has length n - order.
    std::vector<double> apply(std::span<const double> v) const;
    void apply(std::span<const double> v, std::span<double> out) const;

    /// u has length n - order; result has length n.
    std::vector<double> apply_transpose(std::span<const double> u) const;
    void apply_transpose(std::span<const double> u, std::span<double> out) const;

private:
    std::size_t n_;
    std::size_t order_;
    std::vector<double> stencil_;  // order + 1 signed binomial coefficients
};

}  // namespace qtf

#endif
