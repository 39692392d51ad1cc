#ifndef QTF_ERRORS_HPP
#define QTF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtf {

/// Mismatched or infeasible dimensions (vector lengths, window geometry, ...).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cholesky factorization hit a non-positive pivot.
class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inner solver exhausted its iteration budget. Carries the last residuals
/// so callers can report how far from feasible/stationary the iterate was.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations,
                     double objective_change, double constraint_violation)
        : std::runtime_error(what),
          iterations(iterations),
          objective_change(objective_change),
          constraint_violation(constraint_violation) {}

    std::size_t iterations;
    double objective_change;
    double constraint_violation;
};

/// Window layout cannot satisfy the interleaving invariants.
class LayoutError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or unusable input data (CSV parsing, all-missing series, ...).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qtf

#endif
