#include "qtf/prox.hpp"

#include "qtf/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace qtf {

namespace {

void require_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::invalid_argument("quantile level must lie strictly in (0,1)");
    }
}

}  // namespace

double check_loss(std::span<const double> r, double tau) {
    require_tau(tau);
    double acc = 0.0;
    for (double ri : r) {
        acc += ri * (tau - (ri < 0.0 ? 1.0 : 0.0));
    }
    return acc;
}

double check_loss(std::span<const double> r, double tau, const WeightMask& mask) {
    require_tau(tau);
    if (mask.size() != r.size()) {
        throw DimensionError("check_loss: mask length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (mask.weights[i]) {
            acc += r[i] * (tau - (r[i] < 0.0 ? 1.0 : 0.0));
        }
    }
    return acc;
}

double prox_check(double v, double tau, double c) {
    if (v > c * tau) {
        return v - c * tau;
    }
    if (v < c * (tau - 1.0)) {
        return v - c * (tau - 1.0);
    }
    return 0.0;
}

void soft_threshold(std::span<double> v, double t) {
    for (double& x : v) {
        if (x > t) {
            x -= t;
        } else if (x < -t) {
            x += t;
        } else {
            x = 0.0;
        }
    }
}

std::vector<double> soft_threshold(std::span<const double> v, double t) {
    std::vector<double> out(v.begin(), v.end());
    soft_threshold(std::span<double>(out), t);
    return out;
}

void project_noncrossing(std::span<double> row) {
    const std::size_t n = row.size();
    if (n <= 1) {
        return;
    }
    // Stack of pooled blocks: (mean, count). Merging preserves the mean of
    // the union, which is the exact projection.
    std::vector<double> mean(n);
    std::vector<std::size_t> count(n);
    std::size_t top = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = row[i];
        std::size_t c = 1;
        while (top > 0 && mean[top - 1] >= m) {
            m = (mean[top - 1] * static_cast<double>(count[top - 1]) +
                 m * static_cast<double>(c)) /
                static_cast<double>(count[top - 1] + c);
            c += count[top - 1];
            --top;
        }
        mean[top] = m;
        count[top] = c;
        ++top;
    }
    std::size_t i = 0;
    for (std::size_t b = 0; b < top; ++b) {
        for (std::size_t r = 0; r < count[b]; ++r) {
            row[i++] = mean[b];
        }
    }
}

std::vector<double> project_noncrossing(std::span<const double> row) {
    std::vector<double> out(row.begin(), row.end());
    project_noncrossing(std::span<double>(out));
    return out;
}

}  // namespace qtf
