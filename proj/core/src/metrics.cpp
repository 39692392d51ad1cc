#include "qtf/metrics.hpp"

#include "qtf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtf {

double rmse(std::span<const double> est, std::span<const double> truth) {
    if (est.size() != truth.size()) {
        throw DimensionError("rmse: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double d = est[i] - truth[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(est.size()));
}

double caa(const Classification& truth, const Classification& est) {
    if (truth.size() != est.size()) {
        throw DimensionError("caa: length mismatch");
    }
    std::size_t pos = 0, neg = 0, true_pos = 0, true_neg = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth.labels[i]) {
            ++pos;
            true_pos += (est.labels[i] != 0);
        } else {
            ++neg;
            true_neg += (est.labels[i] == 0);
        }
    }
    if (pos == 0 || neg == 0) {
        throw std::invalid_argument("caa: a truth class is absent");
    }
    return 0.5 * (static_cast<double>(true_pos) / static_cast<double>(pos) +
                  static_cast<double>(true_neg) / static_cast<double>(neg));
}

double vi(const Classification& a, const Classification& b) {
    if (a.size() != b.size()) {
        throw DimensionError("vi: length mismatch");
    }
    const double n = static_cast<double>(a.size());
    double r[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[a.labels[i] ? 1 : 0][b.labels[i] ? 1 : 0] += 1.0;
    }
    double row[2] = {0.0, 0.0};
    double col[2] = {0.0, 0.0};
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            r[j][k] /= n;
            row[j] += r[j][k];
            col[k] += r[j][k];
        }
    }
    double value = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            if (r[j][k] > 0.0) {
                value -= r[j][k] * (std::log(r[j][k] / row[j]) + std::log(r[j][k] / col[k]));
            }
        }
    }
    return value;
}

Classification classify(std::span<const double> y, std::span<const double> theta_col,
                        double threshold) {
    if (y.size() != theta_col.size()) {
        throw DimensionError("classify: length mismatch");
    }
    Classification out;
    out.labels.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out.labels[i] = (y[i] - theta_col[i] > threshold) ? 1 : 0;
    }
    return out;
}

double empirical_quantile(std::span<const double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("empirical_quantile: empty input");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("empirical_quantile: p outside (0,1]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

}  // namespace qtf
