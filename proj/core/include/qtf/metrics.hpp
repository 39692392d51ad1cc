#ifndef QTF_METRICS_HPP
#define QTF_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace qtf {

/// Per-time-point binary signal labels.
struct Classification {
    std::vector<std::uint8_t> labels;

    std::size_t size() const { return labels.size(); }
};

/// sqrt(mean squared difference).
double rmse(std::span<const double> est, std::span<const double> truth);

/// Class-averaged accuracy: (sensitivity + specificity) / 2. Throws when a
/// truth class is absent (zero marginal).
double caa(const Classification& truth, const Classification& est);

/// Variation of information between two binary classifications; 0 iff
/// identical, with the 0 log 0 = 0 convention.
double vi(const Classification& a, const Classification& b);

/// Indicator of y - theta exceeding the threshold.
Classification classify(std::span<const double> y, std::span<const double> theta_col,
                        double threshold);

/// Nearest-rank empirical quantile of the detrended series (threshold
/// helper for classify).
double empirical_quantile(std::span<const double> values, double p);

}  // namespace qtf

#endif
