#ifndef QTF_SIMULATE_HPP
#define QTF_SIMULATE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qtf {

/// y(t) = sin(2 pi t/n) + eps(t/n) with one of three error families.
enum class SineErrorKind { gaussian, beta, mixed_normal };

struct SineDesign {
    SineErrorKind kind = SineErrorKind::gaussian;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

/// Smooth spline drift plus sparse Gaussian-bump signal plus iid noise.
struct PeaksDesign {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double noise_sd = 0.25;
    double peak_prob = 0.005;       // per-observation bump probability
    double amp_mean = 20.0;
    double amp_sd = 4.0;
    double bw_lo = 2.0;
    double bw_hi = 12.0;
    double spline_df_mean = 0.0;    // <= 0 means n/100
    double coef_rate = 1.0;
};

struct SimulatedSeries {
    std::vector<double> y;
    std::vector<double> trend;
    std::vector<double> signal;
    std::vector<double> noise;  // y - trend - signal, stored for exact recomposition

    /// Analytic quantile of y - signal at each time point.
    std::function<std::vector<double>(double tau)> true_quantiles;
};

SimulatedSeries gen_sine(const SineDesign& design);
SimulatedSeries gen_peaks(const PeaksDesign& design);

/*
 * Natural cubic spline basis on df equally spaced knots spanning [1, n]
 * (boundary knots at the endpoints). df columns: constant, identity, and
 * df-2 truncated-cubic combinations that are linear beyond the boundary
 * knots. df = 2 spans the affine functions.
 */
std::vector<std::vector<double>> natural_cubic_basis(std::size_t n, std::size_t df);

SineErrorKind sine_kind_from_name(const std::string& name);

}  // namespace qtf

#endif
