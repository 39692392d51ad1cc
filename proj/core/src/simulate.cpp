#include "qtf/simulate.hpp"

#include "qtf/distributions.hpp"
#include "qtf/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qtf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// One engine per component (trend / peaks / noise) so that extra draws in
/// one stream never perturb another.
std::mt19937_64 component_engine(std::uint64_t seed, std::uint64_t tag) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(tag)));
}

// Inverse-CDF sampling on top of raw 53-bit uniforms keeps the streams
// reproducible across standard library implementations.
double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double uniform_open(std::mt19937_64& eng) {
    double u;
    do {
        u = uniform01(eng);
    } while (u <= 0.0 || u >= 1.0);
    return u;
}

double draw_normal(std::mt19937_64& eng) { return normal_quantile(uniform_open(eng)); }

double draw_exponential(std::mt19937_64& eng, double rate) {
    return -std::log(1.0 - uniform01(eng)) / rate;
}

std::size_t draw_poisson(std::mt19937_64& eng, double mean) {
    // arrival-time counting; exact and O(mean) draws
    std::size_t count = 0;
    double acc = draw_exponential(eng, 1.0);
    while (acc <= mean) {
        ++count;
        acc += draw_exponential(eng, 1.0);
    }
    return count;
}

std::size_t draw_binomial(std::mt19937_64& eng, std::size_t n, double p) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += (uniform01(eng) < p);
    }
    return count;
}

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

SineErrorKind sine_kind_from_name(const std::string& name) {
    if (name == "gaussian") return SineErrorKind::gaussian;
    if (name == "beta") return SineErrorKind::beta;
    if (name == "mixed" || name == "mixed_normal") return SineErrorKind::mixed_normal;
    throw std::invalid_argument("unknown sine error kind: " + name);
}

SimulatedSeries gen_sine(const SineDesign& design) {
    if (design.n < 10) {
        throw DimensionError("gen_sine: n must be >= 10");
    }
    const std::size_t n = design.n;
    auto eng = component_engine(design.seed, 3);

    SimulatedSeries out;
    out.trend.resize(n);
    out.signal.assign(n, 0.0);
    out.noise.resize(n);
    out.y.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1) / static_cast<double>(n);
        out.trend[i] = std::sin(2.0 * std::numbers::pi * x);
        switch (design.kind) {
            case SineErrorKind::gaussian:
                out.noise[i] = (1.0 + x * x) / 4.0 * draw_normal(eng);
                break;
            case SineErrorKind::beta:
                out.noise[i] = beta1_quantile(uniform01(eng), 11.0 - 10.0 * x);
                break;
            case SineErrorKind::mixed_normal: {
                const double mean = (uniform01(eng) < x) ? 1.0 : -1.0;
                out.noise[i] = mean + draw_normal(eng);
                break;
            }
        }
        out.y[i] = out.trend[i] + out.noise[i];
    }

    const SineErrorKind kind = design.kind;
    out.true_quantiles = [n, kind](double tau) {
        std::vector<double> q(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i + 1) / static_cast<double>(n);
            const double base = std::sin(2.0 * std::numbers::pi * x);
            switch (kind) {
                case SineErrorKind::gaussian:
                    q[i] = base + (1.0 + x * x) / 4.0 * normal_quantile(tau);
                    break;
                case SineErrorKind::beta:
                    q[i] = base + beta1_quantile(tau, 11.0 - 10.0 * x);
                    break;
                case SineErrorKind::mixed_normal:
                    q[i] = base + mixed_normal_quantile(tau, x);
                    break;
            }
        }
        return q;
    };
    return out;
}

SimulatedSeries gen_peaks(const PeaksDesign& design) {
    if (design.n < 10) {
        throw DimensionError("gen_peaks: n must be >= 10");
    }
    if (!(design.peak_prob >= 0.0 && design.peak_prob < 1.0)) {
        throw std::invalid_argument("gen_peaks: peak_prob outside [0,1)");
    }
    const std::size_t n = design.n;
    auto trend_eng = component_engine(design.seed, 1);
    auto peaks_eng = component_engine(design.seed, 2);
    auto noise_eng = component_engine(design.seed, 3);

    SimulatedSeries out;
    out.trend.assign(n, 0.0);
    out.signal.assign(n, 0.0);
    out.noise.assign(n, 0.0);
    out.y.resize(n);

    const double df_mean =
        design.spline_df_mean > 0.0 ? design.spline_df_mean : static_cast<double>(n) / 100.0;
    std::size_t df = draw_poisson(trend_eng, df_mean);
    if (df < 2) {
        df = 2;  // a natural basis needs at least the affine span
    }
    const auto basis = natural_cubic_basis(n, df);
    for (std::size_t c = 0; c < df; ++c) {
        const double coef = draw_exponential(trend_eng, design.coef_rate);
        for (std::size_t i = 0; i < n; ++i) {
            out.trend[i] += coef * basis[c][i];
        }
    }

    const std::size_t peak_count = draw_binomial(peaks_eng, n, design.peak_prob);
    for (std::size_t p = 0; p < peak_count; ++p) {
        const double center = 1.0 + uniform01(peaks_eng) * (static_cast<double>(n) - 2.0);
        const double bw = design.bw_lo + uniform01(peaks_eng) * (design.bw_hi - design.bw_lo);
        const double amp = design.amp_mean + design.amp_sd * draw_normal(peaks_eng);
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (static_cast<double>(i + 1) - center) / bw;
            out.signal[i] += amp * normal_pdf(z) / bw;
        }
    }

    if (design.noise_sd > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            out.noise[i] = design.noise_sd * draw_normal(noise_eng);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.y[i] = out.trend[i] + out.signal[i] + out.noise[i];
    }

    const std::vector<double> trend_copy = out.trend;
    const double sd = design.noise_sd;
    out.true_quantiles = [trend_copy, sd](double tau) {
        std::vector<double> q(trend_copy.size());
        const double shift = sd * normal_quantile(tau);
        for (std::size_t i = 0; i < q.size(); ++i) {
            q[i] = trend_copy[i] + shift;
        }
        return q;
    };
    return out;
}

std::vector<std::vector<double>> natural_cubic_basis(std::size_t n, std::size_t df) {
    if (df < 2) {
        throw std::invalid_argument("natural_cubic_basis: df must be >= 2");
    }
    if (df > n / 2) {
        throw std::invalid_argument("natural_cubic_basis: df too large (> n/2)");
    }
    // work on [0,1]; the huge raw-t cubes would cancel catastrophically
    const std::size_t K = df;
    std::vector<double> knots(K);
    for (std::size_t m = 0; m < K; ++m) {
        knots[m] = static_cast<double>(m) / static_cast<double>(K - 1);
    }
    auto cube_plus = [](double v) { return v > 0.0 ? v * v * v : 0.0; };
    auto d = [&](std::size_t m, double t) {
        return (cube_plus(t - knots[m]) - cube_plus(t - knots[K - 1])) /
               (knots[K - 1] - knots[m]);
    };

    std::vector<std::vector<double>> basis(df, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (n == 1) ? 0.0
                                  : static_cast<double>(i) / static_cast<double>(n - 1);
        basis[0][i] = 1.0;
        basis[1][i] = t;
        for (std::size_t m = 0; m + 2 < K; ++m) {
            basis[m + 2][i] = d(m, t) - d(K - 2, t);
        }
    }
    return basis;
}

}  // namespace qtf
