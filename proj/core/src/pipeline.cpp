#include "qtf/pipeline.hpp"

#include "qtf/errors.hpp"
#include "qtf/metrics.hpp"
#include "qtf/prox.hpp"
#include "qtf/solver.hpp"
#include "qtf/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace qtf {

namespace fs = std::filesystem;

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    std::vector<double> iter, primal, dual, obj;
    for (const auto& row : trace) {
        iter.push_back(static_cast<double>(row.iteration));
        primal.push_back(row.primal);
        dual.push_back(row.dual);
        obj.push_back(row.objective);
    }
    write_csv(path, {"iteration", "r_primal", "r_dual", "objective"},
              {iter, primal, dual, obj});
}

namespace {

const char* kPalette[] = {"#1b6ca8", "#d1495b", "#2e933c", "#8a4fff", "#e28413",
                          "#13859c", "#7a5c45"};

std::string tau_label(double tau) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", tau);
    return buf;
}

void plot_trend_overlay(const std::string& path, const DetrendArtifacts& art,
                        const std::vector<double>& taus) {
    SvgCanvas svg;
    std::vector<double> shown_y;
    shown_y.reserve(art.y.size());
    std::vector<double> shown_t;
    for (std::size_t i = 0; i < art.y.size(); ++i) {
        if (art.mask.weights[i]) {
            shown_t.push_back(art.time[i]);
            shown_y.push_back(art.y[i]);
        }
    }
    svg.include(shown_t, shown_y);
    for (std::size_t j = 0; j < art.fit.theta.cols; ++j) {
        auto col = art.fit.theta.col(j);
        svg.include(art.time, col);
    }
    svg.title("series and quantile trends");
    svg.polyline(shown_t, shown_y, "#c0c0c0", 0.8);
    std::vector<std::pair<std::string, std::string>> legend;
    for (std::size_t j = 0; j < art.fit.theta.cols; ++j) {
        const std::string color = kPalette[j % 7];
        svg.polyline(art.time, art.fit.theta.col(j), color, 1.6);
        legend.emplace_back("tau=" + tau_label(taus[j]), color);
    }
    svg.legend(legend);
    svg.write(path);
}

void plot_rug(const std::string& path, const DetrendArtifacts& art,
              const std::vector<double>& detrended) {
    SvgCanvas svg;
    svg.include(art.time, detrended);
    for (double thr : art.threshold_values) {
        std::vector<double> t{art.time.front(), art.time.back()};
        std::vector<double> v{thr, thr};
        svg.include(t, v);
    }
    svg.title("detrended series with thresholds");
    svg.polyline(art.time, detrended, "#707070", 0.8);
    for (std::size_t k = 0; k < art.threshold_values.size(); ++k) {
        svg.hline(art.threshold_values[k], kPalette[k % 7]);
    }
    if (!art.classifications.empty()) {
        // rug marks for the middle threshold (95th by default)
        const std::size_t pick = art.classifications.size() / 2;
        std::vector<double> marks;
        for (std::size_t i = 0; i < art.time.size(); ++i) {
            if (art.classifications[pick].labels[i]) {
                marks.push_back(art.time[i]);
            }
        }
        svg.rug(marks, "#1b1b1b");
    }
    svg.write(path);
}

void plot_vi(const std::string& path, const std::vector<double>& quantile_levels,
             const std::vector<double>& vi_scores) {
    SvgCanvas svg;
    std::vector<double> xs(vi_scores.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = quantile_levels.empty() ? static_cast<double>(i) : quantile_levels[i];
    }
    svg.include(xs, vi_scores);
    svg.set_view(xs.empty() ? 0 : xs.front() - 0.01, xs.empty() ? 1 : xs.back() + 0.01,
                 0.0, vi_scores.empty()
                          ? 1.0
                          : *std::max_element(vi_scores.begin(), vi_scores.end()) * 1.1 + 1e-6);
    svg.title("variation of information by threshold");
    svg.polyline(xs, vi_scores, kPalette[0], 1.2);
    svg.points(xs, vi_scores, kPalette[1], 3.0);
    svg.write(path);
}

struct FitProduct {
    FitResult fit;
    std::vector<TraceRow> trace;
    std::optional<SelectionReport> selection;
    bool converged = true;
};

FitProduct fit_series(const RunConfig& config, const std::vector<double>& y,
                      const WeightMask& mask) {
    FitProduct product;
    const std::size_t n = y.size();
    std::vector<double> lambdas;

    if (config.criterion) {
        LambdaGrid grid;
        if (!config.grid.empty()) {
            grid.values = config.grid;
            std::sort(grid.values.begin(), grid.values.end());
        } else {
            grid = LambdaGrid::default_for(n);
        }
        SelectionOptions opts;
        opts.holdout_stride = config.holdout_stride;
        opts.controls = config.inner;
        opts.mask = mask;
        SelectionResult sel =
            select_lambdas(y, config.taus, grid, *config.criterion, config.k, opts);
        product.selection = sel.report;
        lambdas = sel.report.chosen_lambdas;
        if (config.windows <= 1) {
            product.fit = std::move(sel.refit);
            return product;
        }
    } else {
        const double shared =
            config.lambda >= 0.0 ? config.lambda : static_cast<double>(n) / 5.0;
        lambdas.assign(config.taus.size(), shared);
    }

    QuantileSpec spec;
    spec.taus = config.taus;
    spec.lambdas = lambdas;
    spec.k = config.k;
    spec.validate();

    if (config.windows <= 1) {
        product.fit = solve_block(y, spec, mask, nullptr, config.inner, nullptr);
        return product;
    }

    const WindowLayout layout = make_layout(n, config.windows, config.overlap, config.k);
    StoppingRule rule{config.eps_abs, config.eps_rel, config.max_outer};
    WindowedFit wfit = fit_windows(y, spec, layout, config.gamma, rule, mask, config.inner);
    product.fit = std::move(wfit.fit);
    product.trace = std::move(wfit.trace);
    product.converged = wfit.converged;
    return product;
}

void write_series_artifacts(const RunConfig& config, DetrendArtifacts& art) {
    fs::create_directories(art.directory);
    const std::size_t n = art.y.size();
    const std::size_t J = art.fit.theta.cols;

    std::vector<std::string> header{config.time_column};
    std::vector<std::vector<double>> cols{art.time};
    for (std::size_t j = 0; j < J; ++j) {
        header.push_back("theta_" + tau_label(config.taus[j]));
        auto col = art.fit.theta.col(j);
        cols.emplace_back(col.begin(), col.end());
    }
    write_csv(art.directory + "/trends.csv", header, cols);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    header.assign({config.time_column});
    cols.assign({art.time});
    for (std::size_t j = 0; j < J; ++j) {
        header.push_back("residual_" + tau_label(config.taus[j]));
        std::vector<double> res(n);
        auto col = art.fit.theta.col(j);
        for (std::size_t i = 0; i < n; ++i) {
            res[i] = art.mask.weights[i] ? art.y[i] - col[i] : nan;
        }
        cols.push_back(std::move(res));
    }
    write_csv(art.directory + "/residuals.csv", header, cols);

    // classification per threshold, from the baseline quantile's residuals
    double baseline_tau = config.baseline_tau;
    std::size_t baseline_j = 0;
    if (baseline_tau > 0.0) {
        for (std::size_t j = 0; j < config.taus.size(); ++j) {
            if (std::abs(config.taus[j] - baseline_tau) < 1e-12) {
                baseline_j = j;
            }
        }
    }
    auto base_col = art.fit.theta.col(baseline_j);
    std::vector<double> detrended(n);
    for (std::size_t i = 0; i < n; ++i) {
        detrended[i] = art.mask.weights[i] ? art.y[i] - base_col[i] : nan;
    }
    std::vector<double> observed;
    observed.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (art.mask.weights[i]) {
            observed.push_back(detrended[i]);
        }
    }

    art.threshold_values = config.thresholds;
    std::vector<std::string> thr_names;
    if (art.threshold_values.empty()) {
        for (double q : config.threshold_quantiles) {
            art.threshold_values.push_back(empirical_quantile(observed, q));
            thr_names.push_back("label_q" + tau_label(q * 100.0));
        }
    } else {
        for (double t : art.threshold_values) {
            thr_names.push_back("label_t" + tau_label(t));
        }
    }

    header.assign({config.time_column});
    cols.assign({art.time});
    art.classifications.clear();
    for (std::size_t kth = 0; kth < art.threshold_values.size(); ++kth) {
        Classification cls;
        cls.labels.assign(n, 0);
        std::vector<double> as_double(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const bool on =
                art.mask.weights[i] && detrended[i] > art.threshold_values[kth];
            cls.labels[i] = on ? 1 : 0;
            as_double[i] = on ? 1.0 : 0.0;
        }
        art.classifications.push_back(std::move(cls));
        header.push_back(thr_names[kth]);
        cols.push_back(std::move(as_double));
    }
    write_csv(art.directory + "/classifications.csv", header, cols);

    if (art.selection) {
        std::ofstream json_out(art.directory + "/selection_report.json");
        json_out << art.selection->to_json() << "\n";
    }
    if (!art.trace.empty()) {
        write_trace_csv(art.directory + "/convergence_trace.csv", art.trace);
    }

    plot_trend_overlay(art.directory + "/trend_overlay.svg", art, config.taus);
    plot_rug(art.directory + "/rugplot.svg", art, detrended);
}

}  // namespace

DetrendOutcome run_detrend(const RunConfig& config) {
    if (config.inputs.empty() || config.inputs.size() > 2) {
        throw InputError("detrend expects one or two input files");
    }
    fs::create_directories(config.output_dir);

    DetrendOutcome outcome;
    for (std::size_t s = 0; s < config.inputs.size(); ++s) {
        IngestResult ing = ingest(config.inputs[s], config.time_column, config.value_column,
                                  config.missing);
        DetrendArtifacts art;
        if (config.inputs.size() == 1) {
            art.directory = config.output_dir;
        } else {
            art.directory =
                config.output_dir + "/" + fs::path(config.inputs[s]).stem().string();
        }
        art.time = std::move(ing.time);
        art.y = std::move(ing.y);
        art.mask = std::move(ing.mask);

        FitProduct product = fit_series(config, art.y, art.mask);
        art.fit = std::move(product.fit);
        art.trace = std::move(product.trace);
        art.selection = std::move(product.selection);
        outcome.converged = outcome.converged && product.converged;

        write_series_artifacts(config, art);
        outcome.series.push_back(std::move(art));
    }

    if (outcome.series.size() == 2) {
        const auto& a = outcome.series[0];
        const auto& b = outcome.series[1];
        const std::size_t thresholds =
            std::min(a.classifications.size(), b.classifications.size());
        nlohmann::json vi_json = nlohmann::json::array();
        for (std::size_t kth = 0; kth < thresholds; ++kth) {
            if (a.classifications[kth].size() != b.classifications[kth].size()) {
                throw InputError("detrend: the two series have different lengths");
            }
            const double score = vi(a.classifications[kth], b.classifications[kth]);
            outcome.vi_scores.push_back(score);
            nlohmann::json row;
            row["threshold_a"] = a.threshold_values[kth];
            row["threshold_b"] = b.threshold_values[kth];
            row["vi"] = score;
            vi_json.push_back(row);
        }
        std::ofstream json_out(config.output_dir + "/vi_summary.json");
        json_out << vi_json.dump(2) << "\n";
        plot_vi(config.output_dir + "/vi_summary.svg", config.threshold_quantiles,
                outcome.vi_scores);
    }

    if (!outcome.converged) {
        throw ConvergenceError("detrend: consensus did not converge (trace written)", 0, 0.0,
                               0.0);
    }
    return outcome;
}

void run_simulate(const SimulateConfig& config) {
    SimulatedSeries series;
    if (config.design == "peaks") {
        PeaksDesign d = config.peaks;
        d.n = config.n;
        d.seed = config.seed;
        series = gen_peaks(d);
    } else if (config.design.rfind("sine-", 0) == 0) {
        SineDesign d;
        d.kind = sine_kind_from_name(config.design.substr(5));
        d.n = config.n;
        d.seed = config.seed;
        series = gen_sine(d);
    } else {
        throw InputError("unknown design: " + config.design);
    }

    std::vector<std::string> header{"t", "y", "trend", "signal"};
    std::vector<double> t(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        t[i] = static_cast<double>(i + 1);
    }
    std::vector<std::vector<double>> cols{t, series.y, series.trend, series.signal};
    for (double tau : config.quantile_columns) {
        header.push_back("q_" + tau_label(tau));
        cols.push_back(series.true_quantiles(tau));
    }
    write_csv(config.output_path, header, cols);
}

std::vector<TimingRow> run_timing(const TimingConfig& config) {
    std::vector<TimingRow> rows;
    for (std::size_t n : config.sizes) {
        for (std::size_t W : config.windows) {
            for (std::size_t rep = 0; rep < config.replicates; ++rep) {
                TimingRow row;
                row.n = n;
                row.windows = W;
                row.replicate = rep;
                row.seed = config.seed + 1000 * rep;

                PeaksDesign design;
                design.n = n;
                design.seed = row.seed;
                const SimulatedSeries series = gen_peaks(design);
                QuantileSpec spec = QuantileSpec::uniform(
                    config.taus, static_cast<double>(n) / 5.0, config.k);
                const WindowLayout layout = make_layout(n, W, config.overlap, config.k);

                const auto start = std::chrono::steady_clock::now();
                WindowedFit fit = fit_windows(series.y, spec, layout, 1.0, StoppingRule{},
                                              WeightMask::ones(n), InnerControls{});
                const auto stop = std::chrono::steady_clock::now();
                row.seconds = std::chrono::duration<double>(stop - start).count();
                row.converged = fit.converged;
                row.outer_iterations = fit.outer_iterations;
                rows.push_back(row);
            }
        }
    }
    std::vector<double> n_col, w_col, rep_col, seed_col, sec_col, conv_col, outer_col;
    for (const auto& row : rows) {
        n_col.push_back(static_cast<double>(row.n));
        w_col.push_back(static_cast<double>(row.windows));
        rep_col.push_back(static_cast<double>(row.replicate));
        seed_col.push_back(static_cast<double>(row.seed));
        sec_col.push_back(row.seconds);
        conv_col.push_back(row.converged ? 1.0 : 0.0);
        outer_col.push_back(static_cast<double>(row.outer_iterations));
    }
    write_csv(config.output_path,
              {"n", "windows", "replicate", "seed", "seconds", "converged", "outer_iterations"},
              {n_col, w_col, rep_col, seed_col, sec_col, conv_col, outer_col});
    return rows;
}

}  // namespace qtf
