// qtf: quantile trend filtering for long, drifting time series.
//
// Subcommands: detrend, select, simulate, classify, metrics, timing.
// Exit codes: 0 success, 2 input error, 3 solver non-convergence,
// 1 anything else.

#include "qtf/consensus.hpp"
#include "qtf/csv.hpp"
#include "qtf/errors.hpp"
#include "qtf/metrics.hpp"
#include "qtf/pipeline.hpp"
#include "qtf/selection.hpp"
#include "qtf/simulate.hpp"
#include "qtf/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

void add_common_fit_flags(CLI::App* cmd, qtf::RunConfig& config, std::string& criterion,
                          std::vector<double>& grid_spec) {
    cmd->add_option("--tau", config.taus, "quantile levels (strictly increasing)")
        ->delimiter(',');
    cmd->add_option("--lambda", config.lambda, "shared penalty; default n/5");
    cmd->add_option("--grid", grid_spec,
                    "selection grid as lo,hi,count (log-spaced) or an explicit list")
        ->delimiter(',');
    cmd->add_option("--criterion", criterion, "sic | bic | ebic | validation");
    cmd->add_option("--holdout-stride", config.holdout_stride,
                    "validation holdout: every stride-th observation");
    cmd->add_option("--windows", config.windows, "number of overlapping windows");
    cmd->add_option("--overlap", config.overlap, "window overlap (observations)");
    cmd->add_option("--gamma", config.gamma, "consensus penalty");
    cmd->add_option("--eps-abs", config.eps_abs, "absolute stopping tolerance");
    cmd->add_option("--eps-rel", config.eps_rel, "relative stopping tolerance");
    cmd->add_option("--max-outer", config.max_outer, "consensus iteration cap");
    cmd->add_option("--k", config.k, "difference order parameter (piecewise degree)");
    cmd->add_option("--seed", config.seed, "run seed");
    cmd->add_option("--time-column", config.time_column, "time column name");
    cmd->add_option("--value-column", config.value_column, "value column name");
    cmd->add_option("--output", config.output_dir, "output directory");
    cmd->add_option("--baseline-tau", config.baseline_tau,
                    "quantile used for detrending (default: lowest)");
    cmd->add_option("--thresholds", config.thresholds, "absolute residual thresholds")
        ->delimiter(',');
    cmd->add_option("--threshold-quantiles", config.threshold_quantiles,
                    "empirical residual quantiles used as thresholds")
        ->delimiter(',');
}

void finish_config(qtf::RunConfig& config, const std::string& criterion,
                   const std::vector<double>& grid_spec, const std::string& missing) {
    if (!criterion.empty()) {
        config.criterion = qtf::criterion_from_name(criterion);
    }
    if (grid_spec.size() == 3 && grid_spec[2] == std::floor(grid_spec[2]) &&
        grid_spec[2] >= 1.0 && grid_spec[0] < grid_spec[1]) {
        config.grid = qtf::LambdaGrid::log_spaced(grid_spec[0], grid_spec[1],
                                                  static_cast<std::size_t>(grid_spec[2]))
                          .values;
    } else {
        config.grid = grid_spec;
    }
    config.missing = qtf::missing_policy_from_name(missing);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantile trend filtering for long, drifting time series"};
    app.require_subcommand(1);
    app.set_config("--config");

    // ---- detrend / select -------------------------------------------------
    qtf::RunConfig run_config;
    std::string criterion_name;
    std::vector<double> grid_spec;
    std::string missing = "mask";

    CLI::App* detrend = app.add_subcommand("detrend", "estimate and remove quantile trends");
    detrend->add_option("inputs", run_config.inputs, "input CSV file(s), one or two")
        ->required()
        ->expected(1, 2);
    detrend->add_option("--missing", missing, "mask | interpolate");
    add_common_fit_flags(detrend, run_config, criterion_name, grid_spec);

    CLI::App* select = app.add_subcommand("select", "smoothing parameter selection only");
    select->add_option("inputs", run_config.inputs, "input CSV file")->required()->expected(1);
    select->add_option("--missing", missing, "mask | interpolate");
    add_common_fit_flags(select, run_config, criterion_name, grid_spec);

    // ---- simulate ----------------------------------------------------------
    qtf::SimulateConfig sim_config;
    CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic series");
    simulate->add_option("--design", sim_config.design,
                         "peaks | sine-gaussian | sine-beta | sine-mixed");
    simulate->add_option("--n", sim_config.n, "series length");
    simulate->add_option("--seed", sim_config.seed, "generator seed");
    simulate->add_option("--quantile-columns", sim_config.quantile_columns,
                         "true quantile levels to include as columns")
        ->delimiter(',');
    simulate->add_option("--out", sim_config.output_path, "output CSV path");
    simulate->add_option("--noise-sd", sim_config.peaks.noise_sd, "peaks: noise sd");
    simulate->add_option("--peak-prob", sim_config.peaks.peak_prob,
                         "peaks: per-observation bump probability");

    // ---- classify ----------------------------------------------------------
    std::string cls_series, cls_trends, cls_trend_column, cls_out = "classifications.csv";
    std::vector<double> cls_thresholds;
    std::vector<double> cls_quantiles;
    std::string cls_time = "t", cls_value = "y";
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "threshold the residuals of a fitted trend");
    classify_cmd->add_option("--series", cls_series, "series CSV")->required();
    classify_cmd->add_option("--trends", cls_trends, "trends CSV (from detrend)")->required();
    classify_cmd->add_option("--trend-column", cls_trend_column,
                             "trend column (default: first theta_*)");
    classify_cmd->add_option("--thresholds", cls_thresholds, "absolute thresholds")
        ->delimiter(',');
    classify_cmd->add_option("--threshold-quantiles", cls_quantiles,
                             "empirical residual quantiles")
        ->delimiter(',');
    classify_cmd->add_option("--time-column", cls_time, "time column name");
    classify_cmd->add_option("--value-column", cls_value, "value column name");
    classify_cmd->add_option("--out", cls_out, "output CSV path");

    // ---- metrics -----------------------------------------------------------
    std::vector<std::string> met_files;
    std::string met_kind = "labels";
    std::string met_column;
    CLI::App* metrics_cmd = app.add_subcommand("metrics", "score two files (JSON to stdout)");
    metrics_cmd->add_option("files", met_files, "two CSV files")->required()->expected(2);
    metrics_cmd->add_option("--kind", met_kind,
                            "labels (vi/caa of classifications) | values (rmse)");
    metrics_cmd->add_option("--column", met_column, "column to compare");

    // ---- timing ------------------------------------------------------------
    qtf::TimingConfig timing_config;
    CLI::App* timing = app.add_subcommand("timing", "wall-time table over (n, windows) cells");
    timing->add_option("--sizes", timing_config.sizes, "data sizes")->delimiter(',');
    timing->add_option("--windows", timing_config.windows, "window counts")->delimiter(',');
    timing->add_option("--replicates", timing_config.replicates, "replicates per cell");
    timing->add_option("--overlap", timing_config.overlap, "window overlap");
    timing->add_option("--seed", timing_config.seed, "base seed");
    timing->add_option("--out", timing_config.output_path, "output CSV path");
    timing->add_option("--tau", timing_config.taus, "quantile levels")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*detrend || *select) {
            finish_config(run_config, criterion_name, grid_spec, missing);
            if (*select && !run_config.criterion) {
                run_config.criterion = qtf::Criterion::ebic;
            }
            qtf::run_detrend(run_config);
        } else if (*simulate) {
            qtf::run_simulate(sim_config);
        } else if (*classify_cmd) {
            qtf::IngestResult series =
                qtf::ingest(cls_series, cls_time, cls_value, qtf::MissingPolicy::mask);
            qtf::CsvTable trends = qtf::read_csv(cls_trends);
            std::size_t col_idx = 1;
            if (!cls_trend_column.empty()) {
                col_idx = trends.column(cls_trend_column);
            } else {
                for (std::size_t j = 0; j < trends.header.size(); ++j) {
                    if (trends.header[j].rfind("theta_", 0) == 0) {
                        col_idx = j;
                        break;
                    }
                }
            }
            if (trends.rows.size() != series.y.size()) {
                throw qtf::InputError("classify: series and trends lengths differ");
            }
            std::vector<double> theta(series.y.size());
            for (std::size_t i = 0; i < theta.size(); ++i) {
                theta[i] = std::stod(trends.rows[i][col_idx]);
            }
            std::vector<double> detrended;
            std::vector<double> observed;
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const double r = series.y[i] - theta[i];
                detrended.push_back(r);
                if (series.mask.weights[i]) {
                    observed.push_back(r);
                }
            }
            std::vector<double> thresholds = cls_thresholds;
            std::vector<std::string> names;
            for (double t : thresholds) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "label_t%g", t);
                names.push_back(buf);
            }
            if (thresholds.empty()) {
                const std::vector<double> qs =
                    cls_quantiles.empty() ? std::vector<double>{0.90, 0.95, 0.99}
                                          : cls_quantiles;
                for (double q : qs) {
                    thresholds.push_back(qtf::empirical_quantile(observed, q));
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "label_q%g", q * 100.0);
                    names.push_back(buf);
                }
            }
            std::vector<std::string> header{cls_time};
            std::vector<std::vector<double>> cols{series.time};
            for (std::size_t kth = 0; kth < thresholds.size(); ++kth) {
                std::vector<double> lab(theta.size(), 0.0);
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    lab[i] = (series.mask.weights[i] && detrended[i] > thresholds[kth]) ? 1.0
                                                                                        : 0.0;
                }
                header.push_back(names[kth]);
                cols.push_back(std::move(lab));
            }
            qtf::write_csv(cls_out, header, cols);
        } else if (*metrics_cmd) {
            qtf::CsvTable a = qtf::read_csv(met_files[0]);
            qtf::CsvTable b = qtf::read_csv(met_files[1]);
            auto pick_column = [&met_column](const qtf::CsvTable& t) {
                if (!met_column.empty()) {
                    return t.column(met_column);
                }
                for (std::size_t j = 0; j < t.header.size(); ++j) {
                    if (t.header[j] != "t" && t.header[j] != "time") {
                        return j;
                    }
                }
                return std::size_t{0};
            };
            const std::size_t ca = pick_column(a);
            const std::size_t cb = pick_column(b);
            if (a.rows.size() != b.rows.size()) {
                throw qtf::InputError("metrics: files have different row counts");
            }
            nlohmann::json out;
            if (met_kind == "labels") {
                qtf::Classification la, lb;
                for (std::size_t i = 0; i < a.rows.size(); ++i) {
                    la.labels.push_back(std::stod(a.rows[i][ca]) > 0.5 ? 1 : 0);
                    lb.labels.push_back(std::stod(b.rows[i][cb]) > 0.5 ? 1 : 0);
                }
                out["vi"] = qtf::vi(la, lb);
                bool has0 = false, has1 = false;
                for (auto l : la.labels) {
                    (l ? has1 : has0) = true;
                }
                if (has0 && has1) {
                    out["caa"] = qtf::caa(la, lb);
                }
            } else if (met_kind == "values") {
                std::vector<double> va, vb;
                for (std::size_t i = 0; i < a.rows.size(); ++i) {
                    va.push_back(std::stod(a.rows[i][ca]));
                    vb.push_back(std::stod(b.rows[i][cb]));
                }
                out["rmse"] = qtf::rmse(va, vb);
            } else {
                throw qtf::InputError("metrics: unknown kind " + met_kind);
            }
            std::cout << out.dump(2) << "\n";
        } else if (*timing) {
            qtf::run_timing(timing_config);
        }
    } catch (const qtf::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const qtf::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const qtf::LayoutError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const qtf::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOk;
}
