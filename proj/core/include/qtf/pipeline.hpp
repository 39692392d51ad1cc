#ifndef QTF_PIPELINE_HPP
#define QTF_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtf/consensus.hpp"
#include "qtf/csv.hpp"
#include "qtf/selection.hpp"
#include "qtf/simulate.hpp"
#include "qtf/types.hpp"

namespace qtf {

/// Aggregated parameters for a batch run; flags and config files both map
/// onto this.
struct RunConfig {
    std::vector<std::string> inputs;  // one series, or two co-located series
    std::string time_column = "t";
    std::string value_column = "y";

    std::vector<double> taus = {0.05, 0.25, 0.5, 0.75, 0.95};
    std::size_t k = 2;
    double lambda = -1.0;                      // shared penalty; < 0 -> n/5 default
    std::optional<Criterion> criterion;        // set -> grid selection before the fit
    std::vector<double> grid;                  // custom grid values (else default)
    std::size_t holdout_stride = 5;            // validation criterion

    std::size_t windows = 1;
    std::size_t overlap = 500;
    double gamma = 1.0;
    double eps_abs = 0.01;
    double eps_rel = 0.001;
    std::size_t max_outer = 100;
    InnerControls inner;

    MissingPolicy missing = MissingPolicy::mask;

    double baseline_tau = -1.0;                // quantile used for detrending; < 0 -> lowest tau
    std::vector<double> thresholds;            // absolute residual thresholds
    std::vector<double> threshold_quantiles = {0.90, 0.95, 0.99};

    std::string output_dir = ".";
    std::uint64_t seed = 1;
};

/// One detrended series plus everything written for it.
struct DetrendArtifacts {
    std::string directory;
    FitResult fit;
    std::vector<double> time;
    std::vector<double> y;
    WeightMask mask;
    std::vector<TraceRow> trace;
    std::optional<SelectionReport> selection;
    std::vector<double> threshold_values;          // resolved absolute thresholds
    std::vector<Classification> classifications;   // one per threshold
};

struct DetrendOutcome {
    std::vector<DetrendArtifacts> series;
    std::vector<double> vi_scores;  // per threshold, when two inputs were given
    bool converged = true;
};

/// detrend subcommand: fits, writes trends/residuals/classifications,
/// selection report, convergence trace and plots under output_dir. Throws
/// ConvergenceError after writing partial traces when the consensus loop
/// fails to converge.
DetrendOutcome run_detrend(const RunConfig& config);

/// simulate subcommand: writes t,y,trend,signal (+ true quantile columns).
struct SimulateConfig {
    std::string design = "peaks";  // peaks | sine-gaussian | sine-beta | sine-mixed
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::vector<double> quantile_columns;
    std::string output_path = "simulated.csv";
    PeaksDesign peaks;  // n/seed overridden by the fields above
};
void run_simulate(const SimulateConfig& config);

/// timing subcommand: wall-time table over (n, W) cells on peaks-design
/// replicates with lambda = n/5.
struct TimingConfig {
    std::vector<std::size_t> sizes = {20000};
    std::vector<std::size_t> windows = {1, 2, 4};
    std::size_t replicates = 5;
    std::size_t overlap = 500;
    std::uint64_t seed = 1;
    std::string output_path = "timing.csv";
    std::vector<double> taus = {0.05, 0.10, 0.15};
    std::size_t k = 2;
};
struct TimingRow {
    std::size_t n = 0;
    std::size_t windows = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double seconds = 0.0;
    bool converged = true;
    std::size_t outer_iterations = 0;
};
std::vector<TimingRow> run_timing(const TimingConfig& config);

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

}  // namespace qtf

#endif
