#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "jive/model.hpp"

namespace jive {

enum class SweepAxis { N, K, Theta, Sigma, D };
enum class Method { Ajive, Oracle, Stacked };

std::string to_string(SweepAxis a);
std::string to_string(Method m);
SweepAxis parse_axis(const std::string& s);
Method parse_method(const std::string& s);

struct SweepConfig {
    JiveConfig base;
    SweepAxis axis = SweepAxis::N;
    std::vector<double> axis_values;       // nonempty, strictly increasing
    std::size_t trials = 100;
    std::vector<Method> methods = {Method::Ajive};
    std::uint64_t master_seed = 0;
    // Measured wall times are only emitted when set; the default keeps CSV
    // output byte-identical across runs and thread counts.
    bool record_timing = false;

    void validate() const;
};

struct SweepRecord {
    double axis_value = 0;
    Method method = Method::Ajive;
    double mean_error = 0;
    double std_error = 0;
    std::size_t trials = 0;
    double measured_theta_mean = 0;
    double wall_ms = 0;
    std::string status = "ok";  // "ok" or an error tag
};

/// One instance per (axis value, trial) with seed = mix(master_seed,
/// axis_index, trial_index); every requested method runs on the same
/// instance. Cells run independently (JIVE_THREADS caps the worker count,
/// 0/unset = auto) and records are aggregated in index order, so output is
/// identical across schedules. Per-cell failures are recorded as tagged
/// records without aborting the sweep.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

/// Named grids reproducing the benchmark figures. Axis endpoints follow the
/// figure captions with 8 log-spaced points per axis; trials default to 100.
/// Names: fig1a fig1b fig2a fig2b fig2c fig3a fig3b fig5a fig5b.
SweepConfig preset(const std::string& name);
const std::vector<std::string>& preset_names();

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
};

/// OLS of log(mean_error) on log(axis_value) over the method's ok-status
/// records. Throws InsufficientData (< 3 usable records) or NonpositiveError
/// (a usable record with mean_error <= 0).
SlopeFit fit_loglog(std::span<const SweepRecord> records, Method method);

/// CSV with the exact header
///   axis,axis_value,method,mean_error,std_error,trials,measured_theta_mean,wall_ms,status
/// and floats at 17 significant digits.
std::string to_csv(std::span<const SweepRecord> records, SweepAxis axis);

struct ParsedSweep {
    SweepAxis axis = SweepAxis::N;
    std::vector<SweepRecord> records;
};
ParsedSweep parse_csv(const std::string& text);

/// Two-column (axis_value, mean_error) blocks per method for external
/// plotting, blocks separated by blank lines and tagged `# method=<name>`.
std::string to_plot_data(std::span<const SweepRecord> records);

/// Writes `<out>` as CSV plus the companion plot-data file `<out>.gp`
/// (extension replaced when `<out>` ends in .csv).
void write_sweep_outputs(const std::filesystem::path& out, std::span<const SweepRecord> records,
                         SweepAxis axis);

}  // namespace jive
