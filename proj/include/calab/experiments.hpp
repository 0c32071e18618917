#pragma once

// Config-driven experiment runner behind the calab CLI. A run reads a JSON
// document, validates it completely, computes in memory and only then writes
// its data files plus manifest.json into the output directory.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "calab/demodulation.hpp"
#include "calab/dynamics.hpp"
#include "calab/model.hpp"
#include "calab/noise.hpp"
#include "calab/sensitivity.hpp"

namespace calab::experiments {

enum class Experiment { regime_check, simulate, demodulate, sensitivity, scaling, noise_stats };

std::string_view to_string(Experiment experiment);
/// Accepts the CLI spelling ("regime-check", "noise-stats", ...).
Experiment experiment_from_string(std::string_view name);

std::string_view tool_version();

enum class TrajectorySource { closed_form, integrated, both };

struct SimulateSection {
    TrajectorySource method = TrajectorySource::both;
    std::size_t substeps = 1;
    ShiftedFrequency frequency = ShiftedFrequency::linearized;
    bool record_peripherals = false;
};

struct FilterSection {
    std::optional<double> cutoff;
    std::optional<std::size_t> decimation;
};

struct SensitivitySection {
    EstimateMode mode = EstimateMode::white_bound;
    bool long_time = false;
    bool large_t_refinement = false;
    double guard = 0.1;
    double dt = 0.0;
    std::optional<double> r_mean;
    std::optional<double> r_std;
    /// baseline mode only
    bool baseline_frequency_scenario = false;
    NoiseEstimator baseline_estimator = NoiseEstimator::monte_carlo;
    std::optional<std::size_t> pairs;
};

struct ScalingSection {
    Protocol protocol = Protocol::coherent;
    bool frequency_scenario = false;
    NoiseEstimator estimator = NoiseEstimator::monte_carlo;
    std::vector<std::size_t> n_values;
    double hold_phase = 0.0;
    bool large_t_refinement = false;
    double guard = 0.1;
    double dt = 0.0;
};

struct NoiseStatsSection {
    std::vector<double> times;
    double dt = 0.0;
};

/// Fully resolved configuration. Sections that the document omits keep their
/// defaults; `has_*` records presence where an experiment requires a section.
struct ExperimentConfig {
    Experiment experiment = Experiment::regime_check;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::string output_dir = "calab-out";
    bool allow_regime_violation = false;

    SystemParams system;
    std::optional<FrequencyDistribution> system_draw;  ///< when omegas were drawn
    RegimeThresholds thresholds;

    double q0_init = 1.0;
    double peripheral_init = 1.0;
    std::vector<double> coordinates;  ///< explicit N+1 initial coordinates, if given

    std::optional<TimeGrid> grid;
    SimulateSection simulate;
    FilterSection filter;
    std::optional<FrequencyDistribution> distribution;
    std::optional<NoiseSpec> noise;
    MeasurementBudget budget;
    bool has_budget = false;
    SensitivitySection sensitivity;
    ScalingSection scaling;
    NoiseStatsSection noise_stats;

    /// Canonical JSON echo of the document after command-line overrides.
    std::string echo;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> output_dir;
    bool allow_regime_violation = false;
};

/// Parses and validates `document` for `experiment`. Unknown keys, wrong
/// types, missing sections and out-of-range values throw InvalidInput naming
/// the offending key.
ExperimentConfig parse_config(std::string_view document, Experiment experiment, const Overrides& overrides = {});

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path, Experiment experiment, const Overrides& overrides = {});

struct OutputFile {
    std::string name;
    std::string content;
};

struct RunResult {
    std::vector<OutputFile> files;  ///< data files and result.json, not yet written
    std::string result_json;        ///< headline results
    std::string report;             ///< human-readable summary for stdout
    double wall_seconds = 0.0;
};

/// Executes the experiment entirely in memory.
RunResult run(const ExperimentConfig& config);

/// Writes files and manifest.json (config echo, version, RNG id, kernel ISA,
/// wall time, results, SHA-256 of every file). Returns the manifest text.
std::string write_outputs(const ExperimentConfig& config, const RunResult& result);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// %.17g
std::string format_double(double value);

}  // namespace calab::experiments
