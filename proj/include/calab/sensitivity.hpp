#pragma once

// Smallest resolvable coupling change, delta xi^2_min = sigma(signal) /
// (sqrt(M) |<d signal / d xi^2>|), for frequency uncertainty and for
// time-dependent noise, plus the separate-averaging baseline and the log-log
// scaling study over N.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "calab/model.hpp"
#include "calab/noise.hpp"

namespace calab {

/// i.i.d. Gaussian peripheral frequencies, redrawn while inside
/// [Omega - min_gap, Omega + min_gap] or non-positive.
struct FrequencyDistribution {
    double mean = 0.0;
    double std = 0.0;
    double min_gap = 0.0;
};

void validate(const FrequencyDistribution& dist, double big_omega);

struct MeasurementBudget {
    double M = 1.0;  ///< repetitions
    double t = 0.0;  ///< observation time
};

void validate(const MeasurementBudget& budget);

enum class EstimateMode { freq_mc, freq_closed, white_bound, white_mc, colored_bound, colored_mc, baseline };
std::string_view to_string(EstimateMode mode);

struct EstimateContext {
    std::size_t n = 0;
    double t = 0.0;
    double M = 1.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
};

struct SensitivityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    EstimateMode mode = EstimateMode::freq_closed;
    EstimateContext context;
    /// cos(N xi^2 t / (2 Omega)) is within the guard band of zero: the
    /// frequency-scenario estimate vanishes there.
    bool sweet_spot = false;
};

/// sum_j q_j(0) / (omega_j^2 - Omega^2)
double r_statistic(std::span<const double> omegas, std::span<const double> q_peripheral, double big_omega);

/// N draws from dist, rejecting values inside [Omega - min_gap, Omega + min_gap]
/// or <= 0. Deterministic in (dist, Omega, n, seed, trial_index).
std::vector<double> sample_frequencies(const FrequencyDistribution& dist, double big_omega, std::size_t n,
                                       std::uint64_t seed, std::uint64_t trial_index);

/// Slow-signal phase N xi^2 t / (2 Omega).
double slow_phase(const SystemParams& params, double t);

struct FrequencyMcOptions {
    double peripheral_init = 1.0;  ///< q_j(0) for every peripheral oscillator
    bool allow_regime_violation = false;
    RegimeThresholds thresholds{};
};

/// Monte Carlo over P({omega_j}): s = (q0(0) + xi^2 r) cos(phase) per draw; the
/// derivative r cos(phase) - (q0(0) + xi^2 r)(N t/(2 Omega)) sin(phase) is
/// averaged analytically. std_error is a grouped jackknife. params.omegas is
/// ignored apart from its length N. Throws IllConditioned when the mean
/// derivative is within 1.96 standard errors of zero.
SensitivityEstimate sensitivity_frequency_mc(const SystemParams& params, const FrequencyDistribution& dist,
                                             const MeasurementBudget& budget, std::size_t trials,
                                             std::uint64_t seed, double q0_init,
                                             const FrequencyMcOptions& options = {});

struct FrequencyClosedOptions {
    /// Evaluate the waited-long-enough form (requires q0(0) = 0 and phase >= 3).
    bool long_time = false;
    double guard = 0.1;
};

/// Full expression
///   xi^2 sigma(r) |cos p| / (sqrt(M) |(N t/(2 Omega))(q0 + xi^2 <r>) sin p - <r> cos p|)
/// or, with long_time, long_time_frequency_sensitivity. Throws IllConditioned
/// when <r> = 0, when the denominator vanishes, or (long-time form) when
/// |sin p| is inside the guard band.
SensitivityEstimate sensitivity_frequency_closed(const SystemParams& params, double r_mean, double r_std,
                                                 const MeasurementBudget& budget, double q0_init,
                                                 const FrequencyClosedOptions& options = {});

/// (1/N) (2 Omega / (sqrt(M) t)) |cot(N xi^2 t / (2 Omega))| r_ratio, no preconditions.
double long_time_frequency_sensitivity(std::size_t n, double big_omega, double M, double t, double xi_sq,
                                       double r_ratio);

struct NoiseBoundOptions {
    /// Apply the large-t factor 1/sqrt(2) (white noise only).
    bool large_t_refinement = false;
    double guard = 0.1;
};

/// 2 f0 sqrt(T/t) / (sqrt(M) N |q0(0) sin(sqrt(l0) t)|), l0 = Omega^2 + N xi^2.
SensitivityEstimate sensitivity_white_noise(const SystemParams& params, const NoiseSpec& noise,
                                            const MeasurementBudget& budget, double q0_init,
                                            const NoiseBoundOptions& options = {});

/// Lag beyond which the bound treats the correlation as zero: tc for plain OU,
/// the truncation length for the truncated variant.
double bound_correlation_time(const NoiseSpec& noise);

/// 2 sqrt(2) f0 sqrt(b(t)) / (sqrt(M) N t |q0(0) sin(sqrt(l0) t)|).
SensitivityEstimate sensitivity_colored_noise(const SystemParams& params, const NoiseSpec& noise,
                                              const MeasurementBudget& budget, double q0_init,
                                              const NoiseBoundOptions& options = {});

struct NoiseMcOptions {
    std::size_t trials = 1000;
    double dt = 0.0;  ///< 0: min((2 pi / sqrt(l0))/50, t/200), snapped so t is a node
    double guard = 0.1;
};

/// sigma(n(t)) over Green's-function responses to independent realizations of
/// `noise` (streams keyed by noise.seed), divided by sqrt(M) times
/// |q0(0)| (N t / (2 sqrt(l0))) |sin(sqrt(l0) t)|. Mode white_mc or colored_mc.
SensitivityEstimate sensitivity_noise_mc(const SystemParams& params, const NoiseSpec& noise,
                                         const MeasurementBudget& budget, double q0_init,
                                         const NoiseMcOptions& options = {});

/// Grid on [0, t] used by sensitivity_noise_mc.
TimeGrid noise_mc_grid(double lambda0, double t, double dt);

struct FrequencyScenario {
    FrequencyDistribution dist;
    double q0_init = 0.0;
    double peripheral_init = 1.0;
};

enum class NoiseEstimator { bound, monte_carlo };

struct NoiseScenario {
    NoiseSpec noise;
    double q0_init = 1.0;
    NoiseEstimator estimator = NoiseEstimator::monte_carlo;
    NoiseBoundOptions bound{};
    double dt = 0.0;
};

using Scenario = std::variant<FrequencyScenario, NoiseScenario>;

/// Coherent-protocol estimate for one system. trials applies to Monte Carlo
/// estimators; seed keys every random stream.
SensitivityEstimate estimate_scenario(const SystemParams& params, const Scenario& scenario,
                                      const MeasurementBudget& budget, std::size_t trials, std::uint64_t seed,
                                      bool allow_regime_violation = false);

/// N independent single-pair (N = 1) estimates combined by inverse-variance
/// averaging, (sum_i delta_i^-2)^(-1/2). Pair 0 uses `seed`, pair i > 0 a seed
/// derived from (seed, i). The single pair uses params_template.omegas[0] as its
/// frequency (frequency scenarios draw it from the distribution instead).
SensitivityEstimate baseline_separate_averaging(const SystemParams& params_template, const Scenario& scenario,
                                                const MeasurementBudget& budget, std::size_t n,
                                                std::size_t trials, std::uint64_t seed,
                                                bool allow_regime_violation = false);

enum class Protocol { coherent, baseline };
std::string_view to_string(Protocol protocol);

struct ScalingConfig {
    Scenario scenario;
    Protocol protocol = Protocol::coherent;
    /// Omega, xi^2 and a representative peripheral frequency (omegas[0]).
    SystemParams base;
    std::vector<std::size_t> n_values;
    MeasurementBudget budget;
    /// Frequency scenarios: when > 0, t is set per N so N xi^2 t/(2 Omega) equals it.
    double hold_phase = 0.0;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    bool allow_regime_violation = false;
};

struct ScalingResult {
    std::vector<std::size_t> n_values;
    std::vector<double> sensitivities;
    std::vector<double> std_errors;
    std::vector<double> times;
    double slope = 0.0;
    std::array<double, 2> slope_ci{0.0, 0.0};
    double intercept = 0.0;
};

/// delta xi^2_min at every N (regime-checked), then the log-log slope with a
/// bootstrap interval from the per-point standard errors.
ScalingResult scaling_study(const ScalingConfig& config);

}  // namespace calab
