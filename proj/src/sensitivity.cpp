#include "calab/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "calab/dynamics.hpp"
#include "calab/error.hpp"
#include "calab/fit.hpp"
#include "calab/parallel.hpp"
#include "calab/rng.hpp"

namespace calab {
namespace {

constexpr std::size_t jackknife_groups = 20;

struct Ratio {
    double value;
    double std_error;
};

// sigma(s) / (sqrt(M) |mean(d)|) with a delete-one-group jackknife error.
// Samples are shifted by s[0] before accumulating so the variance does not
// cancel catastrophically when the spread is tiny next to the mean.
Ratio ratio_with_jackknife(const std::vector<double>& s, const std::vector<double>& d, double M) {
    const std::size_t n = s.size();
    const std::size_t groups = std::min(jackknife_groups, n);
    const double shift = s.front();
    std::vector<double> g_count(groups, 0.0), g_s1(groups, 0.0), g_s2(groups, 0.0), g_d1(groups, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t g = i * groups / n;
        const double x = s[i] - shift;
        g_count[g] += 1.0;
        g_s1[g] += x;
        g_s2[g] += x * x;
        g_d1[g] += d[i];
    }
    double count = 0.0, s1 = 0.0, s2 = 0.0, d1 = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
        count += g_count[g];
        s1 += g_s1[g];
        s2 += g_s2[g];
        d1 += g_d1[g];
    }
    auto estimate = [M](double c, double a1, double a2, double b1) {
        const double var = std::max(0.0, (a2 - a1 * a1 / c) / (c - 1.0));
        return std::sqrt(var) / (std::sqrt(M) * std::abs(b1 / c));
    };
    const double full = estimate(count, s1, s2, d1);
    if (groups < 2 || n < 3) return {full, 0.0};

    std::vector<double> partial(groups);
    double mean = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
        partial[g] = estimate(count - g_count[g], s1 - g_s1[g], s2 - g_s2[g], d1 - g_d1[g]);
        mean += partial[g];
    }
    mean /= static_cast<double>(groups);
    double spread = 0.0;
    for (double p : partial) spread += (p - mean) * (p - mean);
    const auto G = static_cast<double>(groups);
    return {full, std::sqrt((G - 1.0) / G * spread)};
}

void require_derivative_resolved(const std::vector<double>& d) {
    const auto n = static_cast<double>(d.size());
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : d) var += (x - mean) * (x - mean);
    var /= std::max(1.0, n - 1.0);
    const double se = std::sqrt(var / n);
    if (mean == 0.0 || std::abs(mean) <= 1.96 * se) {
        throw IllConditioned("mean derivative of the signal is statistically indistinguishable from zero");
    }
}

void require_regime(const SystemParams& params, const RegimeThresholds& thresholds, bool allow) {
    if (allow) return;
    const RegimeReport report = validate_regime(params, thresholds);
    if (!report.ok()) {
        throw RegimeViolation("system outside the perturbative regime: xi^2/min(w^2)=" +
                              std::to_string(report.weak_coupling_ratio) +
                              ", N xi^2/Omega^2=" + std::to_string(report.extensive_ratio) +
                              ", gap/xi^2=" + std::to_string(report.gap_ratio));
    }
}

double central_eigenvalue(const SystemParams& params) {
    return params.big_omega * params.big_omega + static_cast<double>(params.n()) * params.xi_sq;
}

// |q0(0) sin(sqrt(l0) t)| after the guard-band and q0(0) != 0 checks.
double noise_signal_factor(const SystemParams& params, double t, double q0_init, double guard) {
    if (q0_init == 0.0) throw IllConditioned("noise scenarios need q0(0) != 0: the signal derivative vanishes");
    const double sine = std::sin(std::sqrt(central_eigenvalue(params)) * t);
    if (std::abs(sine) < guard) {
        throw IllConditioned("|sin(sqrt(lambda0) t)| = " + std::to_string(std::abs(sine)) +
                             " is inside the guard band");
    }
    return std::abs(q0_init * sine);
}

EstimateContext context_for(const SystemParams& params, const MeasurementBudget& budget, std::uint64_t seed,
                            std::size_t samples) {
    return {params.n(), budget.t, budget.M, seed, samples};
}

}  // namespace

void validate(const FrequencyDistribution& dist, double big_omega) {
    if (!(dist.mean > 0.0) || !std::isfinite(dist.mean)) throw InvalidInput("frequency mean must be positive");
    if (!(dist.std >= 0.0) || !std::isfinite(dist.std)) throw InvalidInput("frequency std must be non-negative");
    if (!(dist.min_gap >= 0.0)) throw InvalidInput("min_gap must be non-negative");
    if (std::abs(dist.mean - big_omega) <= dist.min_gap) {
        throw InvalidInput("frequency mean lies inside the excluded band around Omega");
    }
}

void validate(const MeasurementBudget& budget) {
    if (!(budget.M >= 1.0) || !std::isfinite(budget.M)) throw InvalidInput("M must be >= 1");
    if (!(budget.t > 0.0) || !std::isfinite(budget.t)) throw InvalidInput("observation time must be positive");
}

std::string_view to_string(EstimateMode mode) {
    switch (mode) {
        case EstimateMode::freq_mc: return "freq_mc";
        case EstimateMode::freq_closed: return "freq_closed";
        case EstimateMode::white_bound: return "white_bound";
        case EstimateMode::white_mc: return "white_mc";
        case EstimateMode::colored_bound: return "colored_bound";
        case EstimateMode::colored_mc: return "colored_mc";
        case EstimateMode::baseline: return "baseline";
    }
    return "unknown";
}

std::string_view to_string(Protocol protocol) {
    return protocol == Protocol::coherent ? "coherent" : "baseline";
}

double r_statistic(std::span<const double> omegas, std::span<const double> q_peripheral, double big_omega) {
    if (omegas.size() != q_peripheral.size()) throw InvalidInput("r statistic: length mismatch");
    const double omega_sq = big_omega * big_omega;
    double r = 0.0;
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        const double detuning = omegas[j] * omegas[j] - omega_sq;
        if (detuning == 0.0) throw DegenerateSpectrum("r statistic: resonant peripheral frequency");
        r += q_peripheral[j] / detuning;
    }
    return r;
}

std::vector<double> sample_frequencies(const FrequencyDistribution& dist, double big_omega, std::size_t n,
                                       std::uint64_t seed, std::uint64_t trial_index) {
    validate(dist, big_omega);
    std::vector<double> out(n, dist.mean);
    if (dist.std == 0.0) return out;
    auto rng = make_stream(seed, {stream_domain::frequencies, trial_index});
    std::normal_distribution<double> normal(dist.mean, dist.std);
    for (auto& w : out) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 100000) throw NumericalError("frequency rejection sampling does not terminate");
            const double x = normal(rng);
            if (x > 0.0 && std::abs(x - big_omega) > dist.min_gap) {
                w = x;
                break;
            }
        }
    }
    return out;
}

double slow_phase(const SystemParams& params, double t) {
    return static_cast<double>(params.n()) * params.xi_sq * t / (2.0 * params.big_omega);
}

SensitivityEstimate sensitivity_frequency_mc(const SystemParams& params, const FrequencyDistribution& dist,
                                             const MeasurementBudget& budget, std::size_t trials,
                                             std::uint64_t seed, double q0_init,
                                             const FrequencyMcOptions& options) {
    validate(params);
    validate(dist, params.big_omega);
    validate(budget);
    if (trials < 100) throw InvalidInput("frequency Monte Carlo needs at least 100 trials");

    const std::size_t n = params.n();
    const double omega = params.big_omega;
    const double xi = params.xi_sq;
    const double t = budget.t;
    const double phase = slow_phase(params, t);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double lever = static_cast<double>(n) * t / (2.0 * omega);
    const std::vector<double> q_peripheral(n, options.peripheral_init);

    std::vector<double> signal(trials), derivative(trials);
    parallel_for(trials, [&](std::size_t i) {
        const SystemParams drawn{omega, sample_frequencies(dist, omega, n, seed, i), xi};
        require_regime(drawn, options.thresholds, options.allow_regime_violation);
        const double r = r_statistic(drawn.omegas, q_peripheral, omega);
        const double amplitude = q0_init + xi * r;
        signal[i] = amplitude * c;
        derivative[i] = r * c - amplitude * lever * s;
    });

    require_derivative_resolved(derivative);
    const Ratio ratio = ratio_with_jackknife(signal, derivative, budget.M);
    SensitivityEstimate out;
    out.value = ratio.value;
    out.std_error = ratio.std_error;
    out.mode = EstimateMode::freq_mc;
    out.context = context_for(params, budget, seed, trials);
    out.sweet_spot = std::abs(c) < 0.1;
    return out;
}

double long_time_frequency_sensitivity(std::size_t n, double big_omega, double M, double t, double xi_sq,
                                       double r_ratio) {
    const double phase = static_cast<double>(n) * xi_sq * t / (2.0 * big_omega);
    const double cot = std::cos(phase) / std::sin(phase);
    return (1.0 / static_cast<double>(n)) * (2.0 * big_omega / (std::sqrt(M) * t)) * std::abs(cot) * r_ratio;
}

SensitivityEstimate sensitivity_frequency_closed(const SystemParams& params, double r_mean, double r_std,
                                                 const MeasurementBudget& budget, double q0_init,
                                                 const FrequencyClosedOptions& options) {
    validate(params);
    validate(budget);
    if (!(r_std >= 0.0)) throw InvalidInput("sigma(r) must be non-negative");
    if (r_mean == 0.0) throw IllConditioned("<r> = 0: the coherent signal carries no coupling information");

    const double t = budget.t;
    const double phase = slow_phase(params, t);
    const double c = std::cos(phase);
    const double s = std::sin(phase);

    SensitivityEstimate out;
    out.mode = EstimateMode::freq_closed;
    out.context = context_for(params, budget, 0, 0);
    out.sweet_spot = std::abs(c) < options.guard;

    if (options.long_time) {
        if (q0_init != 0.0) throw InvalidInput("the long-time form assumes q0(0) = 0");
        if (phase < 3.0) throw InvalidInput("the long-time form needs N xi^2 t / (2 Omega) >= 3");
        if (std::abs(s) < options.guard) {
            throw IllConditioned("slow phase is inside the guard band of a cot divergence");
        }
        out.value = long_time_frequency_sensitivity(params.n(), params.big_omega, budget.M, t, params.xi_sq,
                                                    r_std / std::abs(r_mean));
        return out;
    }

    const double lever = static_cast<double>(params.n()) * t / (2.0 * params.big_omega);
    const double denominator = std::abs(lever * (q0_init + params.xi_sq * r_mean) * s - r_mean * c);
    if (denominator == 0.0) throw IllConditioned("signal derivative vanishes at this time");
    out.value = params.xi_sq * r_std * std::abs(c) / (std::sqrt(budget.M) * denominator);
    return out;
}

SensitivityEstimate sensitivity_white_noise(const SystemParams& params, const NoiseSpec& noise,
                                            const MeasurementBudget& budget, double q0_init,
                                            const NoiseBoundOptions& options) {
    validate(params);
    validate(noise);
    validate(budget);
    if (noise.kind != NoiseKind::white) throw InvalidInput("white-noise bound needs white noise");
    const double factor = noise_signal_factor(params, budget.t, q0_init, options.guard);
    SensitivityEstimate out;
    out.mode = EstimateMode::white_bound;
    out.context = context_for(params, budget, noise.seed, 0);
    out.value = 2.0 * noise.f0 * std::sqrt(noise.unit_time / budget.t) /
                (std::sqrt(budget.M) * static_cast<double>(params.n()) * factor);
    if (options.large_t_refinement) out.value /= std::numbers::sqrt2;
    return out;
}

double bound_correlation_time(const NoiseSpec& noise) {
    switch (noise.kind) {
        case NoiseKind::ou_colored: return noise.tc;
        case NoiseKind::truncated_ou: return noise.correlation_support();
        case NoiseKind::white: break;
    }
    throw InvalidInput("colored-noise bound needs a colored noise kind");
}

SensitivityEstimate sensitivity_colored_noise(const SystemParams& params, const NoiseSpec& noise,
                                              const MeasurementBudget& budget, double q0_init,
                                              const NoiseBoundOptions& options) {
    validate(params);
    validate(noise);
    validate(budget);
    const double tc = bound_correlation_time(noise);
    const double factor = noise_signal_factor(params, budget.t, q0_init, options.guard);
    SensitivityEstimate out;
    out.mode = EstimateMode::colored_bound;
    out.context = context_for(params, budget, noise.seed, 0);
    out.value = 2.0 * std::numbers::sqrt2 * noise.f0 * std::sqrt(colored_noise_b(tc, budget.t)) /
                (std::sqrt(budget.M) * static_cast<double>(params.n()) * budget.t * factor);
    return out;
}

TimeGrid noise_mc_grid(double lambda0, double t, double dt) {
    const double base = dt > 0.0 ? dt : std::min(default_step(std::sqrt(lambda0)), t / 200.0);
    const double steps = std::max(1.0, std::ceil(t / base - 1e-9));
    return TimeGrid{0.0, t, t / steps};
}

SensitivityEstimate sensitivity_noise_mc(const SystemParams& params, const NoiseSpec& noise,
                                         const MeasurementBudget& budget, double q0_init,
                                         const NoiseMcOptions& options) {
    validate(params);
    validate(noise);
    validate(budget);
    if (options.trials < 100) throw InvalidInput("noise Monte Carlo needs at least 100 trials");
    const double factor = noise_signal_factor(params, budget.t, q0_init, options.guard);
    const double lambda0 = central_eigenvalue(params);
    const TimeGrid grid = noise_mc_grid(lambda0, budget.t, options.dt);
    const std::size_t last = grid.samples() - 1;

    std::vector<double> response(options.trials);
    parallel_for(options.trials, [&](std::size_t i) {
        const ForcingRealization forcing = sample_noise(noise, grid, i);
        response[i] = greens_response_at(lambda0, forcing.values, grid.dt, last);
    });

    const double derivative = factor * static_cast<double>(params.n()) * budget.t / (2.0 * std::sqrt(lambda0));
    const std::vector<double> d(options.trials, derivative);
    const Ratio ratio = ratio_with_jackknife(response, d, budget.M);

    SensitivityEstimate out;
    out.value = ratio.value;
    out.std_error = ratio.std_error;
    out.mode = noise.kind == NoiseKind::white ? EstimateMode::white_mc : EstimateMode::colored_mc;
    out.context = context_for(params, budget, noise.seed, options.trials);
    return out;
}

SensitivityEstimate estimate_scenario(const SystemParams& params, const Scenario& scenario,
                                      const MeasurementBudget& budget, std::size_t trials, std::uint64_t seed,
                                      bool allow_regime_violation) {
    if (const auto* freq = std::get_if<FrequencyScenario>(&scenario)) {
        FrequencyMcOptions options;
        options.peripheral_init = freq->peripheral_init;
        options.allow_regime_violation = allow_regime_violation;
        return sensitivity_frequency_mc(params, freq->dist, budget, trials, seed, freq->q0_init, options);
    }
    const auto& noisy = std::get<NoiseScenario>(scenario);
    validate(params);
    require_regime(params, RegimeThresholds{}, allow_regime_violation);
    NoiseSpec spec = noisy.noise;
    spec.seed = seed;
    if (noisy.estimator == NoiseEstimator::bound) {
        return spec.kind == NoiseKind::white ? sensitivity_white_noise(params, spec, budget, noisy.q0_init, noisy.bound)
                                             : sensitivity_colored_noise(params, spec, budget, noisy.q0_init, noisy.bound);
    }
    NoiseMcOptions options;
    options.trials = trials;
    options.dt = noisy.dt;
    options.guard = noisy.bound.guard;
    return sensitivity_noise_mc(params, spec, budget, noisy.q0_init, options);
}

SensitivityEstimate baseline_separate_averaging(const SystemParams& params_template, const Scenario& scenario,
                                                const MeasurementBudget& budget, std::size_t n,
                                                std::size_t trials, std::uint64_t seed,
                                                bool allow_regime_violation) {
    if (n == 0) throw InvalidInput("baseline needs at least one pair");
    double omega = 0.0;
    if (const auto* freq = std::get_if<FrequencyScenario>(&scenario)) {
        omega = freq->dist.mean;
    } else {
        if (params_template.omegas.empty()) throw InvalidInput("baseline template needs a peripheral frequency");
        omega = params_template.omegas.front();
    }
    const SystemParams pair{params_template.big_omega, {omega}, params_template.xi_sq};

    double inverse_sum = 0.0;
    double error_weight = 0.0;
    bool any_zero = false;
    std::vector<SensitivityEstimate> singles;
    singles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t pair_seed = i == 0 ? seed : derive_seed(seed, {stream_domain::baseline_pair, i});
        singles.push_back(estimate_scenario(pair, scenario, budget, trials, pair_seed, allow_regime_violation));
        const double v = singles.back().value;
        if (v == 0.0) {
            any_zero = true;
            continue;
        }
        inverse_sum += 1.0 / (v * v);
    }

    SensitivityEstimate out;
    out.mode = EstimateMode::baseline;
    out.context = {n, budget.t, budget.M, seed, trials * n};
    if (any_zero) return out;
    out.value = 1.0 / std::sqrt(inverse_sum);
    for (const auto& e : singles) {
        const double w = std::pow(out.value / e.value, 3.0) * e.std_error;
        error_weight += w * w;
    }
    out.std_error = std::sqrt(error_weight);
    if (n == 1) {
        out = singles.front();
        out.mode = EstimateMode::baseline;
    }
    return out;
}

ScalingResult scaling_study(const ScalingConfig& config) {
    if (config.n_values.size() < 3) throw InvalidInput("scaling study needs at least 3 values of N");
    const bool frequency = std::holds_alternative<FrequencyScenario>(config.scenario);
    double template_omega = 0.0;
    if (frequency) {
        template_omega = std::get<FrequencyScenario>(config.scenario).dist.mean;
    } else {
        if (config.base.omegas.empty()) throw InvalidInput("scaling study needs a peripheral frequency");
        template_omega = config.base.omegas.front();
    }

    ScalingResult result;
    std::vector<PowerLawPoint> points;
    for (std::size_t n : config.n_values) {
        if (n == 0) throw InvalidInput("N must be positive");
        const std::uint64_t point_seed = derive_seed(config.seed, {stream_domain::scaling_point, n});
        MeasurementBudget budget = config.budget;
        SensitivityEstimate est;
        if (config.protocol == Protocol::coherent) {
            const SystemParams params{config.base.big_omega, std::vector<double>(n, template_omega),
                                      config.base.xi_sq};
            if (frequency && config.hold_phase > 0.0) {
                budget.t = 2.0 * params.big_omega * config.hold_phase / (static_cast<double>(n) * params.xi_sq);
            }
            est = estimate_scenario(params, config.scenario, budget, config.trials, point_seed,
                                    config.allow_regime_violation);
        } else {
            const SystemParams pair{config.base.big_omega, {template_omega}, config.base.xi_sq};
            est = baseline_separate_averaging(pair, config.scenario, budget, n, config.trials, point_seed,
                                              config.allow_regime_violation);
        }
        if (!(est.value > 0.0)) throw IllConditioned("scaling point N=" + std::to_string(n) + " has zero sensitivity");
        result.n_values.push_back(n);
        result.sensitivities.push_back(est.value);
        result.std_errors.push_back(est.std_error);
        result.times.push_back(budget.t);
        points.push_back({static_cast<double>(n), est.value, est.std_error});
    }
    const LogLogFit fit = fit_log_log_slope(points, derive_seed(config.seed, {stream_domain::bootstrap}));
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.slope_ci = {fit.ci_low, fit.ci_high};
    return result;
}

}  // namespace calab
