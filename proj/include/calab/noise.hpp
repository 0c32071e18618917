#pragma once

// Stochastic forcings f(t) sampled on a TimeGrid, and the analytic variance
// predictions for the central-oscillator response they drive.

#include <cstdint>
#include <string_view>
#include <vector>

#include "calab/time_grid.hpp"

namespace calab {

enum class NoiseKind {
    white,         ///< <f(t1) f(t2)> = f0^2 T delta(t1 - t2)
    ou_colored,    ///< <f(t) f(t+tau)> = f0^2 exp(-|tau|/tc)
    truncated_ou,  ///< exponential correlation forced to zero beyond truncation_multiple * tc
};

std::string_view to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(std::string_view name);

struct NoiseSpec {
    NoiseKind kind = NoiseKind::white;
    double f0 = 0.0;
    double unit_time = 1.0;  ///< T, the white-noise time unit
    double tc = 0.0;         ///< correlation time of the colored kinds
    std::uint64_t seed = 0;
    double truncation_multiple = 5.0;

    /// Lag beyond which the correlation vanishes: 0 for white, infinite for
    /// plain OU, truncation_multiple * tc for the truncated variant.
    double correlation_support() const;
};

/// Throws InvalidInput unless f0 >= 0, T > 0 (white) and tc > 0 (colored).
void validate(const NoiseSpec& spec);

struct ForcingRealization {
    TimeGrid grid;
    std::vector<double> values;
    NoiseSpec spec;
    std::uint64_t trial_index = 0;
    std::uint64_t stream = 0;
};

/// Independent zero-mean normal value at every grid node with variance
/// f0^2 T / dt, so the discrete correlation carries the delta weight f0^2 T.
ForcingRealization sample_white_noise(const NoiseSpec& spec, const TimeGrid& grid,
                                      std::uint64_t trial_index, std::uint64_t stream = 0);

/// Stationary Ornstein-Uhlenbeck by exact discretization:
/// x_{k+1} = a x_k + f0 sqrt(1 - a^2) eta_k, a = exp(-dt/tc), x_0 ~ N(0, f0^2).
ForcingRealization sample_ou_noise(const NoiseSpec& spec, const TimeGrid& grid,
                                   std::uint64_t trial_index, std::uint64_t stream = 0);

/// Moving average of white noise with a one-sided exponential kernel of length
/// truncation_multiple * tc. Stationary, Gaussian, unit-normalized so C(0) = 1,
/// and correlation exactly zero beyond the kernel length.
ForcingRealization sample_truncated_ou_noise(const NoiseSpec& spec, const TimeGrid& grid,
                                             std::uint64_t trial_index, std::uint64_t stream = 0);

/// Dispatches on spec.kind.
ForcingRealization sample_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t trial_index,
                                std::uint64_t stream = 0);

/// Normalized discrete correlation of the truncated variant at `lag` samples.
double truncated_ou_correlation(const NoiseSpec& spec, double dt, std::size_t lag);

struct WhiteNoiseVariance {
    double exact = 0.0;        ///< f0^2 T (t/2 - sin(2 sqrt(l0) t) / (4 sqrt(l0))) / l0
    double large_t = 0.0;      ///< f0^2 T t / (2 l0)
    double upper_bound = 0.0;  ///< f0^2 T t / l0
};

WhiteNoiseVariance white_noise_variance_prediction(double f0, double unit_time, double lambda0, double t);

/// b(t) = t tc - tc^2/2 for tc < t, and t^2/2 otherwise.
double colored_noise_b(double tc, double t);

/// (2 f0^2 / lambda0) b(t)
double colored_noise_variance_bound(double f0, double tc, double lambda0, double t);

}  // namespace calab
