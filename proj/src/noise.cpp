#include "calab/noise.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "calab/error.hpp"
#include "calab/kernels.hpp"
#include "calab/rng.hpp"

namespace calab {
namespace {

std::mt19937_64 noise_stream(const NoiseSpec& spec, std::uint64_t trial_index, std::uint64_t stream) {
    return make_stream(spec.seed, {stream_domain::noise, static_cast<std::uint64_t>(spec.kind), trial_index, stream});
}

ForcingRealization empty_realization(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t trial_index,
                                     std::uint64_t stream) {
    validate(spec);
    validate(grid);
    ForcingRealization out;
    out.grid = grid;
    out.spec = spec;
    out.trial_index = trial_index;
    out.stream = stream;
    out.values.assign(grid.samples(), 0.0);
    return out;
}

std::vector<double> truncated_kernel(const NoiseSpec& spec, double dt) {
    const auto length = static_cast<std::size_t>(std::ceil(spec.truncation_multiple * spec.tc / dt));
    std::vector<double> kernel(length + 1);
    double norm = 0.0;
    for (std::size_t m = 0; m <= length; ++m) {
        kernel[m] = std::exp(-static_cast<double>(m) * dt / spec.tc);
        norm += kernel[m] * kernel[m];
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (double& h : kernel) h *= scale;
    return kernel;
}

}  // namespace

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::white: return "white";
        case NoiseKind::ou_colored: return "ou_colored";
        case NoiseKind::truncated_ou: return "truncated_ou";
    }
    return "unknown";
}

NoiseKind noise_kind_from_string(std::string_view name) {
    if (name == "white") return NoiseKind::white;
    if (name == "ou_colored") return NoiseKind::ou_colored;
    if (name == "truncated_ou") return NoiseKind::truncated_ou;
    throw InvalidInput("unknown noise kind '" + std::string(name) + "'");
}

double NoiseSpec::correlation_support() const {
    switch (kind) {
        case NoiseKind::white: return 0.0;
        case NoiseKind::ou_colored: return std::numeric_limits<double>::infinity();
        case NoiseKind::truncated_ou: return truncation_multiple * tc;
    }
    return 0.0;
}

void validate(const NoiseSpec& spec) {
    if (!(spec.f0 >= 0.0) || !std::isfinite(spec.f0)) throw InvalidInput("noise amplitude f0 must be >= 0");
    if (spec.kind == NoiseKind::white && !(spec.unit_time > 0.0)) {
        throw InvalidInput("white noise requires unit_time T > 0");
    }
    if (spec.kind != NoiseKind::white && !(spec.tc > 0.0 && std::isfinite(spec.tc))) {
        throw InvalidInput("colored noise requires correlation time tc > 0");
    }
    if (spec.kind == NoiseKind::truncated_ou && !(spec.truncation_multiple > 0.0)) {
        throw InvalidInput("truncation_multiple must be positive");
    }
}

ForcingRealization sample_white_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t trial_index,
                                      std::uint64_t stream) {
    if (spec.kind != NoiseKind::white) throw InvalidInput("sample_white_noise requires kind = white");
    ForcingRealization out = empty_realization(spec, grid, trial_index, stream);
    if (spec.f0 == 0.0) return out;
    auto rng = noise_stream(spec, trial_index, stream);
    std::normal_distribution<double> normal(0.0, spec.f0 * std::sqrt(spec.unit_time / grid.dt));
    for (double& v : out.values) v = normal(rng);
    return out;
}

ForcingRealization sample_ou_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t trial_index,
                                   std::uint64_t stream) {
    if (spec.kind != NoiseKind::ou_colored) throw InvalidInput("sample_ou_noise requires kind = ou_colored");
    ForcingRealization out = empty_realization(spec, grid, trial_index, stream);
    if (spec.f0 == 0.0 || out.values.empty()) return out;
    auto rng = noise_stream(spec, trial_index, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a = std::exp(-grid.dt / spec.tc);
    const double innovation = spec.f0 * std::sqrt(-std::expm1(-2.0 * grid.dt / spec.tc));
    double x = spec.f0 * normal(rng);
    out.values[0] = x;
    for (std::size_t k = 1; k < out.values.size(); ++k) {
        x = a * x + innovation * normal(rng);
        out.values[k] = x;
    }
    return out;
}

ForcingRealization sample_truncated_ou_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t trial_index,
                                             std::uint64_t stream) {
    if (spec.kind != NoiseKind::truncated_ou) {
        throw InvalidInput("sample_truncated_ou_noise requires kind = truncated_ou");
    }
    ForcingRealization out = empty_realization(spec, grid, trial_index, stream);
    if (spec.f0 == 0.0 || out.values.empty()) return out;

    // x_k = f0 * sum_m h_m eta_{k-m}; stored reversed so each sample is a dot
    // product against a contiguous window of the innovation buffer.
    const std::vector<double> kernel = truncated_kernel(spec, grid.dt);
    const std::size_t length = kernel.size() - 1;
    std::vector<double> reversed(kernel.rbegin(), kernel.rend());
    for (double& h : reversed) h *= spec.f0;

    auto rng = noise_stream(spec, trial_index, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> innovations(out.values.size() + length);
    for (double& eta : innovations) eta = normal(rng);

    const auto& k = kernels::active();
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = k.dot(reversed.data(), innovations.data() + i, reversed.size());
    }
    return out;
}

ForcingRealization sample_noise(const NoiseSpec& spec, const TimeGrid& grid, std::uint64_t trial_index,
                                std::uint64_t stream) {
    switch (spec.kind) {
        case NoiseKind::white: return sample_white_noise(spec, grid, trial_index, stream);
        case NoiseKind::ou_colored: return sample_ou_noise(spec, grid, trial_index, stream);
        case NoiseKind::truncated_ou: return sample_truncated_ou_noise(spec, grid, trial_index, stream);
    }
    throw InvalidInput("unknown noise kind");
}

double truncated_ou_correlation(const NoiseSpec& spec, double dt, std::size_t lag) {
    const std::vector<double> kernel = truncated_kernel(spec, dt);
    double acc = 0.0;
    for (std::size_t m = 0; m + lag < kernel.size(); ++m) acc += kernel[m] * kernel[m + lag];
    return acc;
}

WhiteNoiseVariance white_noise_variance_prediction(double f0, double unit_time, double lambda0, double t) {
    if (!(lambda0 > 0.0)) throw InvalidInput("lambda0 must be positive");
    if (!(t >= 0.0)) throw InvalidInput("t must be non-negative");
    const double root = std::sqrt(lambda0);
    const double weight = f0 * f0 * unit_time / lambda0;
    WhiteNoiseVariance out;
    out.exact = weight * (t / 2.0 - std::sin(2.0 * root * t) / (4.0 * root));
    out.large_t = weight * t / 2.0;
    out.upper_bound = weight * t;
    return out;
}

double colored_noise_b(double tc, double t) {
    if (tc < t) return t * tc - 0.5 * tc * tc;
    return 0.5 * t * t;
}

double colored_noise_variance_bound(double f0, double tc, double lambda0, double t) {
    if (!(lambda0 > 0.0)) throw InvalidInput("lambda0 must be positive");
    return 2.0 * f0 * f0 / lambda0 * colored_noise_b(tc, t);
}

}  // namespace calab
