#include "calab/demodulation.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "calab/error.hpp"
#include "calab/kernels.hpp"

namespace calab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBlackmanWidth = 5.5;  // transition width in units of 2 pi / taps

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

double blackman(std::size_t i, std::size_t taps) {
    const double x = kTwoPi * static_cast<double>(i) / static_cast<double>(taps - 1);
    return 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
}

void validate_filter(const FilterSpec& spec, double dt) {
    if (!(spec.cutoff > 0.0)) throw InvalidInput("filter cutoff must be positive");
    if (spec.taps < 3 || spec.taps % 2 == 0) throw InvalidInput("filter taps must be odd and >= 3");
    if (spec.decimation == 0) throw InvalidInput("decimation must be >= 1");
    if (spec.cutoff * dt >= std::numbers::pi) throw InvalidInput("filter cutoff at or above the Nyquist frequency");
}

}  // namespace

std::string_view to_string(Window) { return "blackman"; }

FilterSpec design_low_pass(double cutoff, double dt, std::size_t decimation) {
    if (!(cutoff > 0.0) || !(dt > 0.0)) throw InvalidInput("cutoff and dt must be positive");
    auto taps = static_cast<std::size_t>(std::ceil(kBlackmanWidth * kTwoPi / (cutoff * dt)));
    taps = std::max<std::size_t>(taps, 3) | 1U;
    FilterSpec spec{cutoff, taps, Window::blackman, std::max<std::size_t>(decimation, 1)};
    validate_filter(spec, dt);
    return spec;
}

FilterSpec default_filter_for(const SystemParams& params, double dt) {
    validate(params);
    double edge = 2.0 * params.big_omega;
    for (double w : params.omegas) edge = std::min(edge, std::abs(w - params.big_omega));
    if (!(edge > 0.0)) throw InvalidInput("a peripheral frequency coincides with the central one");
    const double cutoff = edge / 10.0;

    double keep_every = (kTwoPi / cutoff) / 4.0;
    const double slow = predicted_slow_frequency(params);
    if (slow > 0.0) keep_every = std::min(keep_every, (kTwoPi / slow) / 20.0);
    const auto decimation = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(keep_every / dt)));
    return design_low_pass(cutoff, dt, decimation);
}

void check_filter_for_system(const FilterSpec& spec, const SystemParams& params) {
    const double stop = 1.5 * spec.cutoff;
    if (stop >= 2.0 * params.big_omega) {
        throw InvalidInput("filter cutoff too close to 2*Omega: 1.5*cutoff = " + std::to_string(stop));
    }
    for (double w : params.omegas) {
        if (stop >= std::abs(w - params.big_omega)) {
            throw InvalidInput("filter cutoff too close to |omega_j - Omega| = " +
                               std::to_string(std::abs(w - params.big_omega)));
        }
    }
}

std::vector<double> fir_coefficients(const FilterSpec& spec, double dt) {
    validate_filter(spec, dt);
    const double wc = spec.cutoff * dt;  // rad/sample
    const auto half = static_cast<double>((spec.taps - 1) / 2);
    std::vector<double> h(spec.taps);
    // Evaluate the left half and mirror it, so the taps are exactly symmetric.
    const std::size_t centre = (spec.taps - 1) / 2;
    for (std::size_t i = 0; i <= centre; ++i) {
        const double x = static_cast<double>(i) - half;
        const double sinc = x == 0.0 ? wc / std::numbers::pi : std::sin(wc * x) / (std::numbers::pi * x);
        h[i] = sinc * blackman(i, spec.taps);
        h[spec.taps - 1 - i] = h[i];
    }
    const double gain = std::accumulate(h.begin(), h.end(), 0.0);
    for (double& c : h) c /= gain;
    return h;
}

Trajectory mix_with_reference(const Trajectory& trajectory, double big_omega) {
    Trajectory out{trajectory.grid, std::vector<double>(trajectory.values.size()), trajectory.method};
    std::vector<double> reference(trajectory.values.size());
    for (std::size_t k = 0; k < reference.size(); ++k) reference[k] = std::cos(big_omega * trajectory.grid.time(k));
    kernels::active().multiply(trajectory.values.data(), reference.data(), out.values.data(), reference.size());
    return out;
}

SlowSignal low_pass_filter(const Trajectory& signal, const FilterSpec& spec) {
    const std::vector<double> h = fir_coefficients(spec, signal.grid.dt);
    const std::size_t n = signal.values.size();
    if (n < spec.taps) throw InvalidInput("signal shorter than the filter");
    const std::size_t cut = (spec.taps - 1) / 2;
    const std::size_t first = cut;
    const std::size_t last = n - 1 - cut;
    const std::size_t count = (last - first) / spec.decimation + 1;

    SlowSignal out;
    out.transient_cut = cut;
    out.grid = TimeGrid::with_samples(signal.grid.time(first), signal.grid.dt * static_cast<double>(spec.decimation),
                                      count);
    out.values.resize(count);
    const auto& k = kernels::active();
    for (std::size_t m = 0; m < count; ++m) {
        const std::size_t centre = first + m * spec.decimation;
        out.values[m] = k.dot(h.data(), signal.values.data() + (centre - cut), spec.taps);
    }
    return out;
}

SlowSignal demodulate(const Trajectory& trajectory, double big_omega, const FilterSpec& spec) {
    if (spec.cutoff >= 2.0 * big_omega) throw InvalidInput("filter cutoff must lie below 2*Omega");
    Trajectory mixed = mix_with_reference(trajectory, big_omega);
    for (double& v : mixed.values) v *= 2.0;
    return low_pass_filter(mixed, spec);
}

namespace {

double fft_peak_frequency(const std::vector<double>& centred, double dt) {
    const std::size_t n = centred.size();
    std::size_t padded = 1;
    while (padded < 8 * n) padded <<= 1;

    std::vector<double> input(padded, 0.0);
    std::copy(centred.begin(), centred.end(), input.begin());
    std::vector<fftw_complex> spectrum(padded / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(padded), input.data(), spectrum.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    std::vector<double> power(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        power[i] = spectrum[i][0] * spectrum[i][0] + spectrum[i][1] * spectrum[i][1];
    }
    std::size_t peak = 1;
    for (std::size_t i = 1; i < power.size(); ++i) {
        if (power[i] > power[peak]) peak = i;
    }
    double offset = 0.0;
    if (peak + 1 < power.size()) {
        const double a = power[peak - 1];
        const double b = power[peak];
        const double c = power[peak + 1];
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0) offset = 0.5 * (a - c) / denom;
    }
    return kTwoPi * (static_cast<double>(peak) + offset) / (static_cast<double>(padded) * dt);
}

struct SinusoidFit {
    Eigen::Vector4d p;  // a, b, nu, c for a cos(nu tau) + b sin(nu tau) + c
    double cost = std::numeric_limits<double>::infinity();
};

double fit_cost(const std::vector<double>& tau, const std::vector<double>& y, const Eigen::Vector4d& p) {
    double cost = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double r = y[i] - (p(0) * std::cos(p(2) * tau[i]) + p(1) * std::sin(p(2) * tau[i]) + p(3));
        cost += r * r;
    }
    return cost;
}

SinusoidFit linear_fit_at(const std::vector<double>& tau, const std::vector<double>& y, double nu) {
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(tau.size()), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(tau.size()));
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        basis(r, 0) = std::cos(nu * tau[i]);
        basis(r, 1) = std::sin(nu * tau[i]);
        basis(r, 2) = 1.0;
        rhs(r) = y[i];
    }
    const Eigen::Vector3d coef = basis.colPivHouseholderQr().solve(rhs);
    SinusoidFit fit;
    fit.p << coef(0), coef(1), nu, coef(2);
    fit.cost = fit_cost(tau, y, fit.p);
    return fit;
}

Eigen::Matrix4d normal_matrix(const std::vector<double>& tau, const Eigen::Vector4d& p, Eigen::Vector4d* gradient,
                              const std::vector<double>* y) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    if (gradient) gradient->setZero();
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double c = std::cos(p(2) * tau[i]);
        const double s = std::sin(p(2) * tau[i]);
        const Eigen::Vector4d row(c, s, tau[i] * (-p(0) * s + p(1) * c), 1.0);
        jtj.noalias() += row * row.transpose();
        if (gradient) {
            const double r = (*y)[i] - (p(0) * c + p(1) * s + p(3));
            *gradient += row * r;
        }
    }
    return jtj;
}

}  // namespace

FrequencyEstimate estimate_slow_frequency(const SlowSignal& signal) {
    const std::size_t n = signal.values.size();
    if (n < 8) throw InvalidInput("slow signal needs at least 8 samples");
    const double mean = std::accumulate(signal.values.begin(), signal.values.end(), 0.0) / static_cast<double>(n);
    double spread = 0.0;
    for (double v : signal.values) spread = std::max(spread, std::abs(v - mean));
    if (spread <= 1e-12 * std::max(1.0, std::abs(mean))) {
        throw NumericalError("no oscillation resolvable in a constant slow signal");
    }

    const double dt = signal.grid.dt;
    const double t_mid = signal.grid.time(0) + 0.5 * static_cast<double>(n - 1) * dt;
    std::vector<double> tau(n);
    std::vector<double> centred(n);
    for (std::size_t i = 0; i < n; ++i) {
        tau[i] = signal.grid.time(i) - t_mid;
        centred[i] = signal.values[i] - mean;
    }

    const double nu0 = fft_peak_frequency(centred, dt);
    SinusoidFit best;
    for (double factor : {0.6, 0.8, 0.9, 1.0, 1.1, 1.25, 1.5}) {
        SinusoidFit candidate = linear_fit_at(tau, signal.values, nu0 * factor);
        if (candidate.cost < best.cost) best = candidate;
    }

    // Levenberg-Marquardt on (a, b, nu, c).
    double damping = 1e-3;
    bool converged = false;
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        Eigen::Vector4d gradient;
        const Eigen::Matrix4d jtj = normal_matrix(tau, best.p, &gradient, &signal.values);
        bool improved = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::Matrix4d lhs = jtj;
            lhs.diagonal() += damping * jtj.diagonal().cwiseMax(1e-300);
            const Eigen::Vector4d step = lhs.ldlt().solve(gradient);
            const Eigen::Vector4d trial = best.p + step;
            const double cost = fit_cost(tau, signal.values, trial);
            if (cost <= best.cost) {
                const double rel_step = std::abs(step(2)) / std::max(std::abs(trial(2)), 1e-300);
                const bool tiny = best.cost - cost <= 1e-14 * best.cost + 1e-300 && rel_step < 1e-10;
                best.p = trial;
                best.cost = cost;
                damping = std::max(damping / 10.0, 1e-12);
                improved = true;
                converged = tiny || rel_step < 1e-13;
                break;
            }
            damping *= 10.0;
        }
        if (!improved) converged = true;  // no downhill step left: at a minimum to rounding
    }
    if (!converged || !best.p.allFinite()) throw ConvergenceFailure("slow-frequency fit did not converge");

    const double nu = std::abs(best.p(2));
    const double span = signal.grid.span();
    if (nu * span < std::numbers::pi) {
        throw NumericalError("observation span covers less than half a period of the fitted slow frequency");
    }

    const Eigen::Matrix4d jtj = normal_matrix(tau, best.p, nullptr, nullptr);
    const double dof = static_cast<double>(n) - 4.0;
    const double sigma_sq = best.cost / std::max(dof, 1.0);
    const Eigen::Matrix4d cov = jtj.inverse() * sigma_sq;

    FrequencyEstimate out;
    out.frequency = nu;
    out.std_error = std::sqrt(std::max(cov(2, 2), 0.0));
    out.amplitude = std::hypot(best.p(0), best.p(1));
    // a cos(nu tau) + b sin(nu tau) = A cos(nu tau - atan2(b, a)); sign of nu folded in.
    const double signed_phase = -std::atan2(best.p(1), best.p(0));
    const double phase_tau = best.p(2) >= 0.0 ? signed_phase : -signed_phase;
    out.phase = std::remainder(phase_tau - nu * t_mid, 2.0 * std::numbers::pi);
    out.offset = best.p(3);
    return out;
}

double predicted_slow_frequency(const SystemParams& params) {
    return static_cast<double>(params.n()) * params.xi_sq / (2.0 * params.big_omega);
}

}  // namespace calab
