#include "calab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calab/error.hpp"
#include "calab/kernels.hpp"

namespace calab {

InitialConditions InitialConditions::at_rest(std::vector<double> coordinates) {
    InitialConditions init;
    init.v0.assign(coordinates.size(), 0.0);
    init.q0 = std::move(coordinates);
    return init;
}

InitialConditions InitialConditions::at_rest(std::size_t n, double central, double peripheral) {
    std::vector<double> q(n + 1, peripheral);
    q[0] = central;
    return at_rest(std::move(q));
}

std::string_view to_string(TrajectoryMethod method) {
    switch (method) {
        case TrajectoryMethod::closed_form: return "closed_form";
        case TrajectoryMethod::integrated: return "integrated";
        case TrajectoryMethod::greens: return "greens";
    }
    return "unknown";
}

Trajectory TrajectorySet::central() const {
    return Trajectory{grid, coordinates.empty() ? std::vector<double>{} : coordinates.front(),
                      TrajectoryMethod::integrated};
}

namespace {

void check_initial_conditions(const SystemParams& params, const InitialConditions& init) {
    if (init.q0.size() != params.dimension() || init.v0.size() != params.dimension()) {
        throw InvalidInput("initial conditions must have N+1 = " + std::to_string(params.dimension()) + " entries");
    }
}

}  // namespace

Trajectory closed_form_response(const SystemParams& params, const InitialConditions& init, const TimeGrid& grid,
                                const ClosedFormOptions& options) {
    validate(params);
    validate(grid);
    check_initial_conditions(params, init);
    if (std::any_of(init.v0.begin(), init.v0.end(), [](double v) { return v != 0.0; })) {
        throw InvalidInput("closed-form response requires zero initial velocities");
    }
    const RegimeReport regime = validate_regime(params, options.thresholds);
    if (!regime.ok() && !options.allow_regime_violation) {
        throw RegimeViolation("closed-form response outside the perturbative regime");
    }

    const double omega = params.big_omega;
    const double omega_sq = omega * omega;
    const double xi = params.xi_sq;
    const auto n = static_cast<double>(params.n());
    const bool linear = options.frequency == ShiftedFrequency::linearized;
    const double central_freq = linear ? omega + n * xi / (2.0 * omega) : std::sqrt(omega_sq + n * xi);

    std::vector<double> amplitude(params.n());
    std::vector<double> peripheral_freq(params.n());
    double coupled_sum = 0.0;
    for (std::size_t j = 0; j < params.n(); ++j) {
        const double w = params.omegas[j];
        amplitude[j] = xi * init.q0[j + 1] / (w * w - omega_sq);
        peripheral_freq[j] = linear ? w + xi / (2.0 * w) : std::sqrt(w * w + xi);
        coupled_sum += amplitude[j];
    }
    const double central_amplitude = init.q0[0] + coupled_sum;

    Trajectory out{grid, std::vector<double>(grid.samples()), TrajectoryMethod::closed_form};
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const double t = grid.time(k);
        double value = central_amplitude * std::cos(central_freq * t);
        for (std::size_t j = 0; j < amplitude.size(); ++j) {
            if (amplitude[j] != 0.0) value -= amplitude[j] * std::cos(peripheral_freq[j] * t);
        }
        out.values[k] = value;
    }
    return out;
}

namespace {

struct ArrowOperator {
    double head = 0.0;
    double edge = 0.0;
    std::vector<double> diag;

    explicit ArrowOperator(const SystemParams& params) : diag(params.dimension(), 0.0) {
        head = params.big_omega * params.big_omega + static_cast<double>(params.n()) * params.xi_sq;
        edge = -params.xi_sq;
        for (std::size_t j = 0; j < params.n(); ++j) diag[j + 1] = params.omegas[j] * params.omegas[j] + params.xi_sq;
    }

    void apply(const kernels::KernelTable& k, const std::vector<double>& q, std::vector<double>& out) const {
        k.arrow_matvec(head, edge, diag.data(), q.data(), out.data(), q.size());
    }
};

}  // namespace

TrajectorySet integrate_full_system(const SystemParams& params, const InitialConditions& init, const TimeGrid& grid,
                                    std::span<const ForcingRealization> forcing, const IntegratorOptions& options) {
    validate(params, /*allow_no_peripherals=*/true);
    check_initial_conditions(params, init);
    require_resolves(grid, params.omega_max());
    if (options.substeps == 0) throw InvalidInput("substeps must be >= 1");
    if (forcing.size() > params.dimension()) throw InvalidInput("more forcing series than oscillators");
    for (const auto& f : forcing) {
        if (!same_grid(f.grid, grid) || f.values.size() != grid.samples()) {
            throw InvalidInput("forcing grid does not match the integration grid");
        }
    }

    const auto& k = kernels::active();
    const std::size_t dim = params.dimension();
    const std::size_t samples = grid.samples();
    const std::size_t recorded = options.record_full_state ? dim : 1;
    const double h = grid.dt / static_cast<double>(options.substeps);
    const ArrowOperator op(params);

    TrajectorySet out;
    out.grid = grid;
    out.coordinates.assign(recorded, std::vector<double>(samples));
    out.velocities.assign(recorded, std::vector<double>(samples));
    out.energy.resize(samples);
    out.modified_energy.resize(samples);

    std::vector<double> q = init.q0;
    std::vector<double> v = init.v0;
    std::vector<double> cq(dim);
    std::vector<double> accel(dim);

    auto forcing_at = [&](std::size_t node, std::size_t sub) {
        // Forcing value at time grid.time(node) + sub*h, linear between nodes.
        for (std::size_t i = 0; i < forcing.size(); ++i) {
            const auto& values = forcing[i].values;
            double f = values[node];
            if (sub > 0 && node + 1 < values.size()) {
                const double frac = static_cast<double>(sub) / static_cast<double>(options.substeps);
                f += frac * (values[node + 1] - f);
            }
            accel[i] += f;
        }
    };
    auto compute_accel = [&](std::size_t node, std::size_t sub) {
        op.apply(k, q, cq);
        for (std::size_t i = 0; i < dim; ++i) accel[i] = -cq[i];
        forcing_at(node, sub);
    };
    auto record = [&](std::size_t node) {
        for (std::size_t i = 0; i < recorded; ++i) {
            out.coordinates[i][node] = q[i];
            out.velocities[i][node] = v[i];
        }
        // cq holds C q for the current q on entry.
        const double kinetic = 0.5 * k.dot(v.data(), v.data(), dim);
        const double potential = 0.5 * k.dot(q.data(), cq.data(), dim);
        const double correction = h * h / 8.0 * k.dot(cq.data(), cq.data(), dim);
        out.energy[node] = kinetic + potential;
        out.modified_energy[node] = kinetic + potential - correction;
    };

    compute_accel(0, 0);
    record(0);
    for (std::size_t node = 0; node + 1 < samples; ++node) {
        for (std::size_t sub = 0; sub < options.substeps; ++sub) {
            k.axpy(0.5 * h, accel.data(), v.data(), dim);
            k.axpy(h, v.data(), q.data(), dim);
            const bool last = sub + 1 == options.substeps;
            compute_accel(last ? node + 1 : node, last ? 0 : sub + 1);
            k.axpy(0.5 * h, accel.data(), v.data(), dim);
        }
        record(node + 1);
    }
    return out;
}

Trajectory greens_function_response(double lambda0, const ForcingRealization& forcing) {
    if (!(lambda0 > 0.0)) throw InvalidInput("lambda0 must be positive");
    const std::size_t n = forcing.values.size();
    Trajectory out{forcing.grid, std::vector<double>(n, 0.0), TrajectoryMethod::greens};
    if (n < 2) return out;

    // sin(w(t_m - t_k)) = sin(w t_m) cos(w t_k) - cos(w t_m) sin(w t_k), times
    // measured from the grid start. Running sums carry the trapezoid weights
    // (1/2 at k = 0); the endpoint k = m has a zero kernel and is skipped.
    const double w = std::sqrt(lambda0);
    const double dt = forcing.grid.dt;
    double cos_sum = 0.5 * forcing.values[0];
    double sin_sum = 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        const double t = static_cast<double>(m) * dt;
        const double c = std::cos(w * t);
        const double s = std::sin(w * t);
        out.values[m] = dt * (s * cos_sum - c * sin_sum) / w;
        cos_sum += c * forcing.values[m];
        sin_sum += s * forcing.values[m];
    }
    return out;
}

double greens_response_at(double lambda0, std::span<const double> forcing, double dt, std::size_t node) {
    if (!(lambda0 > 0.0)) throw InvalidInput("lambda0 must be positive");
    if (node >= forcing.size()) throw InvalidInput("node outside the forcing series");
    if (node == 0) return 0.0;
    const double w = std::sqrt(lambda0);
    std::vector<double> kernel(node);
    for (std::size_t k = 0; k < node; ++k) kernel[k] = std::sin(w * static_cast<double>(node - k) * dt);
    kernel[0] *= 0.5;
    return dt / w * kernels::active().dot(kernel.data(), forcing.data(), node);
}

EnsembleMoments ensemble_moments(std::span<const Trajectory> trajectories) {
    if (trajectories.size() < 2) throw InvalidInput("ensemble variance needs at least two trajectories");
    const auto& grid = trajectories.front().grid;
    const std::size_t n = trajectories.front().values.size();
    for (const auto& traj : trajectories) {
        if (!same_grid(traj.grid, grid) || traj.values.size() != n) {
            throw InvalidInput("ensemble members must share one grid");
        }
    }
    const auto& k = kernels::active();
    EnsembleMoments out;
    out.mean.assign(n, 0.0);
    out.variance.assign(n, 0.0);
    const double count = static_cast<double>(trajectories.size());
    for (const auto& traj : trajectories) k.axpy(1.0, traj.values.data(), out.mean.data(), n);
    for (double& m : out.mean) m /= count;
    for (const auto& traj : trajectories) {
        k.accumulate_squared_deviation(traj.values.data(), out.mean.data(), out.variance.data(), n);
    }
    for (double& v : out.variance) v /= count - 1.0;
    return out;
}

}  // namespace calab
