#include "calab/time_grid.hpp"

#include <cmath>
#include <numbers>

#include "calab/error.hpp"

namespace calab {

std::size_t TimeGrid::samples() const {
    if (!(dt > 0.0) || t1 < t0) return 0;
    return static_cast<std::size_t>(std::llround((t1 - t0) / dt)) + 1;
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(samples());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = time(k);
    return out;
}

TimeGrid TimeGrid::with_samples(double t0, double dt, std::size_t count) {
    const double last = count == 0 ? t0 : t0 + static_cast<double>(count - 1) * dt;
    return TimeGrid{t0, last, dt};
}

void validate(const TimeGrid& grid) {
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt)) throw InvalidInput("time step dt must be positive");
    if (!std::isfinite(grid.t0) || !std::isfinite(grid.t1) || grid.t1 < grid.t0) {
        throw InvalidInput("time span must satisfy t0 <= t1");
    }
}

void require_resolves(const TimeGrid& grid, double omega_max) {
    validate(grid);
    const double limit = (2.0 * std::numbers::pi / omega_max) / 20.0;
    if (grid.dt > limit) {
        throw InvalidInput("grid too coarse: dt = " + std::to_string(grid.dt) +
                           " exceeds (2*pi/omega_max)/20 = " + std::to_string(limit));
    }
}

double default_step(double omega_max) { return (2.0 * std::numbers::pi / omega_max) / 50.0; }

bool same_grid(const TimeGrid& a, const TimeGrid& b) {
    return a.samples() == b.samples() && a.t0 == b.t0 && a.dt == b.dt;
}

}  // namespace calab
