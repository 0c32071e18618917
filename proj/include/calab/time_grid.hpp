#pragma once

#include <cstddef>
#include <vector>

namespace calab {

/// Uniform sampling of [t0, t1] with step dt; sample k sits at t0 + k*dt.
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;

    std::size_t samples() const;
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double span() const { return t1 - t0; }
    std::vector<double> times() const;

    /// Grid with `count` samples starting at t0.
    static TimeGrid with_samples(double t0, double dt, std::size_t count);
};

/// Throws InvalidInput unless dt > 0 and t1 >= t0.
void validate(const TimeGrid& grid);

/// Throws InvalidInput unless dt <= (2*pi/omega_max)/20.
void require_resolves(const TimeGrid& grid, double omega_max);

/// Default step (2*pi/omega_max)/50.
double default_step(double omega_max);

bool same_grid(const TimeGrid& a, const TimeGrid& b);

}  // namespace calab
