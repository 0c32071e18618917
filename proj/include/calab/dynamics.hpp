#pragma once

// Central-oscillator trajectories three ways: the first-order closed form,
// full numerical integration of q'' = -C q + f, and the Green's-function
// response to a forcing on the central oscillator.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "calab/model.hpp"
#include "calab/noise.hpp"
#include "calab/time_grid.hpp"

namespace calab {

struct InitialConditions {
    std::vector<double> q0;  ///< N+1 coordinates, central first
    std::vector<double> v0;  ///< N+1 velocities

    /// Zero velocities, coordinates as given.
    static InitialConditions at_rest(std::vector<double> coordinates);
    /// Zero velocities, central coordinate `central`, every peripheral `peripheral`.
    static InitialConditions at_rest(std::size_t n, double central, double peripheral);
};

enum class TrajectoryMethod { closed_form, integrated, greens };
std::string_view to_string(TrajectoryMethod method);

/// Sampled q0(t) (or any scalar series on a grid).
struct Trajectory {
    TimeGrid grid;
    std::vector<double> values;
    TrajectoryMethod method = TrajectoryMethod::closed_form;
};

/// Full state of an integrated run. coordinates/velocities are indexed
/// [oscillator][sample]; when only the central oscillator is recorded they hold
/// a single series.
struct TrajectorySet {
    TimeGrid grid;
    std::vector<std::vector<double>> coordinates;
    std::vector<std::vector<double>> velocities;
    std::vector<double> energy;           ///< 1/2 v.v + 1/2 q.Cq
    std::vector<double> modified_energy;  ///< invariant of the Verlet map (see integrate_full_system)

    Trajectory central() const;
};

/// How the shifted frequencies in the closed form are evaluated.
enum class ShiftedFrequency {
    linearized,         ///< Omega + N xi^2/(2 Omega) and omega_j + xi^2/(2 omega_j)
    perturbative_root,  ///< sqrt(Omega^2 + N xi^2) and sqrt(omega_j^2 + xi^2)
};

struct ClosedFormOptions {
    ShiftedFrequency frequency = ShiftedFrequency::linearized;
    bool allow_regime_violation = false;
    RegimeThresholds thresholds{};
};

/// q0(t) = q0(0) cos(W t) + xi^2 sum_j q_j(0)/(omega_j^2 - Omega^2) (cos(W t) - cos(w_j t))
/// with W, w_j the shifted frequencies. Requires zero initial velocities and a
/// valid regime (RegimeViolation otherwise, unless allowed).
Trajectory closed_form_response(const SystemParams& params, const InitialConditions& init, const TimeGrid& grid,
                                const ClosedFormOptions& options = {});

struct IntegratorOptions {
    /// Velocity-Verlet steps per grid interval.
    std::size_t substeps = 1;
    /// When false only the central coordinate and velocity are stored.
    bool record_full_state = true;
};

/// Kick-drift-kick velocity Verlet for q'' = -C q + f(t). Forcing entry i drives
/// oscillator i (so a single entry forces only the central oscillator) and is
/// sampled at the grid nodes; each half kick uses the forcing at its own time,
/// linearly interpolated between nodes when substeps > 1. The returned
/// modified_energy, 1/2 v.v + 1/2 q.Cq - h^2/8 |Cq|^2 with h the substep, is
/// conserved exactly (to rounding) by the unforced map. N = 0 is permitted.
TrajectorySet integrate_full_system(const SystemParams& params, const InitialConditions& init, const TimeGrid& grid,
                                    std::span<const ForcingRealization> forcing = {},
                                    const IntegratorOptions& options = {});

/// n(t_m) = int_0^{t_m} sin(sqrt(l0)(t_m - s))/sqrt(l0) f(s) ds by the
/// trapezoid rule on the forcing grid, for every node. O(n) via the
/// sin/cos factorization of the kernel.
Trajectory greens_function_response(double lambda0, const ForcingRealization& forcing);

/// Same trapezoid sum evaluated at a single node as a direct dot product.
double greens_response_at(double lambda0, std::span<const double> forcing, double dt, std::size_t node);

struct EnsembleMoments {
    std::vector<double> mean;
    std::vector<double> variance;  ///< unbiased
};

/// Pointwise sample mean and unbiased variance; needs >= 2 trajectories on one grid.
EnsembleMoments ensemble_moments(std::span<const Trajectory> trajectories);

}  // namespace calab
