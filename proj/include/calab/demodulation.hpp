#pragma once

// Homodyne readout of the central oscillator: multiply by cos(Omega t),
// low-pass, and fit the slow oscillation that remains.

#include <cstddef>
#include <string_view>
#include <vector>

#include "calab/dynamics.hpp"
#include "calab/model.hpp"
#include "calab/time_grid.hpp"

namespace calab {

enum class Window { blackman };
std::string_view to_string(Window window);

struct FilterSpec {
    double cutoff = 0.0;  ///< angular frequency, rad/time
    std::size_t taps = 0;  ///< odd
    Window window = Window::blackman;
    std::size_t decimation = 1;  ///< keep every decimation-th filtered sample
};

/// Blackman windowed sinc whose transition band spans [cutoff/2, 3 cutoff/2],
/// i.e. taps = 5.5 * 2 pi / (cutoff dt), rounded up to odd.
FilterSpec design_low_pass(double cutoff, double dt, std::size_t decimation = 1);

/// cutoff = min(2 Omega, min_j |omega_j - Omega|) / 10 and a decimation that
/// keeps >= 20 samples per slow period and >= 4 per cutoff period.
FilterSpec default_filter_for(const SystemParams& params, double dt);

/// Throws InvalidInput unless the stopband edge 1.5 * cutoff lies below both
/// 2 Omega and min_j |omega_j - Omega|.
void check_filter_for_system(const FilterSpec& spec, const SystemParams& params);

/// Unit-DC-gain taps, symmetric about (taps-1)/2.
std::vector<double> fir_coefficients(const FilterSpec& spec, double dt);

/// Slow envelope. grid is decimated; the (taps-1)/2 samples at each end of the
/// input, where the filter window is not fully populated, are excluded.
struct SlowSignal {
    TimeGrid grid;
    std::vector<double> values;
    std::size_t transient_cut = 0;
};

/// Pointwise q0(t) cos(Omega t).
Trajectory mix_with_reference(const Trajectory& trajectory, double big_omega);

/// FIR convolution with group-delay compensation (output sample i is centred
/// on input sample i). Throws InvalidInput for even taps, cutoff at or above
/// Nyquist, or a signal shorter than the filter.
SlowSignal low_pass_filter(const Trajectory& signal, const FilterSpec& spec);

/// 2 * low_pass(q0(t) cos(Omega t)); the factor 2 restores the amplitude of the
/// difference-frequency component. Throws InvalidInput if cutoff >= 2 Omega.
SlowSignal demodulate(const Trajectory& trajectory, double big_omega, const FilterSpec& spec);

struct FrequencyEstimate {
    double frequency = 0.0;  ///< nu > 0 in A cos(nu t + phi) + B
    double std_error = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double offset = 0.0;
};

/// Nonlinear least squares fit of A cos(nu t + phi) + B, seeded from the peak
/// of a zero-padded FFT. Throws NumericalError for a signal with no oscillation
/// or one spanning less than half of the fitted period, ConvergenceFailure if
/// the fit does not converge.
FrequencyEstimate estimate_slow_frequency(const SlowSignal& signal);

/// N xi^2 / (2 Omega)
double predicted_slow_frequency(const SystemParams& params);

}  // namespace calab
