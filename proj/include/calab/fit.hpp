#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace calab {

struct PowerLawPoint {
    double x = 0.0;
    double y = 0.0;
    double std_error = 0.0;  ///< of y; 0 when unknown
};

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;  ///< natural log of the prefactor
    std::vector<double> residuals;  ///< in log y
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Ordinary least squares of log y on log x. The slope interval is a bootstrap
/// percentile interval: parametric (log y_i jittered by std_error_i / y_i) when
/// any point carries a standard error, residual resampling otherwise.
/// Throws InvalidInput for fewer than 3 points or non-positive coordinates.
LogLogFit fit_log_log_slope(std::span<const PowerLawPoint> points, std::uint64_t seed = 0,
                            std::size_t resamples = 2000, double level = 0.95);

}  // namespace calab
