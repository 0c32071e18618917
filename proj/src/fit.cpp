#include "calab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "calab/error.hpp"
#include "calab/rng.hpp"

namespace calab {
namespace {

struct Line {
    double slope;
    double intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidInput("log-log fit needs at least two distinct x values");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace

LogLogFit fit_log_log_slope(std::span<const PowerLawPoint> points, std::uint64_t seed, std::size_t resamples,
                            double level) {
    if (points.size() < 3) throw InvalidInput("log-log fit needs at least 3 points");
    std::vector<double> lx;
    std::vector<double> ly;
    std::vector<double> log_se;
    bool have_errors = false;
    for (const auto& p : points) {
        if (!(p.x > 0.0) || !(p.y > 0.0)) throw InvalidInput("log-log fit needs positive coordinates");
        lx.push_back(std::log(p.x));
        ly.push_back(std::log(p.y));
        log_se.push_back(p.std_error / p.y);
        have_errors = have_errors || p.std_error > 0.0;
    }

    const Line line = least_squares(lx, ly);
    LogLogFit fit;
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    for (std::size_t i = 0; i < lx.size(); ++i) fit.residuals.push_back(ly[i] - (line.intercept + line.slope * lx[i]));

    auto rng = make_stream(seed, {stream_domain::bootstrap});
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, lx.size() - 1);
    std::vector<double> slopes;
    slopes.reserve(resamples);
    std::vector<double> resampled(ly.size());
    for (std::size_t b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < ly.size(); ++i) {
            const double fitted = line.intercept + line.slope * lx[i];
            resampled[i] = have_errors ? ly[i] + log_se[i] * normal(rng) : fitted + fit.residuals[pick(rng)];
        }
        slopes.push_back(least_squares(lx, resampled).slope);
    }
    const double tail = 0.5 * (1.0 - level);
    fit.ci_low = std::min(percentile(slopes, tail), fit.slope);
    fit.ci_high = std::max(percentile(slopes, 1.0 - tail), fit.slope);
    return fit;
}

}  // namespace calab
