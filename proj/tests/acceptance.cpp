// Acceptance checks AC1-AC10. One PASS/FAIL line per criterion; exit status 1
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "calab/demodulation.hpp"
#include "calab/dynamics.hpp"
#include "calab/experiments.hpp"
#include "calab/model.hpp"
#include "calab/noise.hpp"
#include "calab/sensitivity.hpp"
#include "oracles.hpp"

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void report(int id, bool pass, const std::string& detail, double seconds) {
    std::printf("AC%d %s: %s [%.1f s]\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

template <class F>
void criterion(int id, F body) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(id, pass, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

const calab::FrequencyDistribution ensemble_draw{2.0, 0.05, 0.5};

calab::SystemParams drawn_system(std::size_t n, double xi_sq) {
    return {1.0, calab::sample_frequencies(ensemble_draw, 1.0, n, 1, 0), xi_sq};
}

double max_eigenvalue_error(const calab::SystemParams& p) {
    const auto pt = calab::perturbative_eigendecomposition(p);
    const auto ex = calab::exact_eigendecomposition(calab::build_coupling_matrix(p));
    return (pt.lambdas - ex.lambdas).cwiseAbs().maxCoeff();
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
    double out = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, std::abs(a[k] - b[k]));
    return out;
}

// Time near t_guess where sin(sqrt(l0) t) = 1.
double time_for_unit_sine(const calab::SystemParams& p, double t_guess) {
    const double w = std::sqrt(p.big_omega * p.big_omega + static_cast<double>(p.n()) * p.xi_sq);
    return (pi / 2.0 + 2.0 * pi * std::round((w * t_guess - pi / 2.0) / (2.0 * pi))) / w;
}

std::vector<double> green_endpoint_samples(const calab::NoiseSpec& spec, double lambda0, double t, double dt,
                                           std::size_t trials) {
    const calab::TimeGrid grid{0.0, t, dt};
    const std::size_t node = grid.samples() - 1;
    std::vector<double> out(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto f = calab::sample_noise(spec, grid, i);
        out[i] = calab::greens_response_at(lambda0, f.values, dt, node);
    }
    return out;
}

calab::NoiseScenario white_mc_scenario() {
    calab::NoiseScenario s;
    s.noise.f0 = 0.1;
    s.q0_init = 1.0;
    s.estimator = calab::NoiseEstimator::monte_carlo;
    return s;
}

const std::vector<std::size_t> n_grid{8, 16, 32, 64, 128, 256};

}  // namespace

int main() {
    criterion(1, [](std::string& d) {
        const double e1 = max_eigenvalue_error(drawn_system(50, 1e-4));
        const double e2 = max_eigenvalue_error(drawn_system(50, 0.5e-4));
        const double ratio = e1 / e2;
        d = fmt("max |lambda_PT - lambda_exact| = %.3e -> %.3e on halving xi^2, ratio %.3f (want [3, 5])", e1, e2, ratio);
        return ratio >= 3.0 && ratio <= 5.0;
    });

    criterion(2, [](std::string& d) {
        const auto p = drawn_system(50, 1e-4);
        const calab::TimeGrid grid{0.0, 200.0, 2.0 * pi / (50.0 * p.omega_max())};
        const auto init = calab::InitialConditions::at_rest(50, 1.0, 1.0);
        calab::IntegratorOptions io;
        io.substeps = 100;
        io.record_full_state = false;
        const auto integrated = calab::integrate_full_system(p, init, grid, {}, io).coordinates[0];
        const auto linear = calab::closed_form_response(p, init, grid).values;
        calab::ClosedFormOptions root;
        root.frequency = calab::ShiftedFrequency::perturbative_root;
        const auto rooted = calab::closed_form_response(p, init, grid, root).values;
        const double err = max_abs_difference(linear, integrated);
        d = fmt("max |q0_closed - q0_integrated| = %.3e (want <= 1e-4); square-root frequency variant %.3e", err,
                max_abs_difference(rooted, integrated));
        return err <= 1e-4;
    });

    criterion(3, [](std::string& d) {
        bool pass = true;
        for (std::size_t n : {10u, 100u}) {
            const auto p = drawn_system(n, 1e-4);
            const double predicted = calab::predicted_slow_frequency(p);
            const calab::TimeGrid grid{0.0, 15.0 * 2.0 * pi / predicted, 0.05};
            calab::IntegratorOptions io;
            io.substeps = 20;
            io.record_full_state = false;
            const auto set = calab::integrate_full_system(p, calab::InitialConditions::at_rest(n, 1.0, 0.0), grid, {}, io);
            const calab::Trajectory q0{grid, set.coordinates[0], calab::TrajectoryMethod::integrated};
            const auto est = calab::estimate_slow_frequency(calab::demodulate(q0, 1.0, calab::default_filter_for(p, grid.dt)));
            const double rel = std::abs(est.frequency - predicted) / predicted;
            d += fmt("N=%zu nu=%.6e vs N xi^2/(2 Omega)=%.6e rel %.2e; ", n, est.frequency, predicted, rel);
            pass = pass && rel <= 0.01;
        }
        d += "want rel <= 1e-2";
        return pass;
    });

    criterion(4, [](std::string& d) {
        calab::NoiseSpec spec;
        spec.f0 = 1.0;
        spec.seed = 4;
        const auto x = green_endpoint_samples(spec, 1.0, 100.0, 0.05, 10000);
        const double var = oracle::sample_variance(x);
        const auto pred = calab::white_noise_variance_prediction(1.0, 1.0, 1.0, 100.0);
        const double rel_exact = std::abs(var / pred.exact - 1.0), rel_large = std::abs(var / 50.0 - 1.0);
        d = fmt("variance %.4f, exact %.4f (rel %.3f, want <= 0.05), f0^2 T t/(2 l0) = 50 (rel %.3f, want <= 0.06)",
                var, pred.exact, rel_exact, rel_large);
        return rel_exact <= 0.05 && rel_large <= 0.06;
    });

    criterion(5, [](std::string& d) {
        calab::ScalingConfig cfg;
        cfg.scenario = white_mc_scenario();
        cfg.base = {1.0, {2.0}, 1e-5};
        cfg.n_values = n_grid;
        cfg.budget = {1.0, 102.1};
        cfg.trials = 2000;
        cfg.seed = 5;
        double min_sine = 1.0;
        for (std::size_t n : n_grid) {
            min_sine = std::min(min_sine, std::abs(std::sin(std::sqrt(1.0 + static_cast<double>(n) * 1e-5) * 102.1)));
        }
        const auto r = calab::scaling_study(cfg);
        d = fmt("slope %.4f CI [%.4f, %.4f], min |sin| %.3f (want slope -1 +- 0.1, |sin| >= 0.5)", r.slope,
                r.slope_ci[0], r.slope_ci[1], min_sine);
        return std::abs(r.slope + 1.0) <= 0.1 && min_sine >= 0.5;
    });

    criterion(6, [](std::string& d) {
        calab::ScalingConfig cfg;
        cfg.scenario = white_mc_scenario();
        cfg.protocol = calab::Protocol::baseline;
        cfg.base = {1.0, {2.0}, 1e-5};
        cfg.n_values = n_grid;
        cfg.budget = {1.0, 102.1};
        cfg.trials = 1000;
        cfg.seed = 6;
        const auto r = calab::scaling_study(cfg);
        d = fmt("slope %.4f CI [%.4f, %.4f] (want -0.5 +- 0.1)", r.slope, r.slope_ci[0], r.slope_ci[1]);
        return std::abs(r.slope + 0.5) <= 0.1;
    });

    criterion(7, [](std::string& d) {
        // Frequency scenario: phase held at pi/4 while t grows fourfold, so xi^2 shrinks fourfold.
        const double phase = pi / 4.0;
        auto at = [&](double xi_sq) {
            const calab::SystemParams p{1.0, {2.0}, xi_sq};
            auto q = p;
            q.omegas.assign(100, 2.0);
            const double t = 2.0 * phase / (100.0 * xi_sq);
            return calab::sensitivity_frequency_mc(q, ensemble_draw, {1.0, t}, 10000, 7, 0.0);
        };
        const auto f1 = at(1e-4), f4 = at(0.25e-4);
        const double freq_ratio = f4.value / f1.value;

        const calab::SystemParams w{1.0, std::vector<double>(100, 2.0), 1e-5};
        const double t1 = time_for_unit_sine(w, 200.0);
        const double period = 2.0 * pi / std::sqrt(1.0 + 100.0 * 1e-5);
        const double t4 = t1 + period * std::round(3.0 * t1 / period);
        calab::NoiseSpec white;
        white.f0 = 0.1;
        white.seed = 7;
        calab::NoiseMcOptions mc;
        mc.trials = 4000;
        const auto n1 = calab::sensitivity_noise_mc(w, white, {1.0, t1}, 1.0, mc);
        const auto n4 = calab::sensitivity_noise_mc(w, white, {1.0, t4}, 1.0, mc);
        const double white_ratio = n4.value / n1.value;
        d = fmt("frequency ratio %.4f (want 0.25 +- 0.02); white ratio %.4f at t %.1f -> %.1f (want 0.5 +- 0.05)",
                freq_ratio, white_ratio, t1, t4);
        return std::abs(freq_ratio - 0.25) <= 0.02 && std::abs(white_ratio - 0.5) <= 0.05;
    });

    criterion(8, [](std::string& d) {
        const calab::SystemParams p{1.0, std::vector<double>(100, 2.0), 1e-4};
        const calab::MeasurementBudget b{1.0, 2.0 * (pi / 4.0) / (100.0 * 1e-4)};
        const auto mc = calab::sensitivity_frequency_mc(p, ensemble_draw, b, 10000, 8, 0.0);
        const auto m = oracle::truncated_gaussian_r_moments(2.0, 0.05, 0.5, 1.0, 100, 1.0);
        const auto closed = calab::sensitivity_frequency_closed(p, m.mean, m.std, b, 0.0);
        const double se = std::hypot(mc.std_error, closed.std_error);
        const double z = std::abs(mc.value - closed.value) / se;
        d = fmt("mc %.5e +- %.2e, closed %.5e, |diff|/se %.2f (want <= 3)", mc.value, se, closed.value, z);
        return z <= 3.0;
    });

    criterion(9, [](std::string& d) {
        calab::NoiseSpec spec;
        spec.kind = calab::NoiseKind::truncated_ou;
        spec.f0 = 0.5;
        spec.tc = 1.0;
        spec.seed = 9;
        const double lambda0 = 1.0 + 10.0 * 1e-5;
        const double support = calab::bound_correlation_time(spec);
        bool pass = true, short_branch = false, long_branch = false;
        double worst = 0.0;
        for (double t : {2.0, 5.0, 8.0, 10.0, 20.0, 50.0, 100.0}) {
            const double var = oracle::sample_variance(green_endpoint_samples(spec, lambda0, t, 0.05, 2000));
            const double bound = calab::colored_noise_variance_bound(spec.f0, support, lambda0, t);
            worst = std::max(worst, var / bound);
            pass = pass && var <= bound;
            (t <= support ? short_branch : long_branch) = true;
        }
        d = fmt("max variance/bound %.3f over t in {2,...,100}, correlation support %.1f (want <= 1 on both branches)",
                worst, support);
        return pass && short_branch && long_branch;
    });

    criterion(10, [](std::string& d) {
        namespace ex = calab::experiments;
        const std::vector<std::pair<ex::Experiment, const char*>> docs{
            {ex::Experiment::simulate, R"({"system": {"big_omega": 1.0, "xi_sq": 1e-4, "n": 20,
               "draw": {"mean": 2.0, "std": 0.05, "min_gap": 0.5}}, "grid": {"t0": 0.0, "t1": 50.0},
               "simulate": {"method": "both", "substeps": 4}, "seed": 10})"},
            {ex::Experiment::sensitivity, R"({"system": {"big_omega": 1.0, "xi_sq": 1e-4, "n": 50, "omega": 2.0},
               "distribution": {"mean": 2.0, "std": 0.05, "min_gap": 0.5}, "budget": {"M": 1, "t": 157.0},
               "initial": {"q0": 0.0}, "sensitivity": {"mode": "freq_mc"}, "trials": 500, "seed": 10})"},
            {ex::Experiment::scaling, R"({"system": {"big_omega": 1.0, "xi_sq": 1e-5, "n": 1, "omega": 2.0},
               "noise": {"kind": "white", "f0": 0.1}, "budget": {"M": 1, "t": 102.1},
               "scaling": {"protocol": "coherent", "scenario": "noise", "estimator": "monte_carlo",
               "n_values": [8, 16, 32]}, "trials": 300, "seed": 10})"},
        };
        std::size_t compared = 0;
        for (const auto& [experiment, doc] : docs) {
            const auto cfg = ex::parse_config(doc, experiment);
            const auto a = ex::run(cfg), b = ex::run(cfg);
            if (a.files.size() != b.files.size()) return false;
            for (std::size_t i = 0; i < a.files.size(); ++i) {
                if (a.files[i].content != b.files[i].content) {
                    d = "output " + a.files[i].name + " differs between runs";
                    return false;
                }
                ++compared;
            }
        }
        d = fmt("%zu output files bit-identical across repeated runs of simulate, sensitivity, scaling", compared);
        return true;
    });

    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
