#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "calab/error.hpp"
#include "calab/experiments.hpp"
#include "calab/kernels.hpp"
#include "calab/parallel.hpp"
#include "calab/rng.hpp"

#ifndef CALAB_VERSION
#define CALAB_VERSION "0.0.0"
#endif

namespace calab::experiments {
namespace {

using nlohmann::json;

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : columns_(header.size()) {
        for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
        text_ += "\n";
    }

    void row(std::initializer_list<std::string> cells) { row(std::vector<std::string>(cells)); }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) throw std::logic_error("csv row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
        text_ += "\n";
    }

    std::string str() const { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

std::string num(double x) { return format_double(x); }
std::string num(std::size_t x) { return std::to_string(x); }

void require_regime(const ExperimentConfig& c) {
    if (c.allow_regime_violation) return;
    const RegimeReport report = validate_regime(c.system);
    if (!report.ok()) {
        throw RegimeViolation("system outside the perturbative regime (rerun with --allow-regime-violation): "
                              "xi^2/min(w^2)=" + num(report.weak_coupling_ratio) +
                              ", N xi^2/Omega^2=" + num(report.extensive_ratio) +
                              ", gap/xi^2=" + num(report.gap_ratio));
    }
}

InitialConditions initial_conditions(const ExperimentConfig& c) {
    if (!c.coordinates.empty()) return InitialConditions::at_rest(c.coordinates);
    return InitialConditions::at_rest(c.system.n(), c.q0_init, c.peripheral_init);
}

json regime_json(const RegimeReport& r) {
    return {{"ok", r.ok()},
            {"weak_coupling_ok", r.weak_coupling_ok},
            {"extensive_ok", r.extensive_ok},
            {"off_resonance_ok", r.off_resonance_ok},
            {"weak_coupling_ratio", r.weak_coupling_ratio},
            {"extensive_ratio", r.extensive_ratio},
            {"off_resonance_gap", r.off_resonance_gap},
            {"gap_ratio", std::isfinite(r.gap_ratio) ? json(r.gap_ratio) : json(nullptr)}};
}

void run_regime_check(const ExperimentConfig& c, RunResult& out, json& results) {
    const RegimeThresholds limits;
    const RegimeReport r = validate_regime(c.system);
    results["regime"] = regime_json(r);
    results["omegas"] = c.system.omegas;
    char line[256];
    std::string text;
    std::snprintf(line, sizeof line, "weak coupling    xi^2/min(w^2)         = %-12.6g limit %-8g %s\n",
                  r.weak_coupling_ratio, limits.weak_coupling, r.weak_coupling_ok ? "ok" : "VIOLATED");
    text += line;
    std::snprintf(line, sizeof line, "collective       N xi^2/Omega^2        = %-12.6g limit %-8g %s\n",
                  r.extensive_ratio, limits.extensive, r.extensive_ok ? "ok" : "VIOLATED");
    text += line;
    std::snprintf(line, sizeof line, "off resonance    min|w^2-Omega^2|/xi^2 = %-12.6g limit %-8g %s\n",
                  r.gap_ratio, limits.gap_factor, r.off_resonance_ok ? "ok" : "VIOLATED");
    text += line;
    text += std::string("regime: ") + (r.ok() ? "valid" : "violated") + "\n";
    out.report = text;
}

struct Simulation {
    std::optional<Trajectory> closed;
    std::optional<TrajectorySet> integrated;
};

Simulation simulate(const ExperimentConfig& c, TrajectorySource source) {
    const InitialConditions init = initial_conditions(c);
    Simulation sim;
    if (source != TrajectorySource::integrated) {
        ClosedFormOptions options;
        options.frequency = c.simulate.frequency;
        options.allow_regime_violation = c.allow_regime_violation;
        sim.closed = closed_form_response(c.system, init, *c.grid, options);
    }
    if (source != TrajectorySource::closed_form) {
        IntegratorOptions options;
        options.substeps = c.simulate.substeps;
        options.record_full_state = c.simulate.record_peripherals;
        sim.integrated = integrate_full_system(c.system, init, *c.grid, {}, options);
    }
    return sim;
}

void run_simulate(const ExperimentConfig& c, RunResult& out, json& results) {
    require_regime(c);
    const Simulation sim = simulate(c, c.simulate.method);
    const TimeGrid& grid = *c.grid;
    const std::size_t samples = grid.samples();

    std::vector<std::string> header{"t"};
    if (sim.closed) header.emplace_back("q0_closed");
    if (sim.integrated) {
        header.emplace_back("q0_integrated");
        header.emplace_back("energy");
        header.emplace_back("modified_energy");
        if (c.simulate.record_peripherals) {
            for (std::size_t j = 1; j <= c.system.n(); ++j) header.push_back("q" + std::to_string(j));
        }
    }
    Csv csv(header);
    double max_diff = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<std::string> row{num(grid.time(k))};
        if (sim.closed) row.push_back(num(sim.closed->values[k]));
        if (sim.integrated) {
            const auto& set = *sim.integrated;
            row.push_back(num(set.coordinates[0][k]));
            row.push_back(num(set.energy[k]));
            row.push_back(num(set.modified_energy[k]));
            if (c.simulate.record_peripherals) {
                for (std::size_t j = 1; j < set.coordinates.size(); ++j) row.push_back(num(set.coordinates[j][k]));
            }
            if (sim.closed) max_diff = std::max(max_diff, std::abs(sim.closed->values[k] - set.coordinates[0][k]));
        }
        csv.row(row);
    }
    out.files.push_back({"trajectory.csv", csv.str()});

    results["samples"] = samples;
    results["omegas"] = c.system.omegas;
    if (sim.closed && sim.integrated) results["max_abs_difference"] = max_diff;
    if (sim.integrated) {
        const auto& e = sim.integrated->modified_energy;
        double drift = 0.0;
        for (double x : e) drift = std::max(drift, std::abs(x - e.front()));
        results["modified_energy_relative_drift"] = e.front() != 0.0 ? drift / std::abs(e.front()) : drift;
    }
    out.report = "simulate: " + std::to_string(samples) + " samples written to trajectory.csv\n";
}

void run_demodulate(const ExperimentConfig& c, RunResult& out, json& results) {
    require_regime(c);
    const TrajectorySource source =
        c.simulate.method == TrajectorySource::closed_form ? TrajectorySource::closed_form : TrajectorySource::integrated;
    const Simulation sim = simulate(c, source);
    const Trajectory q0 = sim.closed ? *sim.closed : sim.integrated->central();

    FilterSpec spec = c.filter.cutoff ? design_low_pass(*c.filter.cutoff, c.grid->dt, c.filter.decimation.value_or(1))
                                      : default_filter_for(c.system, c.grid->dt);
    if (c.filter.decimation) spec.decimation = *c.filter.decimation;
    check_filter_for_system(spec, c.system);

    const SlowSignal slow = demodulate(q0, c.system.big_omega, spec);
    const FrequencyEstimate est = estimate_slow_frequency(slow);
    const double predicted = predicted_slow_frequency(c.system);

    Csv csv({"t", "s"});
    for (std::size_t k = 0; k < slow.values.size(); ++k) csv.row({num(slow.grid.time(k)), num(slow.values[k])});
    out.files.push_back({"slow_signal.csv", csv.str()});

    results["source"] = source == TrajectorySource::closed_form ? "closed_form" : "integrated";
    results["filter"] = {{"cutoff", spec.cutoff},
                         {"taps", spec.taps},
                         {"window", std::string(to_string(spec.window))},
                         {"decimation", spec.decimation}};
    results["frequency"] = est.frequency;
    results["frequency_std_error"] = est.std_error;
    results["amplitude"] = est.amplitude;
    results["phase"] = est.phase;
    results["offset"] = est.offset;
    results["predicted_frequency"] = predicted;
    results["relative_error"] = std::abs(est.frequency - predicted) / predicted;
    out.report = "demodulate: slow frequency " + num(est.frequency) + " (predicted " + num(predicted) + ")\n";
}

Scenario scenario_for(const ExperimentConfig& c, bool frequency, NoiseEstimator estimator, bool refinement,
                      double guard, double dt) {
    if (frequency) return FrequencyScenario{*c.distribution, c.q0_init, c.peripheral_init};
    NoiseScenario s;
    s.noise = *c.noise;
    s.q0_init = c.q0_init;
    s.estimator = estimator;
    s.bound.large_t_refinement = refinement;
    s.bound.guard = guard;
    s.dt = dt;
    return s;
}

void require_noise_kind(const ExperimentConfig& c, bool white) {
    if ((c.noise->kind == NoiseKind::white) != white) {
        throw InvalidInput("config: sensitivity.mode " + std::string(to_string(c.sensitivity.mode)) +
                           " does not match noise.kind " + std::string(to_string(c.noise->kind)));
    }
}

void run_sensitivity(const ExperimentConfig& c, RunResult& out, json& results) {
    require_regime(c);
    const auto& o = c.sensitivity;
    NoiseSpec noise = c.noise.value_or(NoiseSpec{});
    noise.seed = c.seed;
    SensitivityEstimate est;
    switch (o.mode) {
        case EstimateMode::freq_mc: {
            FrequencyMcOptions options;
            options.peripheral_init = c.peripheral_init;
            options.allow_regime_violation = c.allow_regime_violation;
            est = sensitivity_frequency_mc(c.system, *c.distribution, c.budget, c.trials, c.seed, c.q0_init, options);
            break;
        }
        case EstimateMode::freq_closed: {
            double r_mean = o.r_mean.value_or(0.0);
            double r_std = o.r_std.value_or(0.0);
            if (!o.r_mean) {
                const std::vector<double> q(c.system.n(), c.peripheral_init);
                std::vector<double> r(c.trials);
                parallel_for(c.trials, [&](std::size_t i) {
                    r[i] = r_statistic(sample_frequencies(*c.distribution, c.system.big_omega, c.system.n(), c.seed, i),
                                       q, c.system.big_omega);
                });
                double mean = 0.0;
                for (double x : r) mean += x;
                mean /= static_cast<double>(r.size());
                double var = 0.0;
                for (double x : r) var += (x - mean) * (x - mean);
                r_mean = mean;
                r_std = r.size() > 1 ? std::sqrt(var / static_cast<double>(r.size() - 1)) : 0.0;
            }
            results["r_mean"] = r_mean;
            results["r_std"] = r_std;
            est = sensitivity_frequency_closed(c.system, r_mean, r_std, c.budget, c.q0_init, {o.long_time, o.guard});
            break;
        }
        case EstimateMode::white_bound:
            require_noise_kind(c, true);
            est = sensitivity_white_noise(c.system, noise, c.budget, c.q0_init, {o.large_t_refinement, o.guard});
            break;
        case EstimateMode::colored_bound:
            require_noise_kind(c, false);
            est = sensitivity_colored_noise(c.system, noise, c.budget, c.q0_init, {o.large_t_refinement, o.guard});
            break;
        case EstimateMode::white_mc:
        case EstimateMode::colored_mc:
            require_noise_kind(c, o.mode == EstimateMode::white_mc);
            est = sensitivity_noise_mc(c.system, noise, c.budget, c.q0_init, {c.trials, o.dt, o.guard});
            break;
        case EstimateMode::baseline: {
            const Scenario scenario = scenario_for(c, o.baseline_frequency_scenario, o.baseline_estimator,
                                                   o.large_t_refinement, o.guard, o.dt);
            est = baseline_separate_averaging(c.system, scenario, c.budget, o.pairs.value_or(c.system.n()), c.trials,
                                              c.seed, c.allow_regime_violation);
            break;
        }
    }

    Csv csv({"mode", "n", "t", "M", "value", "std_error", "seed", "samples", "sweet_spot"});
    csv.row({std::string(to_string(est.mode)), num(est.context.n), num(est.context.t), num(est.context.M),
             num(est.value), num(est.std_error), std::to_string(est.context.seed), num(est.context.samples),
             est.sweet_spot ? "1" : "0"});
    out.files.push_back({"sensitivity.csv", csv.str()});

    results["mode"] = std::string(to_string(est.mode));
    results["n"] = est.context.n;
    results["t"] = est.context.t;
    results["M"] = est.context.M;
    results["value"] = est.value;
    results["std_error"] = est.std_error;
    results["samples"] = est.context.samples;
    results["sweet_spot"] = est.sweet_spot;
    out.report = "sensitivity (" + std::string(to_string(est.mode)) + "): " + num(est.value) + " +- " +
                 num(est.std_error) + "\n";
}

void run_scaling(const ExperimentConfig& c, RunResult& out, json& results) {
    const auto& o = c.scaling;
    ScalingConfig sc;
    sc.scenario = scenario_for(c, o.frequency_scenario, o.estimator, o.large_t_refinement, o.guard, o.dt);
    sc.protocol = o.protocol;
    sc.base = c.system;
    sc.n_values = o.n_values;
    sc.budget = c.budget;
    if (!c.has_budget) sc.budget.t = 1.0;
    sc.hold_phase = o.hold_phase;
    sc.trials = c.trials;
    sc.seed = c.seed;
    sc.allow_regime_violation = c.allow_regime_violation;
    const ScalingResult r = scaling_study(sc);

    Csv csv({"n", "t", "value", "std_error"});
    for (std::size_t i = 0; i < r.n_values.size(); ++i) {
        csv.row({num(r.n_values[i]), num(r.times[i]), num(r.sensitivities[i]), num(r.std_errors[i])});
    }
    out.files.push_back({"scaling.csv", csv.str()});

    results["protocol"] = std::string(to_string(o.protocol));
    results["scenario"] = o.frequency_scenario ? "frequency" : "noise";
    results["n_values"] = r.n_values;
    results["sensitivities"] = r.sensitivities;
    results["std_errors"] = r.std_errors;
    results["slope"] = r.slope;
    results["slope_ci"] = {r.slope_ci[0], r.slope_ci[1]};
    results["intercept"] = r.intercept;
    out.report = "scaling (" + std::string(to_string(o.protocol)) + "): slope " + num(r.slope) + " [" +
                 num(r.slope_ci[0]) + ", " + num(r.slope_ci[1]) + "]\n";
}

void run_noise_stats(const ExperimentConfig& c, RunResult& out, json& results) {
    require_regime(c);
    if (c.trials < 2) throw InvalidInput("noise-stats needs at least 2 trials");
    NoiseSpec noise = *c.noise;
    noise.seed = c.seed;
    const double lambda0 =
        c.system.big_omega * c.system.big_omega + static_cast<double>(c.system.n()) * c.system.xi_sq;
    const double t_max = *std::max_element(c.noise_stats.times.begin(), c.noise_stats.times.end());
    const TimeGrid grid = noise_mc_grid(lambda0, t_max, c.noise_stats.dt);
    std::vector<std::size_t> nodes;
    for (double t : c.noise_stats.times) nodes.push_back(static_cast<std::size_t>(std::llround(t / grid.dt)));

    const std::size_t k_count = nodes.size();
    std::vector<double> samples(c.trials * k_count);
    parallel_for(c.trials, [&](std::size_t i) {
        const Trajectory response = greens_function_response(lambda0, sample_noise(noise, grid, i));
        for (std::size_t k = 0; k < k_count; ++k) samples[i * k_count + k] = response.values[nodes[k]];
    });

    const bool white = noise.kind == NoiseKind::white;
    Csv csv(white ? std::vector<std::string>{"t", "mean", "variance", "exact", "large_t", "upper_bound"}
                  : std::vector<std::string>{"t", "mean", "variance", "bound"});
    double worst_ratio = 0.0;
    json rows = json::array();
    for (std::size_t k = 0; k < k_count; ++k) {
        const double t = grid.time(nodes[k]);
        double mean = 0.0;
        for (std::size_t i = 0; i < c.trials; ++i) mean += samples[i * k_count + k];
        mean /= static_cast<double>(c.trials);
        double var = 0.0;
        for (std::size_t i = 0; i < c.trials; ++i) {
            const double d = samples[i * k_count + k] - mean;
            var += d * d;
        }
        var /= static_cast<double>(c.trials - 1);
        if (white) {
            const WhiteNoiseVariance p = white_noise_variance_prediction(noise.f0, noise.unit_time, lambda0, t);
            csv.row({num(t), num(mean), num(var), num(p.exact), num(p.large_t), num(p.upper_bound)});
            if (p.exact > 0.0) worst_ratio = std::max(worst_ratio, var / p.exact);
        } else {
            const double bound = colored_noise_variance_bound(noise.f0, bound_correlation_time(noise), lambda0, t);
            csv.row({num(t), num(mean), num(var), num(bound)});
            if (bound > 0.0) worst_ratio = std::max(worst_ratio, var / bound);
        }
    }
    out.files.push_back({"noise_stats.csv", csv.str()});
    results["lambda0"] = lambda0;
    results["dt"] = grid.dt;
    results["kind"] = std::string(to_string(noise.kind));
    results[white ? "max_variance_over_exact" : "max_variance_over_bound"] = worst_ratio;
    out.report = "noise-stats: " + std::to_string(k_count) + " times, " + std::to_string(c.trials) + " trials\n";
}

}  // namespace

std::string_view tool_version() { return CALAB_VERSION; }

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

RunResult run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    json results = json::object();
    switch (config.experiment) {
        case Experiment::regime_check: run_regime_check(config, out, results); break;
        case Experiment::simulate: run_simulate(config, out, results); break;
        case Experiment::demodulate: run_demodulate(config, out, results); break;
        case Experiment::sensitivity: run_sensitivity(config, out, results); break;
        case Experiment::scaling: run_scaling(config, out, results); break;
        case Experiment::noise_stats: run_noise_stats(config, out, results); break;
    }
    out.result_json = results.dump(2) + "\n";
    out.files.push_back({"result.json", out.result_json});
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string write_outputs(const ExperimentConfig& config, const RunResult& result) {
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);

    json files = json::array();
    for (const auto& file : result.files) {
        std::ofstream os(dir / file.name, std::ios::binary | std::ios::trunc);
        os << file.content;
        if (!os) throw std::runtime_error("cannot write " + (dir / file.name).string());
        files.push_back({{"name", file.name}, {"bytes", file.content.size()}, {"sha256", sha256_hex(file.content)}});
    }

    json manifest;
    manifest["tool"] = "calab";
    manifest["version"] = std::string(tool_version());
    manifest["experiment"] = std::string(to_string(config.experiment));
    manifest["config"] = json::parse(config.echo);
    manifest["seed"] = config.seed;
    manifest["rng"] = std::string(rng_algorithm_id);
    manifest["kernel_isa"] = std::string(kernels::isa_name(kernels::active().isa));
    manifest["threads"] = worker_count();
    manifest["wall_seconds"] = result.wall_seconds;
    manifest["results"] = json::parse(result.result_json);
    manifest["files"] = files;
    const std::string text = manifest.dump(2) + "\n";
    std::ofstream os(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    os << text;
    if (!os) throw std::runtime_error("cannot write manifest.json");
    return text;
}

}  // namespace calab::experiments
