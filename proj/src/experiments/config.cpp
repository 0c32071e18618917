#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "calab/error.hpp"
#include "calab/experiments.hpp"
#include "calab/rng.hpp"

namespace calab::experiments {
namespace {

using nlohmann::json;

// Typed view of one JSON object that remembers which keys were read, so
// anything left over is reported as unknown.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) fail(path_, "must be an object");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    std::optional<double> number(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_number()) fail(at(key), "must be a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) fail(at(key), "must be finite");
        return x;
    }

    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    double required_number(const std::string& key) {
        auto x = number(key);
        if (!x) fail(at(key), "is required");
        return *x;
    }

    std::optional<std::uint64_t> unsigned_integer(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0)) {
            fail(at(key), "must be a non-negative integer");
        }
        return v->get<std::uint64_t>();
    }

    std::optional<bool> boolean(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_boolean()) fail(at(key), "must be true or false");
        return v->get<bool>();
    }

    std::optional<std::string> string(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) fail(at(key), "must be a string");
        return v->get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_array()) fail(at(key), "must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : *v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) fail(at(key), "must be an array of finite numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::optional<std::vector<std::size_t>> counts(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_array()) fail(at(key), "must be an array of positive integers");
        std::vector<std::size_t> out;
        for (const auto& e : *v) {
            if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0) {
                fail(at(key), "must be an array of positive integers");
            }
            out.push_back(static_cast<std::size_t>(e.get<std::uint64_t>()));
        }
        return out;
    }

    std::optional<Section> child(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return Section(*v, at(key));
    }

    template <typename T>
    T choice(const std::string& key, T fallback, std::initializer_list<std::pair<std::string_view, T>> options) {
        const auto name = string(key);
        if (!name) return fallback;
        for (const auto& [label, value] : options) {
            if (*name == label) return value;
        }
        std::string allowed;
        for (const auto& option : options) allowed += (allowed.empty() ? "" : ", ") + std::string(option.first);
        fail(at(key), "must be one of: " + allowed);
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) fail(at(key), "is not a recognized key");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw InvalidInput("config: " + where + " " + what);
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void positive(double value, const std::string& where) {
    if (!(value > 0.0)) Section::fail(where, "must be positive");
}

FrequencyDistribution parse_distribution(Section& s) {
    FrequencyDistribution d;
    d.mean = s.required_number("mean");
    d.std = s.number("std", 0.0);
    d.min_gap = s.number("min_gap", 0.0);
    s.finish();
    return d;
}

void parse_system(Section& s, ExperimentConfig& c) {
    c.system.big_omega = s.required_number("big_omega");
    c.system.xi_sq = s.required_number("xi_sq");
    positive(c.system.big_omega, s.at("big_omega"));
    if (c.system.xi_sq < 0.0) Section::fail(s.at("xi_sq"), "must be non-negative");

    const auto omegas = s.numbers("omegas");
    const auto n = s.unsigned_integer("n");
    const auto omega = s.number("omega");
    auto draw = s.child("draw");
    const int mechanisms = (omegas ? 1 : 0) + (omega ? 1 : 0) + (draw ? 1 : 0);
    if (mechanisms != 1) {
        Section::fail(s.at("omegas"), "or exactly one of system.omega / system.draw (with system.n) is required");
    }
    if (omegas) {
        if (n && *n != omegas->size()) Section::fail(s.at("n"), "disagrees with the length of system.omegas");
        c.system.omegas = *omegas;
    } else {
        if (!n || *n == 0) Section::fail(s.at("n"), "must be a positive integer");
        if (omega) {
            c.system.omegas.assign(static_cast<std::size_t>(*n), *omega);
        } else {
            const FrequencyDistribution d = parse_distribution(*draw);
            validate(d, c.system.big_omega);
            c.system_draw = d;
        }
    }
    s.finish();
    if (c.system_draw) {
        // Drawn once per run from the master seed; the index is reserved so it
        // never coincides with a Monte Carlo trial stream.
        c.system.omegas = sample_frequencies(*c.system_draw, c.system.big_omega, static_cast<std::size_t>(*n), c.seed,
                                             std::numeric_limits<std::uint64_t>::max());
    }
    validate(c.system);
}

NoiseSpec parse_noise(Section& s) {
    NoiseSpec spec;
    spec.kind = s.choice<NoiseKind>("kind", NoiseKind::white,
                                    {{"white", NoiseKind::white},
                                     {"ou_colored", NoiseKind::ou_colored},
                                     {"truncated_ou", NoiseKind::truncated_ou}});
    spec.f0 = s.required_number("f0");
    spec.unit_time = s.number("unit_time", 1.0);
    spec.tc = s.number("tc", 0.0);
    spec.truncation_multiple = s.number("truncation_multiple", 5.0);
    s.finish();
    validate(spec);
    return spec;
}

NoiseEstimator parse_estimator(Section& s) {
    return s.choice<NoiseEstimator>("estimator", NoiseEstimator::monte_carlo,
                                    {{"monte_carlo", NoiseEstimator::monte_carlo}, {"bound", NoiseEstimator::bound}});
}

void require(bool present, const std::string& section, Experiment e) {
    if (!present) {
        throw InvalidInput("config: section '" + section + "' is required for experiment " +
                           std::string(to_string(e)));
    }
}

}  // namespace

std::string_view to_string(Experiment experiment) {
    switch (experiment) {
        case Experiment::regime_check: return "regime-check";
        case Experiment::simulate: return "simulate";
        case Experiment::demodulate: return "demodulate";
        case Experiment::sensitivity: return "sensitivity";
        case Experiment::scaling: return "scaling";
        case Experiment::noise_stats: return "noise-stats";
    }
    return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
    for (auto e : {Experiment::regime_check, Experiment::simulate, Experiment::demodulate, Experiment::sensitivity,
                   Experiment::scaling, Experiment::noise_stats}) {
        if (name == to_string(e)) return e;
    }
    throw InvalidInput("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view document, Experiment experiment, const Overrides& overrides) {
    json root;
    try {
        root = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config: malformed JSON: ") + e.what());
    }

    ExperimentConfig c;
    c.experiment = experiment;
    Section top(root, "");
    if (const auto name = top.string("experiment")) {
        if (experiment_from_string(*name) != experiment) {
            throw InvalidInput("config: experiment '" + *name + "' does not match the requested '" +
                               std::string(to_string(experiment)) + "'");
        }
    }
    c.seed = overrides.seed.value_or(top.unsigned_integer("seed").value_or(0));
    c.trials = static_cast<std::size_t>(overrides.trials.value_or(top.unsigned_integer("trials").value_or(1000)));
    if (c.trials == 0) Section::fail("trials", "must be positive");
    c.output_dir = overrides.output_dir.value_or(top.string("output_dir").value_or("calab-out"));
    c.allow_regime_violation = overrides.allow_regime_violation || top.boolean("allow_regime_violation").value_or(false);

    auto system = top.child("system");
    require(system.has_value(), "system", experiment);
    parse_system(*system, c);

    if (auto s = top.child("initial")) {
        c.q0_init = s->number("q0", 1.0);
        c.peripheral_init = s->number("peripheral", 1.0);
        if (auto coords = s->numbers("coordinates")) {
            if (coords->size() != c.system.dimension()) {
                Section::fail(s->at("coordinates"), "must hold N+1 values, central first");
            }
            c.coordinates = *coords;
            c.q0_init = coords->front();
        }
        s->finish();
    }

    if (auto s = top.child("grid")) {
        TimeGrid g;
        g.t0 = s->number("t0", 0.0);
        g.t1 = s->required_number("t1");
        g.dt = s->number("dt", default_step(c.system.omega_max()));
        s->finish();
        if (!(g.t1 > g.t0)) Section::fail("grid.t1", "must exceed grid.t0");
        positive(g.dt, "grid.dt");
        c.grid = g;
    }

    if (auto s = top.child("simulate")) {
        c.simulate.method = s->choice<TrajectorySource>("method", TrajectorySource::both,
                                                        {{"closed_form", TrajectorySource::closed_form},
                                                         {"integrated", TrajectorySource::integrated},
                                                         {"both", TrajectorySource::both}});
        const auto substeps = s->unsigned_integer("substeps").value_or(1);
        if (substeps == 0) Section::fail("simulate.substeps", "must be positive");
        c.simulate.substeps = static_cast<std::size_t>(substeps);
        c.simulate.frequency = s->choice<ShiftedFrequency>(
            "frequency", ShiftedFrequency::linearized,
            {{"linearized", ShiftedFrequency::linearized}, {"perturbative_root", ShiftedFrequency::perturbative_root}});
        c.simulate.record_peripherals = s->boolean("record_peripherals").value_or(false);
        s->finish();
    }

    if (auto s = top.child("filter")) {
        c.filter.cutoff = s->number("cutoff");
        if (c.filter.cutoff) positive(*c.filter.cutoff, "filter.cutoff");
        if (auto d = s->unsigned_integer("decimation")) {
            if (*d == 0) Section::fail("filter.decimation", "must be positive");
            c.filter.decimation = static_cast<std::size_t>(*d);
        }
        s->finish();
    }

    if (auto s = top.child("distribution")) {
        c.distribution = parse_distribution(*s);
        validate(*c.distribution, c.system.big_omega);
    }
    if (auto s = top.child("noise")) c.noise = parse_noise(*s);

    if (auto s = top.child("budget")) {
        c.budget.M = s->number("M", 1.0);
        c.budget.t = s->number("t", 0.0);
        s->finish();
        validate(c.budget);
        c.has_budget = true;
    }

    if (auto s = top.child("sensitivity")) {
        auto& o = c.sensitivity;
        o.mode = s->choice<EstimateMode>("mode", EstimateMode::white_bound,
                                         {{"freq_mc", EstimateMode::freq_mc},
                                          {"freq_closed", EstimateMode::freq_closed},
                                          {"white_bound", EstimateMode::white_bound},
                                          {"white_mc", EstimateMode::white_mc},
                                          {"colored_bound", EstimateMode::colored_bound},
                                          {"colored_mc", EstimateMode::colored_mc},
                                          {"baseline", EstimateMode::baseline}});
        o.long_time = s->boolean("long_time").value_or(false);
        o.large_t_refinement = s->boolean("large_t_refinement").value_or(false);
        o.guard = s->number("guard", 0.1);
        o.dt = s->number("dt", 0.0);
        o.r_mean = s->number("r_mean");
        o.r_std = s->number("r_std");
        if (o.r_mean.has_value() != o.r_std.has_value()) {
            Section::fail("sensitivity.r_mean", "and sensitivity.r_std must be given together");
        }
        o.baseline_frequency_scenario =
            s->choice<bool>("scenario", false, {{"frequency", true}, {"noise", false}});
        o.baseline_estimator = parse_estimator(*s);
        if (auto p = s->unsigned_integer("pairs")) {
            if (*p == 0) Section::fail("sensitivity.pairs", "must be positive");
            o.pairs = static_cast<std::size_t>(*p);
        }
        s->finish();
    }

    if (auto s = top.child("scaling")) {
        auto& o = c.scaling;
        o.protocol = s->choice<Protocol>("protocol", Protocol::coherent,
                                         {{"coherent", Protocol::coherent}, {"baseline", Protocol::baseline}});
        o.frequency_scenario = s->choice<bool>("scenario", false, {{"frequency", true}, {"noise", false}});
        o.estimator = parse_estimator(*s);
        o.n_values = s->counts("n_values").value_or(std::vector<std::size_t>{});
        o.hold_phase = s->number("hold_phase", 0.0);
        o.large_t_refinement = s->boolean("large_t_refinement").value_or(false);
        o.guard = s->number("guard", 0.1);
        o.dt = s->number("dt", 0.0);
        s->finish();
        if (o.n_values.size() < 3) Section::fail("scaling.n_values", "needs at least 3 entries");
    }

    if (auto s = top.child("noise_stats")) {
        c.noise_stats.times = s->numbers("times").value_or(std::vector<double>{});
        c.noise_stats.dt = s->number("dt", 0.0);
        s->finish();
        if (c.noise_stats.times.empty()) Section::fail("noise_stats.times", "needs at least one time");
        for (double t : c.noise_stats.times) positive(t, "noise_stats.times");
    }

    top.finish();

    switch (experiment) {
        case Experiment::regime_check: break;
        case Experiment::simulate:
        case Experiment::demodulate: require(c.grid.has_value(), "grid", experiment); break;
        case Experiment::sensitivity: {
            require(c.has_budget, "budget", experiment);
            require(top.has("sensitivity"), "sensitivity", experiment);
            const auto m = c.sensitivity.mode;
            const bool freq = m == EstimateMode::freq_mc || m == EstimateMode::freq_closed ||
                              (m == EstimateMode::baseline && c.sensitivity.baseline_frequency_scenario);
            if (freq && !(m == EstimateMode::freq_closed && c.sensitivity.r_mean)) {
                require(c.distribution.has_value(), "distribution", experiment);
            }
            if (!freq) require(c.noise.has_value(), "noise", experiment);
            break;
        }
        case Experiment::scaling:
            require(top.has("scaling"), "scaling", experiment);
            require(c.has_budget || (c.scaling.frequency_scenario && c.scaling.hold_phase > 0.0), "budget", experiment);
            if (c.scaling.frequency_scenario) {
                require(c.distribution.has_value(), "distribution", experiment);
            } else {
                require(c.noise.has_value(), "noise", experiment);
            }
            break;
        case Experiment::noise_stats:
            require(c.noise.has_value(), "noise", experiment);
            require(top.has("noise_stats"), "noise_stats", experiment);
            break;
    }

    json echo = root;
    echo["experiment"] = std::string(to_string(experiment));
    echo["seed"] = c.seed;
    echo["trials"] = c.trials;
    echo["output_dir"] = c.output_dir;
    echo["allow_regime_violation"] = c.allow_regime_violation;
    c.echo = echo.dump();
    return c;
}

ExperimentConfig load_config(const std::string& path, Experiment experiment, const Overrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), experiment, overrides);
}

}  // namespace calab::experiments
