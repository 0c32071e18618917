// calab <experiment> --config <path> [--seed S] [--trials K] [--out DIR] [--allow-regime-violation]
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical error.
// Errors go to stderr as a single JSON object.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "calab/error.hpp"
#include "calab/experiments.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& message) {
    nlohmann::json error = {{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
    std::cerr << error.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    namespace ex = calab::experiments;

    CLI::App app{"Coupled-oscillator coherent averaging experiments"};
    app.set_version_flag("--version", std::string(ex::tool_version()));
    std::string experiment;
    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::string out_dir;
    bool allow = false;
    app.add_option("experiment", experiment, "regime-check | simulate | demodulate | sensitivity | scaling | noise-stats")
        ->required();
    app.add_option("--config", config_path, "JSON config file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides config)");
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials (overrides config)");
    auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_flag("--allow-regime-violation", allow, "run outside the perturbative regime");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage", e.what());
    }

    try {
        ex::Overrides overrides;
        if (*seed_opt) overrides.seed = seed;
        if (*trials_opt) overrides.trials = trials;
        if (*out_opt) overrides.output_dir = out_dir;
        overrides.allow_regime_violation = allow;

        const auto config = ex::load_config(config_path, ex::experiment_from_string(experiment), overrides);
        const auto result = ex::run(config);
        ex::write_outputs(config, result);
        std::cout << result.report << result.result_json;
        return 0;
    } catch (const calab::InvalidInput& e) {
        return fail(2, "invalid_input", e.what());
    } catch (const calab::RegimeViolation& e) {
        return fail(3, "regime_violation", e.what());
    } catch (const calab::DegenerateSpectrum& e) {
        return fail(3, "degenerate_spectrum", e.what());
    } catch (const calab::ConvergenceFailure& e) {
        return fail(3, "convergence_failure", e.what());
    } catch (const calab::IllConditioned& e) {
        return fail(3, "ill_conditioned", e.what());
    } catch (const calab::NumericalError& e) {
        return fail(3, "numerical_error", e.what());
    } catch (const std::exception& e) {
        return fail(1, "internal_error", e.what());
    }
}
