#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "calab/error.hpp"
#include "calab/sensitivity.hpp"
#include "oracles.hpp"

namespace {

using calab::FrequencyDistribution;
using calab::MeasurementBudget;
using calab::NoiseKind;
using calab::NoiseSpec;
using calab::SystemParams;

constexpr double pi = std::numbers::pi;

SystemParams uniform_system(std::size_t n, double xi, double omega = 2.0) {
    return {1.0, std::vector<double>(n, omega), xi};
}

// Time at which N xi^2 t / (2 Omega) equals phase.
double time_for_phase(const SystemParams& p, double phase) {
    return 2.0 * p.big_omega * phase / (static_cast<double>(p.n()) * p.xi_sq);
}

// Time close to t_guess where sqrt(l0) t = pi/2 mod 2 pi, so |sin| = 1.
double time_for_unit_sine(const SystemParams& p, double t_guess) {
    const double w = std::sqrt(p.big_omega * p.big_omega + static_cast<double>(p.n()) * p.xi_sq);
    const double k = std::round((w * t_guess - pi / 2.0) / (2.0 * pi));
    return (pi / 2.0 + 2.0 * pi * k) / w;
}

NoiseSpec white(double f0, std::uint64_t seed = 1) {
    NoiseSpec s;
    s.f0 = f0;
    s.seed = seed;
    return s;
}

const FrequencyDistribution narrow{2.0, 0.05, 0.5};

TEST(RStatistic, DirectEvaluation) {
    const std::vector<double> w{2.0, 3.0}, q{1.0, 1.0}, zero{0.0, 0.0};
    EXPECT_NEAR(calab::r_statistic(w, q, 1.0), 11.0 / 24.0, 1e-15);
    EXPECT_EQ(calab::r_statistic(w, zero, 1.0), 0.0);
    const std::vector<double> w1{2.0}, q1{3.0};
    EXPECT_NEAR(calab::r_statistic(w1, q1, 1.0), 1.0, 1e-15);
    const std::vector<double> res{1.0};
    EXPECT_THROW(calab::r_statistic(res, q1, 1.0), calab::DegenerateSpectrum);
}

TEST(SampleFrequencies, ZeroSpread_AllAtMean) {
    for (double w : calab::sample_frequencies({2.0, 0.0, 0.5}, 1.0, 10, 3, 0)) EXPECT_EQ(w, 2.0);
}

TEST(SampleFrequencies, MeanAndExclusionZone) {
    const FrequencyDistribution wide{1.2, 0.3, 0.1};
    const auto w = calab::sample_frequencies(wide, 1.0, 100000, 9, 0);
    double mean = 0.0;
    for (double x : w) {
        EXPECT_GT(std::abs(x - 1.0), 0.1);
        EXPECT_GT(x, 0.0);
        mean += x;
    }
    mean /= static_cast<double>(w.size());
    // Rejection shifts the mean of a truncated Gaussian; check the untruncated case separately.
    const auto v = calab::sample_frequencies(narrow, 1.0, 100000, 9, 0);
    EXPECT_NEAR(oracle::sample_mean(v), 2.0, 3.0 * 0.05 / std::sqrt(1e5));
    EXPECT_GT(mean, 1.2);
}

TEST(SampleFrequencies, DeterministicPerTrial) {
    EXPECT_EQ(calab::sample_frequencies(narrow, 1.0, 20, 5, 3), calab::sample_frequencies(narrow, 1.0, 20, 5, 3));
    EXPECT_NE(calab::sample_frequencies(narrow, 1.0, 20, 5, 3), calab::sample_frequencies(narrow, 1.0, 20, 5, 4));
}

TEST(FrequencyMc, DeterministicFrequencies_ZeroSensitivity) {
    const auto p = uniform_system(50, 1e-4);
    const auto est = calab::sensitivity_frequency_mc(p, {2.0, 0.0, 0.5}, {1.0, 100.0}, 200, 1, 1.0);
    EXPECT_EQ(est.value, 0.0);
    EXPECT_EQ(est.std_error, 0.0);
    EXPECT_EQ(est.mode, calab::EstimateMode::freq_mc);
}

TEST(FrequencyMc, SweetSpot_MatchesClosedForm) {
    const auto p = uniform_system(100, 1e-4);
    const MeasurementBudget b{1.0, time_for_phase(p, pi / 2.0)};
    const auto mc = calab::sensitivity_frequency_mc(p, narrow, b, 2000, 3, 0.0);
    const auto m = oracle::truncated_gaussian_r_moments(2.0, 0.05, 0.5, 1.0, 100, 1.0);
    const auto closed = calab::sensitivity_frequency_closed(p, m.mean, m.std, b, 0.0);
    EXPECT_TRUE(mc.sweet_spot);
    EXPECT_TRUE(closed.sweet_spot);
    EXPECT_NEAR(mc.value, closed.value, 3.0 * mc.std_error + 1e-18);
    EXPECT_LT(closed.value, 1e-15 * p.xi_sq);
}

TEST(FrequencyMc, DoublingM_ShrinksBySqrtTwo) {
    const auto p = uniform_system(40, 1e-4);
    const auto a = calab::sensitivity_frequency_mc(p, narrow, {1.0, 300.0}, 500, 7, 1.0);
    const auto b = calab::sensitivity_frequency_mc(p, narrow, {2.0, 300.0}, 500, 7, 1.0);
    EXPECT_NEAR(b.value, a.value / std::sqrt(2.0), 1e-14 * a.value);
}

TEST(FrequencyMc, AnalyticDerivative_MatchesFiniteDifferenceOracle) {
    const auto p = uniform_system(30, 2e-4);
    const double t = 700.0, q0 = 0.3;
    const std::size_t trials = 400;
    const auto est = calab::sensitivity_frequency_mc(p, narrow, {1.0, t}, trials, 21, q0);

    // Rebuild the estimator from the same draws with a numerical derivative.
    std::vector<double> s(trials), d(trials);
    const std::vector<double> q(30, 1.0);
    for (std::size_t i = 0; i < trials; ++i) {
        const double r = calab::r_statistic(calab::sample_frequencies(narrow, 1.0, 30, 21, i), q, 1.0);
        auto signal = [&](double xi) { return (q0 + xi * r) * std::cos(30.0 * xi * t / 2.0); };
        s[i] = signal(p.xi_sq);
        d[i] = oracle::central_difference(signal, p.xi_sq, 1e-3);
    }
    const double expected = std::sqrt(oracle::sample_variance(s)) / std::abs(oracle::sample_mean(d));
    EXPECT_NEAR(est.value, expected, 1e-5 * expected);
}

TEST(FrequencyMc, Errors) {
    const auto p = uniform_system(20, 1e-4);
    EXPECT_THROW(calab::sensitivity_frequency_mc(p, narrow, {1.0, 100.0}, 50, 1, 1.0), calab::InvalidInput);
    calab::FrequencyMcOptions silent;
    silent.peripheral_init = 0.0;
    EXPECT_THROW(calab::sensitivity_frequency_mc(p, narrow, {1.0, 100.0}, 200, 1, 0.0, silent), calab::IllConditioned);
    EXPECT_THROW(calab::sensitivity_frequency_mc(uniform_system(100, 1e-2), narrow, {1.0, 100.0}, 200, 1, 1.0),
                 calab::RegimeViolation);
    EXPECT_THROW(calab::sensitivity_frequency_mc(p, narrow, {0.5, 100.0}, 200, 1, 1.0), calab::InvalidInput);
}

TEST(FrequencyClosed, LongTimeFormula_QuarterPhaseExample) {
    const double xi = 1e-4;
    const double t = (pi / 4.0) * 2.0 / (100.0 * xi);
    const double value = calab::long_time_frequency_sensitivity(100, 1.0, 1.0, t, xi, 0.1);
    EXPECT_NEAR(value, 0.1 * 4.0 * xi / pi, 1e-12 * xi);
    EXPECT_NEAR(value / xi, 0.12732, 1e-5);
}

TEST(FrequencyClosed, LongTimeBranch_MatchesFormula) {
    const auto p = uniform_system(100, 1e-4);
    const MeasurementBudget b{1.0, time_for_phase(p, pi / 4.0 + 2.0 * pi)};
    calab::FrequencyClosedOptions lt;
    lt.long_time = true;
    const auto est = calab::sensitivity_frequency_closed(p, 1.0, 0.1, b, 0.0, lt);
    EXPECT_NEAR(est.value, (1.0 / 100.0) * (2.0 / b.t) * 0.1, 1e-12 * est.value);
    EXPECT_EQ(est.mode, calab::EstimateMode::freq_closed);
}

TEST(FrequencyClosed, ZeroSpread_IsZero) {
    const auto p = uniform_system(100, 1e-4);
    EXPECT_EQ(calab::sensitivity_frequency_closed(p, 0.4, 0.0, {1.0, 300.0}, 0.0).value, 0.0);
}

TEST(FrequencyClosed, DoublingNAtFixedPhase_Halves) {
    // The phase is held by halving xi^2 at fixed t, so cot and sigma(r)/<r> stay constant.
    for (bool long_time : {false, true}) {
        calab::FrequencyClosedOptions o;
        o.long_time = long_time;
        const auto p1 = uniform_system(50, 1e-4), p2 = uniform_system(100, 0.5e-4);
        const double t = time_for_phase(p1, 7.0);
        const auto a = calab::sensitivity_frequency_closed(p1, 0.5, 0.05, {1.0, t}, 0.0, o);
        const auto b = calab::sensitivity_frequency_closed(p2, 0.5, 0.05, {1.0, t}, 0.0, o);
        EXPECT_NEAR(b.value / a.value, 0.5, 1e-12);
    }
}

TEST(FrequencyClosed, DoublingNWithTimeRescaled_Unchanged) {
    // Holding the phase through t keeps N t constant, which cancels the 1/N prefactor.
    const auto p1 = uniform_system(50, 1e-4), p2 = uniform_system(100, 1e-4);
    const auto a = calab::sensitivity_frequency_closed(p1, 0.5, 0.05, {1.0, time_for_phase(p1, 7.0)}, 0.0);
    const auto b = calab::sensitivity_frequency_closed(p2, 0.5, 0.05, {1.0, time_for_phase(p2, 7.0)}, 0.0);
    EXPECT_NEAR(b.value / a.value, 1.0, 1e-12);
}

TEST(FrequencyClosed, PreconditionsAndGuards) {
    const auto p = uniform_system(100, 1e-4);
    calab::FrequencyClosedOptions lt;
    lt.long_time = true;
    EXPECT_THROW(calab::sensitivity_frequency_closed(p, 0.0, 0.1, {1.0, 300.0}, 0.0), calab::IllConditioned);
    EXPECT_THROW(calab::sensitivity_frequency_closed(p, 0.5, 0.1, {1.0, time_for_phase(p, 1.0)}, 0.0, lt),
                 calab::InvalidInput);
    EXPECT_THROW(calab::sensitivity_frequency_closed(p, 0.5, 0.1, {1.0, time_for_phase(p, 5.0)}, 1.0, lt),
                 calab::InvalidInput);
    EXPECT_THROW(calab::sensitivity_frequency_closed(p, 0.5, 0.1, {1.0, time_for_phase(p, pi + 0.01)}, 0.0, lt),
                 calab::IllConditioned);
    const auto sweet = calab::sensitivity_frequency_closed(p, 0.5, 0.1, {1.0, time_for_phase(p, 1.5 * pi + 1e-3)}, 0.0, lt);
    EXPECT_TRUE(sweet.sweet_spot);
    EXPECT_LT(sweet.value, 1e-3 * p.xi_sq);
}

TEST(FrequencyClosed, TimeScalingAtFixedPhase) {
    // Holding the phase while t grows fourfold means xi^2 shrinks fourfold.
    const auto p = uniform_system(100, 1e-4);
    auto q = p;
    q.xi_sq /= 4.0;
    calab::FrequencyClosedOptions lt;
    lt.long_time = true;
    const double phase = 19.0 * pi / 3.0;
    const auto a = calab::sensitivity_frequency_closed(p, 0.5, 0.05, {1.0, time_for_phase(p, phase)}, 0.0, lt);
    const auto b = calab::sensitivity_frequency_closed(q, 0.5, 0.05, {1.0, time_for_phase(q, phase)}, 0.0, lt);
    EXPECT_NEAR(b.value / a.value, 0.25, 1e-12);
}

TEST(FrequencyMc, ConvergesToLongTimeForm) {
    const auto p = uniform_system(100, 1e-4);
    const MeasurementBudget b{1.0, time_for_phase(p, 100.0 * pi + pi / 4.0)};
    const auto mc = calab::sensitivity_frequency_mc(p, narrow, b, 10000, 17, 0.0);
    const auto m = oracle::truncated_gaussian_r_moments(2.0, 0.05, 0.5, 1.0, 100, 1.0);
    calab::FrequencyClosedOptions lt;
    lt.long_time = true;
    const auto closed = calab::sensitivity_frequency_closed(p, m.mean, m.std, b, 0.0, lt);
    EXPECT_NEAR(mc.value, closed.value, 3.0 * mc.std_error);
}

TEST(WhiteBound, DirectEvaluation) {
    auto p = uniform_system(100, 1e-5);
    const double target = (pi / 2.0 + 2.0 * pi * 159.0) / 1000.0;
    p.xi_sq = (target * target - 1.0) / 100.0;
    const auto est = calab::sensitivity_white_noise(p, white(0.1), {1.0, 1000.0}, 1.0);
    EXPECT_NEAR(est.value, 2.0 * 0.1 * std::sqrt(0.001) / 100.0, 1e-9 * est.value);
    EXPECT_NEAR(est.value, 6.3246e-5, 1e-9);
    EXPECT_EQ(est.mode, calab::EstimateMode::white_bound);
    calab::NoiseBoundOptions refined;
    refined.large_t_refinement = true;
    EXPECT_NEAR(calab::sensitivity_white_noise(p, white(0.1), {1.0, 1000.0}, 1.0, refined).value,
                est.value / std::sqrt(2.0), 1e-15);
}

TEST(WhiteBound, ZeroAmplitude_AndErrors) {
    const auto p = uniform_system(100, 1e-5);
    const double t = time_for_unit_sine(p, 500.0);
    EXPECT_EQ(calab::sensitivity_white_noise(p, white(0.0), {1.0, t}, 1.0).value, 0.0);
    EXPECT_THROW(calab::sensitivity_white_noise(p, white(0.1), {1.0, t}, 0.0), calab::IllConditioned);
    const double w = std::sqrt(1.0 + 100.0 * 1e-5);
    EXPECT_THROW(calab::sensitivity_white_noise(p, white(0.1), {1.0, 160.0 * pi / w}, 1.0), calab::IllConditioned);
}

TEST(WhiteBound, ScalesAsInverseNAndInverseRootT) {
    const double t = 1000.0;
    for (std::size_t n : {10u, 100u}) {
        const auto a = uniform_system(n, 1e-5), b = uniform_system(2 * n, 1e-5);
        const double ta = time_for_unit_sine(a, t), tb = time_for_unit_sine(b, t);
        const double va = calab::sensitivity_white_noise(a, white(0.1), {1.0, ta}, 1.0).value * std::sqrt(ta);
        const double vb = calab::sensitivity_white_noise(b, white(0.1), {1.0, tb}, 1.0).value * std::sqrt(tb);
        EXPECT_NEAR(vb / va, 0.5, 1e-12);
    }
    const auto p = uniform_system(64, 1e-5);
    const double t1 = time_for_unit_sine(p, 500.0);
    const double w = std::sqrt(1.0 + 64e-5);
    const double t4 = t1 + 2.0 * pi * std::round(3.0 * t1 * w / (2.0 * pi)) / w;
    const double ratio = calab::sensitivity_white_noise(p, white(0.1), {1.0, t4}, 1.0).value /
                         calab::sensitivity_white_noise(p, white(0.1), {1.0, t1}, 1.0).value;
    EXPECT_NEAR(ratio, std::sqrt(t1 / t4), 1e-9);
    EXPECT_NEAR(ratio, 0.5, 0.01);
}

TEST(WhiteMc, BelowBoundAndWithinFactorTwo) {
    const auto p = uniform_system(50, 1e-5);
    const MeasurementBudget b{1.0, time_for_unit_sine(p, 200.0)};
    calab::NoiseMcOptions o;
    o.trials = 2000;
    const auto mc = calab::sensitivity_noise_mc(p, white(0.1, 4), b, 1.0, o);
    const auto bound = calab::sensitivity_white_noise(p, white(0.1, 4), b, 1.0);
    EXPECT_EQ(mc.mode, calab::EstimateMode::white_mc);
    EXPECT_LE(mc.value, bound.value);
    EXPECT_GE(mc.value, 0.5 * bound.value);
    // At large t the true spread is the bound over sqrt(2).
    EXPECT_NEAR(mc.value, bound.value / std::sqrt(2.0), 4.0 * mc.std_error + 0.01 * bound.value);
}

TEST(ColoredBound, LongCorrelationTime_TimeIndependent) {
    const auto p = uniform_system(20, 1e-5);
    NoiseSpec s;
    s.kind = NoiseKind::ou_colored;
    s.f0 = 0.3;
    s.tc = 1e6;
    const double t = time_for_unit_sine(p, 100.0);
    const auto est = calab::sensitivity_colored_noise(p, s, {1.0, t}, 2.0);
    EXPECT_NEAR(est.value, 2.0 * 0.3 / (20.0 * 2.0), 1e-12);
    s.f0 = 0.0;
    EXPECT_EQ(calab::sensitivity_colored_noise(p, s, {1.0, t}, 2.0).value, 0.0);
    EXPECT_THROW(calab::sensitivity_colored_noise(p, white(0.1), {1.0, t}, 2.0), calab::InvalidInput);
}

TEST(ColoredBound, ShortCorrelationLimit_ApproachesWhiteBound) {
    const auto p = uniform_system(20, 1e-5);
    const double t = time_for_unit_sine(p, 400.0);
    const double white_value = calab::sensitivity_white_noise(p, white(1.0), {1.0, t}, 1.0).value;
    double previous = 1e300;
    for (double tc : {1.0, 0.1, 0.01, 0.001}) {
        NoiseSpec s;
        s.kind = NoiseKind::ou_colored;
        s.tc = tc;
        s.f0 = std::sqrt(1.0 / (2.0 * tc));  // 2 f0^2 tc matches the white weight f0^2 T = 1
        const double gap = std::abs(calab::sensitivity_colored_noise(p, s, {1.0, t}, 1.0).value / white_value - 1.0);
        EXPECT_LT(gap, previous);
        previous = gap;
    }
    EXPECT_LT(previous, 1e-5);
}

TEST(ColoredBound, TruncatedVariantUsesSupport) {
    NoiseSpec s;
    s.kind = NoiseKind::truncated_ou;
    s.tc = 2.0;
    EXPECT_DOUBLE_EQ(calab::bound_correlation_time(s), 10.0);
    s.kind = NoiseKind::ou_colored;
    EXPECT_DOUBLE_EQ(calab::bound_correlation_time(s), 2.0);
}

TEST(InverseRootM, EveryEstimator) {
    const auto p = uniform_system(30, 1e-5);
    const double t = time_for_unit_sine(p, 300.0);
    NoiseSpec ou;
    ou.kind = NoiseKind::ou_colored;
    ou.f0 = 0.2;
    ou.tc = 3.0;
    calab::NoiseMcOptions mc;
    mc.trials = 200;
    const auto q = uniform_system(30, 1e-4);
    auto check = [](double at_m, double at_4m) { EXPECT_NEAR(at_4m, 0.5 * at_m, 1e-14 * at_m); };
    check(calab::sensitivity_white_noise(p, white(0.1), {1.0, t}, 1.0).value,
          calab::sensitivity_white_noise(p, white(0.1), {4.0, t}, 1.0).value);
    check(calab::sensitivity_colored_noise(p, ou, {1.0, t}, 1.0).value,
          calab::sensitivity_colored_noise(p, ou, {4.0, t}, 1.0).value);
    check(calab::sensitivity_noise_mc(p, white(0.1), {1.0, t}, 1.0, mc).value,
          calab::sensitivity_noise_mc(p, white(0.1), {4.0, t}, 1.0, mc).value);
    check(calab::sensitivity_frequency_closed(q, 0.5, 0.1, {1.0, 800.0}, 0.0).value,
          calab::sensitivity_frequency_closed(q, 0.5, 0.1, {4.0, 800.0}, 0.0).value);
    check(calab::sensitivity_frequency_mc(q, narrow, {1.0, 800.0}, 200, 2, 0.0).value,
          calab::sensitivity_frequency_mc(q, narrow, {4.0, 800.0}, 200, 2, 0.0).value);
}

calab::NoiseScenario white_scenario(calab::NoiseEstimator estimator) {
    calab::NoiseScenario s;
    s.noise = white(0.1);
    s.q0_init = 1.0;
    s.estimator = estimator;
    return s;
}

TEST(Baseline, SinglePair_EqualsSingleEstimate) {
    const SystemParams pair{1.0, {2.0}, 1e-5};
    const double t = time_for_unit_sine(pair, 100.0);
    const calab::Scenario scenario = white_scenario(calab::NoiseEstimator::monte_carlo);
    const auto base = calab::baseline_separate_averaging(pair, scenario, {1.0, t}, 1, 300, 8);
    const auto single = calab::estimate_scenario(pair, scenario, {1.0, t}, 300, 8);
    EXPECT_EQ(base.value, single.value);
    EXPECT_EQ(base.mode, calab::EstimateMode::baseline);
}

TEST(Baseline, HundredPairs_TenfoldSmaller) {
    const SystemParams pair{1.0, {2.0}, 1e-5};
    const double t = time_for_unit_sine(pair, 100.0);
    const calab::Scenario scenario = white_scenario(calab::NoiseEstimator::monte_carlo);
    const auto one = calab::baseline_separate_averaging(pair, scenario, {1.0, t}, 1, 400, 8);
    const auto hundred = calab::baseline_separate_averaging(pair, scenario, {1.0, t}, 100, 400, 8);
    EXPECT_NEAR(hundred.value / one.value, 0.1, 0.015);
}

TEST(Baseline, DeterministicScenario_IsZero) {
    const SystemParams pair{1.0, {2.0}, 1e-4};
    const calab::Scenario scenario = calab::FrequencyScenario{{2.0, 0.0, 0.5}, 1.0, 1.0};
    EXPECT_EQ(calab::baseline_separate_averaging(pair, scenario, {1.0, 300.0}, 10, 200, 1).value, 0.0);
}

TEST(Baseline, RatioToCoherentGrowsAsRootN) {
    const double t = 102.1;
    const SystemParams pair{1.0, {2.0}, 1e-5};
    const calab::Scenario scenario = white_scenario(calab::NoiseEstimator::monte_carlo);
    auto ratio = [&](std::size_t n) {
        const auto coherent = calab::estimate_scenario(uniform_system(n, 1e-5), scenario, {1.0, t}, 400, 3);
        const auto baseline = calab::baseline_separate_averaging(pair, scenario, {1.0, t}, n, 400, 3);
        return baseline.value / coherent.value;
    };
    EXPECT_NEAR(ratio(256) / ratio(16), 4.0, 1.0);
}

TEST(Scaling, BoundEstimators_GiveExpectedSlopes) {
    calab::ScalingConfig cfg;
    cfg.scenario = white_scenario(calab::NoiseEstimator::bound);
    cfg.base = {1.0, {2.0}, 1e-5};
    cfg.n_values = {8, 16, 32, 64, 128, 256};
    cfg.budget = {1.0, 102.1};
    const auto coherent = calab::scaling_study(cfg);
    EXPECT_NEAR(coherent.slope, -1.0, 0.1);
    cfg.protocol = calab::Protocol::baseline;
    const auto baseline = calab::scaling_study(cfg);
    EXPECT_NEAR(baseline.slope, -0.5, 1e-12);
    EXPECT_EQ(baseline.sensitivities.size(), 6u);
}

TEST(Scaling, FrequencyScenarioHoldsPhase) {
    calab::ScalingConfig cfg;
    cfg.scenario = calab::FrequencyScenario{narrow, 0.0, 1.0};
    cfg.base = {1.0, {2.0}, 1e-4};
    cfg.n_values = {10, 20, 40};
    cfg.hold_phase = 19.0 * pi / 3.0;
    cfg.trials = 300;
    const auto r = calab::scaling_study(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(static_cast<double>(r.n_values[i]) * 1e-4 * r.times[i] / 2.0, cfg.hold_phase, 1e-9);
    }
}

TEST(Scaling, RegimeViolatingPoint_Rejected) {
    calab::ScalingConfig cfg;
    cfg.scenario = white_scenario(calab::NoiseEstimator::bound);
    cfg.base = {1.0, {2.0}, 1e-3};
    cfg.n_values = {8, 64, 512};
    cfg.budget = {1.0, 100.0};
    EXPECT_THROW(calab::scaling_study(cfg), calab::RegimeViolation);
}

}  // namespace
