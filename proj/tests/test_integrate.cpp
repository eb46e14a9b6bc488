#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "csit/errors.hpp"
#include "csit/floquet.hpp"
#include "csit/integrate.hpp"
#include "oracles.hpp"

using namespace csit;

namespace {

double oscillator_error(const ode::Options& o) {
    auto rhs = [](double, const ode::Vec<2>& y) -> ode::Vec<2> { return {y[1], -y[0]}; };
    ode::Vec<2> y{1, 0};
    ode::integrate<2>(rhs, y, 0.0, 20.0, o);
    return std::max(std::abs(y[0] - std::cos(20.0)), std::abs(y[1] + std::sin(20.0)));
}

} // namespace

TEST(Ode, AdaptiveErrorTracksTolerance) {
    double prev = 1;
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        const double err = oscillator_error(monodromy_options(tol));
        EXPECT_LT(err, 100 * tol) << tol;
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(Ode, FixedStepHalvingConvergesAtFourthOrder) {
    ode::Options o;
    o.method = ode::Method::fixed_step;
    double prev = 0;
    for (int n : {64, 128, 256, 512}) {
        o.fixed_steps_per_period = n;
        const double err = oscillator_error(o);
        if (prev > 0) {
            EXPECT_GE(prev / err, 4.0) << n;
        }
        prev = err;
    }
}

TEST(Ode, DenseOutputIsAccurateInsideSteps) {
    auto rhs = [](double, const ode::Vec<2>& y) -> ode::Vec<2> { return {y[1], -y[0]}; };
    ode::Vec<2> y{1, 0};
    double worst = 0;
    std::size_t steps = 0;
    auto observer = [&](const ode::DenseStep<2>& s) {
        ++steps;
        for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double t = s.t0 + th * (s.t1 - s.t0);
            const auto v = s(t);
            worst = std::max({worst, std::abs(v[0] - std::cos(t)), std::abs(v[1] + std::sin(t))});
        }
    };
    ode::integrate<2>(rhs, y, 0.0, 10.0, monodromy_options(1e-10), observer);
    EXPECT_GT(steps, 10u);
    EXPECT_LT(worst, 1e-8);
}

TEST(Ode, FixedStepIsBitReproducible) {
    ode::Options o;
    o.method = ode::Method::fixed_step;
    o.fixed_steps_per_period = 1000;
    const auto a = integrate_orbit({0.7, 0.2, 0}, 3 * two_pi, {1.1, 0.2}, o);
    const auto b = integrate_orbit({0.7, 0.2, 0}, 3 * two_pi, {1.1, 0.2}, o);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].t, b.samples[i].t);
        EXPECT_EQ(a.samples[i].state, b.samples[i].state);
    }
}

TEST(Ode, RejectsBackwardIntervals) {
    auto rhs = [](double, const ode::Vec<1>& y) -> ode::Vec<1> { return {y[0]}; };
    ode::Vec<1> y{1};
    EXPECT_THROW(ode::integrate<1>(rhs, y, 1.0, 0.0, ode::Options{}), config_error);
}

TEST(Orbit, EquilibriaStayPut) {
    for (const ModelParams p : {ModelParams{1.0, 0.0}, ModelParams{0.7, 0.5}}) {
        const auto a = integrate_orbit({0, 0, 0}, two_pi, p);
        EXPECT_EQ(a.samples.back().state.q, 0);
        EXPECT_EQ(a.samples.back().state.p, 0);
    }
    const auto b = integrate_orbit({pi, 0, 0}, two_pi, {1.0, 0.0});
    EXPECT_NEAR(b.samples.back().state.q, pi, 1e-8);
    EXPECT_NEAR(b.samples.back().state.p, 0, 1e-8);
}

TEST(Orbit, SamplesAtRequestedTimes) {
    std::vector<double> times;
    for (int k = 1; k <= 4; ++k)
        times.push_back(k * pi / 2);
    const auto tr = integrate_orbit({0.5, 0, 0}, two_pi, {1.0, 0.1}, orbit_options(), times);
    ASSERT_TRUE(tr.complete());
    ASSERT_EQ(tr.samples.size(), 5u);
    EXPECT_EQ(tr.samples.front().t, 0);
    for (int k = 1; k <= 4; ++k)
        EXPECT_EQ(tr.samples[k].t, times[k - 1]);
    // Dense samples agree with a run that stops exactly at each time.
    for (int k = 1; k <= 3; ++k) {
        const auto direct = integrate_orbit({0.5, 0, 0}, times[k - 1], {1.0, 0.1});
        EXPECT_NEAR(tr.samples[k].state.q, direct.samples.back().state.q, 1e-7);
    }
}

TEST(Orbit, AccuracyAgainstTightReference) {
    const ModelParams p{1.3, 0.2};
    const auto ref = integrate_orbit({1.0, 0.3, 0}, 2 * two_pi, p, orbit_options(1e-13)).samples.back().state;
    double prev = 1;
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        const auto s = integrate_orbit({1.0, 0.3, 0}, 2 * two_pi, p, orbit_options(tol)).samples.back().state;
        const double err = std::max(std::abs(s.q - ref.q), std::abs(s.p - ref.p));
        EXPECT_LT(err, 100 * tol);
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(Orbit, ReversibilityErrorScalesWithTolerance) {
    const ModelParams p{1.2, 0.3};
    auto round_trip = [&](double tol) {
        const auto a = integrate_orbit({-1.0, 0.4, 0}, two_pi, p, orbit_options(tol)).samples.back().state;
        const auto b = integrate_orbit({a.q, -a.p, two_pi}, 2 * two_pi, p, orbit_options(tol)).samples.back().state;
        return std::max(std::abs(b.q + 1.0), std::abs(b.p + 0.4));
    };
    EXPECT_GT(round_trip(1e-7) / round_trip(1e-10), 100);
}

TEST(Orbit, ValidatesInputs) {
    EXPECT_THROW(integrate_orbit({0, 0, 0}, 1, {1.0, 0.0}, orbit_options(1e-3)), config_error);
    EXPECT_THROW(integrate_orbit({0, 0, 1}, 0.5, {1.0, 0.0}), config_error);
    EXPECT_THROW(integrate_orbit({0, 0, 0}, 1, {2.5, 0.0}), config_error);
    const std::vector<double> outside{2.0};
    EXPECT_THROW(integrate_orbit({0, 0, 0}, 1, {1.0, 0.0}, orbit_options(), outside), config_error);
}

TEST(Orbit, SolverFailureLeavesPartialTrajectory) {
    ode::Options o = orbit_options();
    o.max_steps = 20;
    const auto tr = integrate_orbit({0.5, 0, 0}, 50 * two_pi, {1.0, 0.0}, o);
    EXPECT_FALSE(tr.complete());
    EXPECT_EQ(tr.termination, Termination::step_underflow);
    EXPECT_FALSE(tr.message.empty());
    EXPECT_GE(tr.samples.size(), 2u);
    EXPECT_LT(tr.samples.back().t, 50 * two_pi);
}

TEST(Monodromy, FrozenHalfTraces) {
    EXPECT_NEAR(monodromy(Equilibrium::antipode, {1.0, 0.0}, Period::pi).half_trace(), oracle::half_trace_pi_r1, 1e-9);
    EXPECT_NEAR(monodromy(Equilibrium::antipode, {1.0, 0.0}, Period::two_pi).half_trace(), oracle::half_trace_2pi_r1,
                1e-8);
    for (const auto& [r, h] : oracle::half_trace_pi_table)
        EXPECT_NEAR(monodromy(Equilibrium::antipode, {r, 0.0}, Period::pi).half_trace(), h, 1e-8) << r;
}

TEST(Monodromy, AgreesWithIndependentRk4) {
    for (const ModelParams p : {ModelParams{0.8, 0.0}, ModelParams{1.3, 0.1}, ModelParams{1.0, 0.5}}) {
        for (auto eq : {Equilibrium::origin, Equilibrium::antipode}) {
            const auto a = [&](double t) {
                return eq == Equilibrium::origin ? oracle::origin_coefficient(t, p.r, p.epsilon)
                                                 : oracle::antipode_coefficient(t, p.r, p.epsilon);
            };
            const auto ref = oracle::rk4_monodromy(a, two_pi, 20000);
            const auto m = monodromy(eq, p).matrix;
            const double scale = std::max({1.0, std::abs(ref.x1), std::abs(ref.y1)});
            EXPECT_NEAR(m.x1, ref.x1, 1e-8 * scale);
            EXPECT_NEAR(m.x2, ref.x2, 1e-8 * scale);
            EXPECT_NEAR(m.y1, ref.y1, 1e-8 * scale);
            EXPECT_NEAR(m.y2, ref.y2, 1e-8 * scale);
        }
    }
}

TEST(Monodromy, FullPeriodIsSquareOfHalfPeriodWhenCircular) {
    for (double r : {0.9, 1.24, 1.6}) {
        const auto half = monodromy(Equilibrium::antipode, {r, 0.0}, Period::pi).matrix;
        const auto full = monodromy(Equilibrium::antipode, {r, 0.0}, Period::two_pi).matrix;
        const auto sq = half * half;
        EXPECT_NEAR(full.x1, sq.x1, 1e-8 * std::max(1.0, std::abs(sq.x1)));
        EXPECT_NEAR(full.y1, sq.y1, 1e-8 * std::max(1.0, std::abs(sq.y1)));
    }
}

TEST(Monodromy, WronskianAndEvenness) {
    for (const ModelParams p : {ModelParams{0.5, 0.0}, ModelParams{1.5, 0.1}, ModelParams{1.2, 0.3}, ModelParams{0.8, 0.6}})
        for (auto eq : {Equilibrium::origin, Equilibrium::antipode}) {
            const auto m = monodromy(eq, p).matrix;
            EXPECT_NEAR(m.det(), 1, 1e-8);
            EXPECT_NEAR(m.x1, m.y2, 1e-8);
        }
}

TEST(Monodromy, HalfPeriodNeedsCircularBinary) {
    EXPECT_THROW(monodromy(Equilibrium::origin, {1.0, 0.1}, Period::pi), config_error);
}
