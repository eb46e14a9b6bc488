#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "csit/errors.hpp"
#include "csit/model.hpp"
#include "oracles.hpp"

using namespace csit;

namespace {

const ModelParams sample_params[] = {{0.5, 0.0}, {1.0, 0.0}, {1.5, 0.1}, {1.2, 0.3}, {0.8, 0.6}};

} // namespace

TEST(Force, HighPrecisionValues) {
    const ModelParams p{1.0, 0.0};
    EXPECT_NEAR(tangential_force(pi / 2, 0, p), oracle::force_half_pi, 1e-15);
    EXPECT_NEAR(potential(pi / 2, 0, p), oracle::potential_half_pi, 1e-15);
}

TEST(Force, IsMinusGradientOfPotential) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> q(-pi, pi), t(0, two_pi);
    const double h = 1e-5;
    for (const auto& p : sample_params)
        for (int i = 0; i < 200; ++i) {
            const double qq = q(rng), tt = t(rng);
            const double fd = -(potential(qq + h, tt, p) - potential(qq - h, tt, p)) / (2 * h);
            EXPECT_NEAR(tangential_force(qq, tt, p), fd, 1e-7 * std::max(1.0, std::abs(fd)));
        }
}

TEST(Force, VanishesAtEquilibria) {
    for (const auto& p : sample_params)
        for (double t : {0.0, 1.0, 2.5, 4.0}) {
            EXPECT_EQ(tangential_force(0, t, p), 0.0);
            EXPECT_NEAR(tangential_force(pi, t, p), 0.0, 1e-15);
        }
}

TEST(Force, ParityAndPeriodicity) {
    const ModelParams p{1.3, 0.2};
    for (double q : {0.2, 1.0, 2.9})
        for (double t : {0.1, 2.0, 5.0}) {
            const double f = tangential_force(q, t, p);
            EXPECT_NEAR(tangential_force(-q, t, p), -f, 1e-15);
            EXPECT_NEAR(tangential_force(q + two_pi, t, p), f, 1e-13);
            EXPECT_NEAR(tangential_force(q, t + two_pi, p), f, 1e-13);
            EXPECT_NEAR(tangential_force(q, -t, p), f, 1e-13);
        }
}

TEST(Force, CircularBinaryHasPeriodPi) {
    const ModelParams p{1.1, 0.0};
    for (double q : {0.5, 2.0})
        for (double t : {0.3, 1.9})
            EXPECT_NEAR(tangential_force(q, t + pi, p), tangential_force(q, t, p), 1e-14);
}

TEST(Force, CollisionGuardNamesPrimary) {
    // r = 0.1, q = 0.1: d1 ~ 0.145 and d2 ~ 0.138 at t = 0, swapped at t = pi.
    const ModelParams p{0.1, 0.0};
    try {
        tangential_force(0.1, 0.0, p, 0.14);
        FAIL();
    } catch (const collision_error& e) {
        EXPECT_EQ(e.primary(), 2);
        EXPECT_LT(e.distance(), 0.14);
    }
    try {
        tangential_force(0.1, pi, p, 0.14);
        FAIL();
    } catch (const collision_error& e) {
        EXPECT_EQ(e.primary(), 1);
    }
    EXPECT_NO_THROW(tangential_force(0.1, pi, p, 0.13));
}

TEST(Linearization, MatchesFiniteDifferenceOfForce) {
    const double h = 1e-6;
    for (const auto& p : sample_params)
        for (double t : {0.0, 0.7, 2.2, 4.4}) {
            const double d0 = (tangential_force(h, t, p) - tangential_force(-h, t, p)) / (2 * h);
            EXPECT_NEAR(dforce_dq(Equilibrium::origin, t, p), d0, 1e-6 * std::abs(d0));
            const double dpi = (tangential_force(pi + h, t, p) - tangential_force(pi - h, t, p)) / (2 * h);
            EXPECT_NEAR(dforce_dq(Equilibrium::antipode, t, p), dpi, 1e-7);
        }
}

TEST(Linearization, HillCoefficientsAgainstIndependentFormulas) {
    for (const auto& p : sample_params) {
        const HillCoefficient a0(Equilibrium::origin, p);
        const HillCoefficient api(Equilibrium::antipode, p);
        for (double t : {0.0, 1.0, 3.0, 5.0}) {
            EXPECT_NEAR(a0(t), oracle::origin_coefficient(t, p.r, p.epsilon), 1e-12 * a0(t));
            EXPECT_NEAR(api(t), oracle::antipode_coefficient(t, p.r, p.epsilon), 1e-13 * std::max(1.0, std::abs(api(t))));
        }
        EXPECT_EQ(a0.period(), p.epsilon == 0 ? pi : two_pi);
    }
}

TEST(Linearization, CubicCoefficientMatchesExpansion) {
    for (double r : {0.5, 1.0, 1.7})
        for (double t : {0.0, 0.9, pi / 2}) {
            const ModelParams p{r, 0.0};
            const double q = 1e-3;
            const double cubic = (tangential_force(q, t, p) + 2 * q / (r * r * r)) / (q * q * q);
            EXPECT_NEAR(cubic_coefficient(t, p), cubic, 1e-4 * cubic);
            EXPECT_GT(cubic_coefficient(t, p), 0);
        }
    EXPECT_THROW(cubic_coefficient(0, {1.0, 0.1}), config_error);
}

TEST(Symmetry, DefectsVanishOnTheModel) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> q(-pi, pi), pp(-3, 3), s(-10, 10);
    for (const auto& p : sample_params)
        for (int i = 0; i < 200; ++i)
            for (double d : symmetry_defect({q(rng), pp(rng), s(rng)}, p))
                EXPECT_LE(d, 1e-12);
}

TEST(Symmetry, DefectsDetectBrokenFields) {
    const ModelParams p{1.0, 0.2};
    const ExtendedState z{0.4, 0.3, 0.9};
    // A forcing odd in time (and odd, periodic in q) breaks reversibility only.
    const FieldFn odd_in_time = [&](const ExtendedState& x) {
        auto v = vector_field(x, p);
        v.p += 0.1 * std::sin(x.q) * std::sin(x.s);
        return v;
    };
    auto d = symmetry_defect(z, odd_in_time);
    EXPECT_LE(d[0], 1e-12);
    EXPECT_LE(d[1], 1e-12);
    EXPECT_LE(d[2], 1e-12);
    EXPECT_GT(d[3], 1e-3);
    // An even-in-q term breaks S1 only.
    const FieldFn even_in_q = [&](const ExtendedState& x) {
        auto v = vector_field(x, p);
        v.p += 0.1 * std::cos(x.q);
        return v;
    };
    d = symmetry_defect(z, even_in_q);
    EXPECT_GT(d[0], 1e-3);
    EXPECT_LE(d[2], 1e-12);
}

TEST(Wrap, Ranges) {
    EXPECT_DOUBLE_EQ(wrap_symmetric(pi), pi);
    EXPECT_DOUBLE_EQ(wrap_symmetric(-pi), pi);
    EXPECT_NEAR(wrap_symmetric(3 * pi / 2), -pi / 2, 1e-15);
    EXPECT_NEAR(wrap_positive(-0.5), two_pi - 0.5, 1e-15);
    EXPECT_EQ(wrap_positive(0.0), 0.0);
}

TEST(Equilibria, Parsing) {
    EXPECT_EQ(parse_equilibrium("0"), Equilibrium::origin);
    EXPECT_EQ(parse_equilibrium("pi"), Equilibrium::antipode);
    EXPECT_EQ(parse_equilibrium("antipode"), Equilibrium::antipode);
    EXPECT_THROW(parse_equilibrium("1"), config_error);
    EXPECT_EQ(to_string(Equilibrium::antipode), "pi");
}

TEST(Limits, ClassicalSitnikov) {
    for (double w : {0.5, 1.0, 2.0}) {
        const double expect = -2 * w / std::pow(1 + w * w, 1.5);
        EXPECT_NEAR(classical_sitnikov_force(w, 0.3, 1.0, 0.0), expect, 1e-15);
        EXPECT_NEAR(limit_force_classical(w, 0.3, {1e3, 1.0, 0.0}), expect, 1e-5);
    }
    // The correction shrinks like 1/R^2.
    const double e1 = std::abs(limit_force_classical(1.0, 0.0, {10, 1.0, 0.0}) - classical_sitnikov_force(1.0, 0, 1, 0));
    const double e2 = std::abs(limit_force_classical(1.0, 0.0, {100, 1.0, 0.0}) - classical_sitnikov_force(1.0, 0, 1, 0));
    EXPECT_NEAR(e1 / e2, 100, 5);
    EXPECT_THROW(limit_force_classical(1.0, 0.0, {0.5, 1.0, 0.0}), config_error);
}

TEST(Limits, CircleTwoBody) {
    for (double q : {pi / 2, 2.0, pi})
        EXPECT_NEAR(tangential_force(q, 0.7, {1e-6, 0.0}), limit_force_circle(q, 1.0), 1e-5);
    EXPECT_THROW(limit_force_circle(0.0, 1.0), collision_error);
    EXPECT_NEAR(limit_force_circle(pi, 2.0), 0.0, 1e-15);
}

TEST(Limits, ComparisonForce) {
    EXPECT_NEAR(comparison_force(pi, 1.0), 0.0, 1e-15);
    EXPECT_LT(comparison_force(0.5, 1.0), 0);
    EXPECT_GT(comparison_force(two_pi - 0.5, 1.0), 0);
    EXPECT_THROW(comparison_force(0.0, 1.0), collision_error);
    EXPECT_THROW(comparison_force(7.0, 1.0), config_error);
}
