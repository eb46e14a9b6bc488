#include "csit/verify.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "csit/floquet.hpp"
#include "csit/general_model.hpp"
#include "csit/io.hpp"

namespace csit::verify {

namespace {

CheckResult check(std::string name, double worst, double limit) {
    std::ostringstream os;
    os << "worst " << io::format_double(worst) << " (limit " << limit << ")";
    return {std::move(name), worst <= limit, os.str()};
}

CheckResult guarded(std::string name, const std::function<CheckResult()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {std::move(name), false, std::string("threw: ") + e.what()};
    }
}

const ModelParams suite_params[] = {{0.5, 0.0}, {1.0, 0.0}, {1.5, 0.1}, {1.2, 0.3}, {0.8, 0.6}};

CheckResult kepler_residuals() {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double M = two_pi * i / 100;
        for (int j = 0; j < 20; ++j) {
            const double e = 0.9 * j / 19;
            const double u = kepler::solve(M, e);
            worst = std::max(worst, std::abs(u - e * std::sin(u) - M));
        }
    }
    return check("kepler residual", worst, 1e-12);
}

CheckResult barycenter() {
    double worst = 0;
    for (const auto& p : suite_params)
        for (int i = 0; i < 64; ++i) {
            const auto e = primary_positions(two_pi * i / 64, p);
            const Vec3 mid = 0.5 * (e.x1 + e.x2);
            worst = std::max(worst, norm(mid - Vec3{0, circle_radius, 0}));
        }
    return check("barycenter fixed", worst, 1e-15);
}

CheckResult force_gradient(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> q(-pi, pi), t(0, two_pi);
    double worst = 0;
    constexpr double h = 1e-5;
    for (const auto& p : suite_params)
        for (int i = 0; i < 100; ++i) {
            const double qq = q(rng);
            const double tt = t(rng);
            const double fd = -(potential(qq + h, tt, p) - potential(qq - h, tt, p)) / (2 * h);
            const double f = tangential_force(qq, tt, p);
            worst = std::max(worst, std::abs(fd - f) / std::max(1.0, std::abs(f)));
        }
    return check("force = -dV/dq", worst, 1e-6);
}

CheckResult parity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> q(-pi, pi), t(0, two_pi);
    double worst = 0;
    for (const auto& p : suite_params)
        for (int i = 0; i < 100; ++i) {
            const double qq = q(rng);
            const double tt = t(rng);
            const double f = tangential_force(qq, tt, p);
            const double scale = std::max(1.0, std::abs(f));
            worst = std::max({worst, std::abs(tangential_force(-qq, tt, p) + f) / scale,
                              std::abs(tangential_force(qq + two_pi, tt, p) - f) / scale,
                              std::abs(tangential_force(qq, tt + two_pi, p) - f) / scale,
                              std::abs(tangential_force(qq, -tt, p) - f) / scale});
        }
    return check("force odd in q, periodic, even in t", worst, 1e-12);
}

CheckResult symmetries(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> q(-pi, pi), pp(-2, 2), s(0, two_pi);
    double worst = 0;
    for (const auto& p : suite_params)
        for (int i = 0; i < 200; ++i)
            for (double d : symmetry_defect({q(rng), pp(rng), s(rng)}, p))
                worst = std::max(worst, d);
    return check("symmetry defects", worst, 1e-12);
}

CheckResult wronskian() {
    double worst = 0;
    for (const auto& p : suite_params)
        for (auto eq : {Equilibrium::origin, Equilibrium::antipode}) {
            const Monodromy m = monodromy(eq, p, Period::two_pi);
            worst = std::max({worst, std::abs(m.matrix.det() - 1), std::abs(m.matrix.x1 - m.matrix.y2)});
        }
    return check("det X = 1 and x1 = y2", worst, 1e-8);
}

CheckResult origin_oracle() {
    double worst = 0;
    for (double r : {0.5, 1.0, 1.5, 1.9}) {
        const double w = std::sqrt(2 / (r * r * r));
        const Monodromy m = monodromy(Equilibrium::origin, {r, 0.0}, Period::pi);
        const double c = std::cos(pi * w);
        const double s = std::sin(pi * w);
        worst = std::max({worst, std::abs(m.matrix.x1 - c), std::abs(m.matrix.x2 - s / w),
                          std::abs(m.matrix.y1 + w * s), std::abs(m.matrix.y2 - c)});
    }
    return check("origin monodromy vs closed form", worst, 1e-8);
}

CheckResult multiplier_product() {
    double worst = 0;
    for (const auto& p : suite_params) {
        const auto [l1, l2] = multipliers(monodromy(Equilibrium::antipode, p));
        worst = std::max(worst, std::abs(l1 * l2 - 1.0));
    }
    return check("multiplier product", worst, 1e-8);
}

CheckResult winding() {
    const ModelParams p{1.0, 0.3};
    const HillCoefficient origin(Equilibrium::origin, p);
    const std::vector<std::pair<std::string, Coefficient>> cases = {
        {"1", [](double) { return 1.0; }},
        {"4", [](double) { return 4.0; }},
        {"1+cos/2", [](double t) { return 1 + 0.5 * std::cos(t); }},
        {"origin", [origin](double t) { return origin(t); }}};
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [name, a] : cases) {
        const double bound = winding_bound(coefficient_minimum(a, 0, two_pi), 0, two_pi);
        for (int k = 0; k < 8; ++k) {
            const double theta = winding_angle(a, 0, two_pi, std::polar(1.0, two_pi * k / 8));
            worst = std::max(worst, theta - bound);
        }
    }
    return check("winding minus bound", worst, 0.0);
}

CheckResult hessian() {
    double worst = 0;
    constexpr double h = 1e-4;
    const auto line = curves::line_fixture();
    const auto near = curves::sitnikov_instantiation(0.2);
    for (int i = 0; i < 10; ++i) {
        const double t = -0.45 + 0.09 * i;
        for (const auto& [pair, lambda] : {std::pair{&line, 0.3 + 0.05 * i}, std::pair{&near, 1.2 + 0.03 * i}}) {
            auto U = [&](double s) { return curves::pair_potential(s, t, lambda, *pair); };
            const double fd = (U(h) - 2 * U(0) + U(-h)) / (h * h);
            const double an = curves::d2U_ds2(t, lambda, *pair);
            worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
        }
    }
    return check("curve-pair U'' vs finite difference", worst, 1e-6);
}

CheckResult pair_vs_model() {
    double worst = 0;
    for (const auto& p : suite_params) {
        const auto a = curves::sitnikov_hill_from_pairs(p);
        const HillCoefficient b(Equilibrium::antipode, p);
        for (int i = 0; i < 32; ++i) {
            const double t = two_pi * i / 32;
            worst = std::max(worst, std::abs(a(t) - b(t)) / std::max(1.0, std::abs(b(t))));
        }
    }
    return check("curve-pair Hessian = antipode Hill coefficient", worst, 1e-12);
}

CheckResult winding_trend() {
    double prev_w = std::numeric_limits<double>::infinity();
    double prev_ta = -1;
    bool ok = true;
    std::ostringstream os;
    const auto pair = curves::sitnikov_instantiation(0.0);
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
        const auto rep = curves::bound_report(curves::sitnikov_lambda_for_delta(delta, 0.0), pair);
        ok = ok && rep.winding_estimate < prev_w && rep.tau_sqrt_a_min > prev_ta;
        prev_w = rep.winding_estimate;
        prev_ta = rep.tau_sqrt_a_min;
        os << "delta " << delta << ": " << io::format_double(rep.winding_estimate) << "; ";
    }
    return {"winding estimate decreases as delta shrinks", ok, os.str()};
}

CheckResult reversibility() {
    double worst = 0;
    const double tol = default_orbit_tol;
    for (const auto& p : suite_params)
        for (auto [q0, p0] : {std::pair{0.3, 0.1}, std::pair{-1.0, 0.4}}) {
            const Trajectory a = integrate_orbit({q0, p0, 0}, two_pi, p, orbit_options(tol));
            const ExtendedState mid = a.samples.back().state;
            const Trajectory b = integrate_orbit({mid.q, -mid.p, two_pi}, 2 * two_pi, p, orbit_options(tol));
            const ExtendedState end = b.samples.back().state;
            worst = std::max({worst, std::abs(end.q - q0), std::abs(end.p + p0)});
        }
    return check("reversibility round trip / tol", worst / tol, 10);
}

CheckResult hyperbolic_threshold() {
    // Below (sqrt 17 - 3)^{1/2} the antipode coefficient is negative throughout.
    const double r_star = std::sqrt(std::sqrt(17.0) - 3);
    const HillCoefficient below(Equilibrium::antipode, {r_star * (1 - 1e-6), 0.0});
    const HillCoefficient above(Equilibrium::antipode, {r_star * (1 + 1e-6), 0.0});
    double max_below = -std::numeric_limits<double>::infinity();
    double max_above = max_below;
    for (int i = 0; i <= 1024; ++i) {
        const double t = pi * i / 1024;
        max_below = std::max(max_below, below(t));
        max_above = std::max(max_above, above(t));
    }
    std::ostringstream os;
    os << "max a below " << io::format_double(max_below) << ", above " << io::format_double(max_above);
    return {"antipode coefficient sign threshold", max_below < 0 && max_above > 0, os.str()};
}

} // namespace

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::vector<CheckResult> out;
    out.push_back(guarded("kepler residual", kepler_residuals));
    out.push_back(guarded("barycenter fixed", barycenter));
    out.push_back(guarded("force = -dV/dq", [&] { return force_gradient(rng); }));
    out.push_back(guarded("force parity", [&] { return parity(rng); }));
    out.push_back(guarded("symmetry defects", [&] { return symmetries(rng); }));
    out.push_back(guarded("det X = 1 and x1 = y2", wronskian));
    out.push_back(guarded("origin monodromy vs closed form", origin_oracle));
    out.push_back(guarded("multiplier product", multiplier_product));
    out.push_back(guarded("winding minus bound", winding));
    out.push_back(guarded("curve-pair U''", hessian));
    out.push_back(guarded("curve-pair Hessian = antipode Hill coefficient", pair_vs_model));
    out.push_back(guarded("winding estimate trend", winding_trend));
    out.push_back(guarded("reversibility", reversibility));
    out.push_back(guarded("antipode coefficient sign threshold", hyperbolic_threshold));
    return out;
}

} // namespace csit::verify
