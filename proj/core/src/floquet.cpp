#include "csit/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csit/errors.hpp"

namespace csit {

double value(Period p) noexcept { return p == Period::pi ? pi : two_pi; }

std::string_view to_string(Period p) noexcept { return p == Period::pi ? "pi" : "2pi"; }

Period parse_period(std::string_view text) {
    if (text == "pi")
        return Period::pi;
    if (text == "2pi")
        return Period::two_pi;
    throw config_error("period must be 'pi' or '2pi' (got '" + std::string(text) + "')");
}

Monodromy monodromy(Equilibrium eq, const ModelParams& params, Period period, const ode::Options& options) {
    params.validate();
    if (period == Period::pi && params.epsilon != 0)
        throw config_error("period pi is only admitted for epsilon = 0");
    return {integrate_variational(eq, params, value(period), options), period, params, eq};
}

ComplexPair multipliers_from_half_trace(double h) {
    if (std::abs(h) < 1) {
        const double s = std::sqrt(1 - h * h);
        return {{h, s}, {h, -s}};
    }
    const double s = std::sqrt(h * h - 1);
    return {{h + s, 0.0}, {h - s, 0.0}};
}

ComplexPair multipliers(const Monodromy& m) {
    const double det = m.matrix.det();
    if (!(std::abs(det - 1) <= monodromy_det_tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "monodromy determinant " << det << " deviates from 1 by more than " << monodromy_det_tolerance;
        throw solver_error(os.str());
    }
    return multipliers_from_half_trace(m.half_trace());
}

std::string_view to_string(StabilityClass c) noexcept {
    switch (c) {
    case StabilityClass::elliptic:
        return "elliptic";
    case StabilityClass::parabolic:
        return "parabolic";
    case StabilityClass::hyperbolic:
        return "hyperbolic";
    }
    return "unknown";
}

std::string_view to_string(ParabolicKind k) noexcept {
    switch (k) {
    case ParabolicKind::none:
        return "none";
    case ParabolicKind::diagonal:
        return "diagonal";
    case ParabolicKind::jordan:
        return "jordan";
    }
    return "unknown";
}

StabilityVerdict classify(const Monodromy& m, double delta_par) {
    if (!(delta_par > 0 && delta_par <= max_parabolic_band))
        throw config_error("parabolic band must lie in (0, 1e-3]");
    StabilityVerdict v;
    v.half_trace = m.half_trace();
    v.multipliers = multipliers(m);
    const double T = value(m.period);
    v.exponents = {std::log(v.multipliers.first) / T, std::log(v.multipliers.second) / T};
    const double ah = std::abs(v.half_trace);
    if (ah < 1 - delta_par) {
        v.cls = StabilityClass::elliptic;
    } else if (std::abs(ah - 1) <= delta_par) {
        v.cls = StabilityClass::parabolic;
        v.parabolic_sign = v.half_trace > 0 ? 1 : -1;
        const bool diag = std::abs(m.matrix.x2) <= delta_par && std::abs(m.matrix.y1) <= delta_par;
        v.parabolic_kind = diag ? ParabolicKind::diagonal : ParabolicKind::jordan;
    } else {
        v.cls = StabilityClass::hyperbolic;
    }
    v.strongly_stable = v.cls == StabilityClass::elliptic;
    return v;
}

OrtegaCheck ortega_hypotheses(const ModelParams& params, double delta_par, const ode::Options& options) {
    if (params.epsilon != 0)
        throw config_error("Ortega hypothesis check is implemented for epsilon = 0 only");
    OrtegaCheck c;
    c.linear = classify(monodromy(Equilibrium::origin, params, Period::pi, options), delta_par);
    c.linear_stable = c.linear.cls == StabilityClass::elliptic ||
                      (c.linear.cls == StabilityClass::parabolic && c.linear.parabolic_kind == ParabolicKind::diagonal);
    c.cubic_min = std::numeric_limits<double>::infinity();
    c.cubic_max = -std::numeric_limits<double>::infinity();
    constexpr int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const double cc = cubic_coefficient(pi * i / samples, params);
        c.cubic_min = std::min(c.cubic_min, cc);
        c.cubic_max = std::max(c.cubic_max, cc);
    }
    c.cubic_sign_definite = c.cubic_min > 0 || c.cubic_max < 0;
    c.passed = c.linear_stable && c.cubic_sign_definite;
    return c;
}

namespace {

double phase_winding(const Coefficient& a, double t0, double t1, std::complex<double> z0, const ode::Options& options) {
    auto rhs = [&](double t, const ode::Vec<1>& th) -> ode::Vec<1> {
        const double c = std::cos(th[0]);
        const double s = std::sin(th[0]);
        return {-(a(t) * c * c + s * s)};
    };
    ode::Vec<1> th{std::arg(z0)};
    const double start = th[0];
    ode::integrate<1>(rhs, th, t0, t1, options);
    return th[0] - start;
}

double tracked_winding(const Coefficient& a, double t0, double t1, std::complex<double> z0, const ode::Options& options) {
    auto rhs = [&](double t, const ode::Vec<2>& v) -> ode::Vec<2> { return {v[1], -a(t) * v[0]}; };
    ode::Vec<2> v{z0.real(), z0.imag()};
    std::complex<double> prev = z0;
    double total = 0;
    auto advance = [&](std::complex<double> z) {
        if (z == 0.0)
            throw solver_error("phase vector vanished along a nontrivial solution");
        total += std::arg(z * std::conj(prev));
        prev = z;
    };
    constexpr int substeps = 8;
    auto observer = [&](const ode::DenseStep<2>& step) {
        for (int k = 1; k <= substeps; ++k) {
            const double t = step.t0 + (step.t1 - step.t0) * k / substeps;
            const auto w = step(t);
            advance({w[0], w[1]});
        }
    };
    ode::integrate<2>(rhs, v, t0, t1, options, observer);
    return total;
}

} // namespace

double winding_angle(const Coefficient& a, double t0, double t1, std::complex<double> z0, WindingMethod method,
                     const ode::Options& options) {
    if (z0 == 0.0)
        throw config_error("initial phase vector must be nonzero");
    if (!(t1 >= t0))
        throw config_error("winding interval must satisfy t0 <= t1");
    return method == WindingMethod::phase_equation ? phase_winding(a, t0, t1, z0, options)
                                                   : tracked_winding(a, t0, t1, z0, options);
}

double coefficient_minimum(const Coefficient& a, double t0, double t1, int samples) {
    if (samples < 2)
        throw config_error("coefficient_minimum needs at least two samples");
    if (t1 == t0)
        return a(t0);
    const double h = (t1 - t0) / samples;
    int best = 0;
    double best_val = a(t0);
    for (int i = 1; i <= samples; ++i) {
        const double v = a(t0 + h * i);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    // Golden-section refinement inside the neighbouring cells.
    double lo = std::max(t0, t0 + h * (best - 1));
    double hi = std::min(t1, t0 + h * (best + 1));
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    double c = hi - g * (hi - lo);
    double d = lo + g * (hi - lo);
    double fc = a(c);
    double fd = a(d);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = a(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = a(d);
        }
    }
    return std::min({best_val, fc, fd});
}

double winding_bound(double a_min, double t0, double t1) {
    if (!(a_min > 0))
        throw config_error("winding bound requires a positive coefficient minimum");
    return -std::sqrt(a_min) * (t1 - t0) + pi;
}

} // namespace csit
