#include "csit/model.hpp"

#include <algorithm>
#include <cmath>

#include "csit/errors.hpp"

namespace csit {

double angle(Equilibrium eq) noexcept { return eq == Equilibrium::origin ? 0.0 : pi; }

std::string_view to_string(Equilibrium eq) noexcept { return eq == Equilibrium::origin ? "0" : "pi"; }

Equilibrium parse_equilibrium(std::string_view text) {
    if (text == "0" || text == "origin")
        return Equilibrium::origin;
    if (text == "pi" || text == "antipode")
        return Equilibrium::antipode;
    throw config_error("equilibrium must be one of 0, pi (got '" + std::string(text) + "')");
}

double wrap_positive(double q) noexcept {
    double w = std::fmod(q, two_pi);
    if (w < 0)
        w += two_pi;
    if (w >= two_pi)
        w = 0;
    return w;
}

double wrap_symmetric(double q) noexcept {
    double w = wrap_positive(q);
    if (w > pi)
        w -= two_pi;
    return w;
}

namespace {

// r rho(t) and w = r rho cos t, the only place t enters the force.
struct Binary {
    double rr;
    double w;
};

Binary binary_at(double t, const ModelParams& params) {
    const double rr = params.r * kepler::radial_factor(t, params.epsilon);
    return {rr, rr * std::cos(t)};
}

// 1 - cos q without cancellation near q = 0.
double one_minus_cos(double q) {
    const double h = std::sin(0.5 * q);
    return 2 * h * h;
}

struct Distances {
    double d1;
    double d2;
};

Distances distances(double q, const Binary& b, double d_min) {
    const double omc = one_minus_cos(q);
    const double rr2 = b.rr * b.rr;
    const Distances d{std::sqrt(std::max(0.0, rr2 + 2 * omc * (1 + b.w))),
                      std::sqrt(std::max(0.0, rr2 + 2 * omc * (1 - b.w)))};
    if (d.d1 <= d_min)
        throw collision_error(1, d.d1);
    if (d.d2 <= d_min)
        throw collision_error(2, d.d2);
    return d;
}

} // namespace

double tangential_force(double q, double t, const ModelParams& params, double d_min) {
    const Binary b = binary_at(t, params);
    const Distances d = distances(q, b, d_min);
    const double sq = std::sin(q);
    return -(1 + b.w) * sq / (d.d1 * d.d1 * d.d1) - (1 - b.w) * sq / (d.d2 * d.d2 * d.d2);
}

double potential(double q, double t, const ModelParams& params, double d_min) {
    const Distances d = distances(q, binary_at(t, params), d_min);
    return -(1 / d.d1 + 1 / d.d2) / circle_radius;
}

double dforce_dq(Equilibrium eq, double t, const ModelParams& params) {
    const Binary b = binary_at(t, params);
    if (eq == Equilibrium::origin) {
        if (b.rr <= default_collision_guard)
            throw collision_error(0, b.rr);
        return -2 * circle_radius / (b.rr * b.rr * b.rr);
    }
    const double rr2 = b.rr * b.rr;
    const double s1 = rr2 + 4 + 4 * b.w;
    const double s2 = rr2 + 4 - 4 * b.w;
    const double guard2 = default_collision_guard * default_collision_guard;
    if (s1 <= guard2)
        throw collision_error(1, std::sqrt(std::max(0.0, s1)));
    if (s2 <= guard2)
        throw collision_error(2, std::sqrt(std::max(0.0, s2)));
    return (1 + b.w) / (s1 * std::sqrt(s1)) + (1 - b.w) / (s2 * std::sqrt(s2));
}

HillCoefficient::HillCoefficient(Equilibrium eq, const ModelParams& params) : eq_(eq), params_(params) {
    params_.validate();
}

double HillCoefficient::period() const noexcept { return params_.epsilon == 0 ? pi : two_pi; }

HillCoefficient hill_coefficient(Equilibrium eq, const ModelParams& params) { return {eq, params}; }

double cubic_coefficient(double t, const ModelParams& params) {
    if (params.epsilon != 0)
        throw config_error("cubic coefficient at the origin is only available for epsilon = 0");
    params.validate();
    const double r = params.r;
    const double c = std::cos(t);
    return (9 + r * r + 9 * r * r * c * c) / (3 * std::pow(r, 5));
}

ExtendedState vector_field(const ExtendedState& state, const ModelParams& params) {
    return {state.p, tangential_force(state.q, state.s, params), 1.0};
}

namespace {

double max_abs_diff(const ExtendedState& a, const ExtendedState& b) {
    return std::max({std::abs(a.q - b.q), std::abs(a.p - b.p), std::abs(a.s - b.s)});
}

// Symmetries act on tangent vectors through their linear parts.
ExtendedState s1(const ExtendedState& v) { return {-v.q, -v.p, v.s}; }
ExtendedState s4(const ExtendedState& v) { return {v.q, -v.p, -v.s}; }

} // namespace

std::array<double, 4> symmetry_defect(const ExtendedState& z, const FieldFn& field) {
    const ExtendedState xz = field(z);
    std::array<double, 4> out{};
    const ExtendedState s1z{-z.q, -z.p, z.s};
    out[0] = max_abs_diff(field(s1z), s1(xz));
    out[1] = max_abs_diff(field({z.q, z.p, z.s + two_pi}), xz);
    out[2] = max_abs_diff(field({z.q + two_pi, z.p, z.s}), xz);
    const ExtendedState x4 = field({z.q, -z.p, -z.s});
    out[3] = max_abs_diff(s4(xz), {-x4.q, -x4.p, -x4.s});
    return out;
}

std::array<double, 4> symmetry_defect(const ExtendedState& state, const ModelParams& params) {
    return symmetry_defect(state, [&](const ExtendedState& z) { return vector_field(z, params); });
}

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1 - x * x / 6 : std::sin(x) / x; }

} // namespace

double limit_force_classical(double w, double t, const ScaledParams& params) {
    if (!(params.R >= 1))
        throw config_error("limit_force_classical requires R >= 1");
    if (!(params.epsilon >= 0 && params.epsilon < 1) || !(params.r > 0))
        throw config_error("limit_force_classical requires r > 0 and 0 <= epsilon < 1");
    const double re = params.r * kepler::radial_factor(t, params.epsilon);
    const double x = w / params.R;
    const double k = re / params.R * std::cos(t);
    const double sx = sinc(x);
    const double shalf = sinc(0.5 * x);
    // 2 w^2 (1 - cos x)/x^2 = w^2 sinc^2(x/2)
    const double chord2 = w * w * shalf * shalf;
    const double b1 = re * re + chord2 * (1 + k);
    const double b2 = re * re + chord2 * (1 - k);
    if (b1 <= 0 || b2 <= 0)
        throw collision_error(b1 <= 0 ? 1 : 2, 0.0);
    return -w * sx * (1 + k) / (b1 * std::sqrt(b1)) - w * sx * (1 - k) / (b2 * std::sqrt(b2));
}

double classical_sitnikov_force(double w, double t, double r, double epsilon) {
    const double re = r * kepler::radial_factor(t, epsilon);
    const double b = re * re + w * w;
    return -2 * w / (b * std::sqrt(b));
}

double limit_force_circle(double q, double R) {
    if (!(R > 0))
        throw config_error("circle radius must be positive");
    const double h = std::sin(0.5 * q);
    const double chord = 2 * R * std::abs(h);
    if (chord <= default_collision_guard)
        throw collision_error(0, chord);
    // (1 - cos q)^{3/2} = 2 sqrt(2) |sin(q/2)|^3
    const double ah = std::abs(h);
    return -std::sin(q) / (4 * R * R * ah * ah * ah);
}

double comparison_force(double q, double R) {
    if (!(R > 0))
        throw config_error("circle radius must be positive");
    if (!(q >= 0 && q <= two_pi))
        throw config_error("comparison force is defined for q in (0, 2pi)");
    const double a1 = R * q;
    const double a2 = R * (two_pi - q);
    if (a1 <= default_collision_guard)
        throw collision_error(0, a1);
    if (a2 <= default_collision_guard)
        throw collision_error(0, a2);
    return -1 / (R * q * q) + 1 / (R * (two_pi - q) * (two_pi - q));
}

} // namespace csit
