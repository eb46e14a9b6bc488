#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>

#include "csit/kepler.hpp"

namespace csit {

// The two equilibria of the constrained particle: q* = 0 (between the
// primaries, at the barycenter) and q* = pi (the antipode on the circle).
enum class Equilibrium { origin, antipode };

double angle(Equilibrium eq) noexcept;
std::string_view to_string(Equilibrium eq) noexcept;
/// Accepts "0", "origin", "pi", "antipode". Throws config_error otherwise.
Equilibrium parse_equilibrium(std::string_view text);

// Phase point of the extended autonomous field. q is kept unwrapped so that
// winding can be counted; s is the phase time (mod 2pi).
struct ExtendedState {
    double q = 0;
    double p = 0;
    double s = 0;

    friend bool operator==(const ExtendedState&, const ExtendedState&) = default;
};

inline constexpr double default_collision_guard = 1e-9;

/// Maps an angle to [0, 2pi).
double wrap_positive(double q) noexcept;
/// Maps an angle to (-pi, pi].
double wrap_symmetric(double q) noexcept;

/// Component of the primaries' attraction along the circle (R = 1):
///   f = -(1 + w) sin q / d1^3 - (1 - w) sin q / d2^3,  w = r rho(t) cos t,
///   d1^2 = r^2 rho^2 + 2(1 - cos q)(1 + w),  d2^2 = r^2 rho^2 + 2(1 - cos q)(1 - w).
/// Throws collision_error naming the primary if d_i <= d_min.
double tangential_force(double q, double t, const ModelParams& params,
                        double d_min = default_collision_guard);

/// V = -(1/d1 + 1/d2); tangential_force = -dV/dq.
double potential(double q, double t, const ModelParams& params,
                 double d_min = default_collision_guard);

/// df/dq at an equilibrium. At the origin -2/(r rho)^3; at the antipode
///   (1 + w)/[r^2 rho^2 + 4 + 4w]^{3/2} + (1 - w)/[r^2 rho^2 + 4 - 4w]^{3/2}.
double dforce_dq(Equilibrium eq, double t, const ModelParams& params);

/// Coefficient a(t) of the Hill equation S'' + a(t) S = 0 obtained by
/// linearizing at an equilibrium, a = -df/dq.
class HillCoefficient {
public:
    HillCoefficient(Equilibrium eq, const ModelParams& params);

    double operator()(double t) const { return -dforce_dq(eq_, t, params_); }

    Equilibrium equilibrium() const noexcept { return eq_; }
    const ModelParams& params() const noexcept { return params_; }
    /// pi when epsilon = 0 (the circular binary repeats every half turn), 2pi otherwise.
    double period() const noexcept;

private:
    Equilibrium eq_;
    ModelParams params_;
};

HillCoefficient hill_coefficient(Equilibrium eq, const ModelParams& params);

/// Cubic coefficient (9 + r^2 + 9 r^2 cos^2 t)/(3 r^5) of the force expansion
/// at the origin. Only defined for epsilon = 0; throws config_error otherwise.
double cubic_coefficient(double t, const ModelParams& params);

/// (q', p', s') = (p, f(q, s), 1).
ExtendedState vector_field(const ExtendedState& state, const ModelParams& params);

using FieldFn = std::function<ExtendedState(const ExtendedState&)>;

/// Residuals (max-abs) of the four field symmetries at a state:
///   [0] X(S1 z) vs S1 X(z),  S1(q,p,s) = (-q,-p,s)
///   [1] X(S2 z) vs X(z),     S2 shifts s by 2pi
///   [2] X(S3 z) vs X(z),     S3 shifts q by 2pi
///   [3] S4 X(z) vs -X(S4 z), S4(q,p,s) = (q,-p,-s)
std::array<double, 4> symmetry_defect(const ExtendedState& state, const ModelParams& params);
std::array<double, 4> symmetry_defect(const ExtendedState& state, const FieldFn& field);

// Model with an explicit circle radius, for the R -> infinity limit.
struct ScaledParams {
    double R = 1;
    double r = 1;
    double epsilon = 0;
};

/// Force along the circle as a function of arc length w = R q, written so it
/// stays accurate for large R. Requires R >= 1.
double limit_force_classical(double w, double t, const ScaledParams& params);

/// Classical Sitnikov force -2w/(r_e^2 + w^2)^{3/2}, r_e = r rho(t).
double classical_sitnikov_force(double w, double t, double r, double epsilon);

/// Fused-primaries force -sin q / (sqrt(2) R^2 (1 - cos q)^{3/2}).
double limit_force_circle(double q, double R);

/// Arc-length inverse-square force -1/(R q^2) + 1/(R (2pi - q)^2), q in (0, 2pi).
double comparison_force(double q, double R);

} // namespace csit
