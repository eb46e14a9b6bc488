#pragma once

#include <complex>
#include <string_view>
#include <utility>

#include "csit/integrate.hpp"

namespace csit {

enum class Period { pi, two_pi };

double value(Period p) noexcept;
std::string_view to_string(Period p) noexcept;
/// Accepts "pi" and "2pi". Throws config_error otherwise.
Period parse_period(std::string_view text);

// Fundamental matrix after one period of the linearized flow at an equilibrium.
struct Monodromy {
    FundamentalMatrix matrix;
    Period period = Period::two_pi;
    ModelParams params;
    Equilibrium equilibrium = Equilibrium::antipode;

    double half_trace() const noexcept { return matrix.half_trace(); }
    // y2(T; eps, r). Equals the half-trace when a(t) is even.
    double y2() const noexcept { return matrix.y2; }
};

/// Period pi is admitted only for epsilon = 0, where the field is pi-periodic.
Monodromy monodromy(Equilibrium eq, const ModelParams& params, Period period = Period::two_pi,
                    const ode::Options& options = monodromy_options());

using ComplexPair = std::pair<std::complex<double>, std::complex<double>>;

inline constexpr double monodromy_det_tolerance = 1e-6;
inline constexpr double default_parabolic_band = 1e-9;
inline constexpr double max_parabolic_band = 1e-3;

/// lambda = h +- sqrt(h^2 - 1); complex conjugate pair when |h| < 1.
ComplexPair multipliers_from_half_trace(double h);

/// Throws solver_error if |det - 1| > monodromy_det_tolerance.
ComplexPair multipliers(const Monodromy& m);

enum class StabilityClass { elliptic, parabolic, hyperbolic };
std::string_view to_string(StabilityClass c) noexcept;

// Sub-classification of the parabolic case from the off-diagonal entries:
// `diagonal` means two independent eigenvectors (monodromy = +-I, stable),
// `jordan` a single eigenvector (secular growth).
enum class ParabolicKind { none, diagonal, jordan };
std::string_view to_string(ParabolicKind k) noexcept;

struct StabilityVerdict {
    StabilityClass cls = StabilityClass::hyperbolic;
    ComplexPair multipliers;
    ComplexPair exponents; // principal log(lambda) / T
    bool strongly_stable = false;
    double half_trace = 0;
    ParabolicKind parabolic_kind = ParabolicKind::none;
    // +1 (lambda = 1, T-periodic solution), -1 (lambda = -1, 2T-periodic), 0 otherwise.
    int parabolic_sign = 0;
};

/// elliptic if |h| < 1 - delta_par, parabolic if ||h| - 1| <= delta_par,
/// hyperbolic otherwise. delta_par must lie in (0, 1e-3].
StabilityVerdict classify(const Monodromy& m, double delta_par = default_parabolic_band);

struct OrtegaCheck {
    StabilityVerdict linear;
    bool linear_stable = false; // elliptic, or parabolic with monodromy = +-I
    double cubic_min = 0;
    double cubic_max = 0;
    bool cubic_sign_definite = false;
    bool passed = false;
};

/// Hypotheses of Ortega's stability theorem at the origin for epsilon = 0:
/// stable linear part and a cubic coefficient of one sign over the period.
OrtegaCheck ortega_hypotheses(const ModelParams& params, double delta_par = default_parabolic_band,
                              const ode::Options& options = monodromy_options());

// Winding of the phase vector z = x + i x' along a solution of x'' + a x = 0.

enum class WindingMethod { phase_equation, tracked_argument };

inline constexpr double default_winding_tol = 1e-12;

/// Continuous increment of arg z over [t0, t1] starting from z(t0) = z0.
///
/// phase_equation integrates theta' = -(a cos^2 theta + sin^2 theta);
/// tracked_argument integrates the linear flow and accumulates principal
/// arguments between densely spaced samples. Throws solver_error if z reaches 0.
double winding_angle(const Coefficient& a, double t0, double t1, std::complex<double> z0,
                     WindingMethod method = WindingMethod::phase_equation,
                     const ode::Options& options = monodromy_options(default_winding_tol));

/// Sampled minimum of a over [t0, t1], refined by golden section around the
/// best sample.
double coefficient_minimum(const Coefficient& a, double t0, double t1, int samples = 4096);

/// Rotation estimate -sqrt(a_min)(t1 - t0) + pi (requires a_min > 0).
double winding_bound(double a_min, double t0, double t1);

} // namespace csit
