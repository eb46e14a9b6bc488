#pragma once

#include "csit/vec3.hpp"

namespace csit {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2 * pi;

// Circle radius; every quantity in the toolkit is expressed with R = 1.
inline constexpr double circle_radius = 1.0;

// Above this eccentricity the O(eps^2) series for rho diverges. The exact
// Kepler solve used here does not care; the flag is informational.
inline constexpr double series_eccentricity_limit = 0.6627;

/// Parameters of the curved Sitnikov model: semi-major axis r of the
/// primaries' ellipses and their eccentricity epsilon (R fixed to 1).
///
/// A valid parameter pair satisfies 0 < r < 2/(1+epsilon) and
/// 0 <= epsilon < 1. Beyond the collision ceiling 2/(1+epsilon) the apocenter
/// of a primary crosses the particle's circle.
struct ModelParams {
    double r = 1.0;
    double epsilon = 0.0;

    /// Builds and validates; throws config_error naming the failing constraint.
    static ModelParams make(double r, double epsilon);

    /// Throws config_error if the pair violates the validity window.
    void validate() const;
    bool valid() const noexcept;

    /// 2R/(1+epsilon).
    double collision_ceiling() const noexcept { return 2 * circle_radius / (1 + epsilon); }
    /// Apocenter-to-antipode distance 2 - r(1+epsilon).
    double min_distance() const noexcept { return 2 * circle_radius - r * (1 + epsilon); }
    bool high_eccentricity() const noexcept { return epsilon >= series_eccentricity_limit; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

namespace kepler {

inline constexpr int max_iterations = 64;
inline constexpr double residual_tolerance = 1e-13;

/// Eccentric anomaly u solving u - e sin u = M.
///
/// M is reduced to [0, 2pi) before the solve and the branch is restored
/// afterwards, so u(M) is continuous and increasing on the whole real line.
/// Safeguarded Newton from u0 = M + e sin M, bisecting whenever a Newton step
/// leaves the current bracket. Throws config_error for e outside [0, 1) and
/// solver_error if the residual is still above tolerance after
/// max_iterations.
double solve(double mean_anomaly, double epsilon);

/// rho = 1 - e cos u(t).
double radial_factor(double t, double epsilon);

struct RadialDerivatives {
    double rho;
    double drho_dt;
    double d2rho_dt2;
};

/// rho and its first two time derivatives (du/dt = 1/(1 - e cos u)).
RadialDerivatives radial_factor_derivatives(double t, double epsilon);

} // namespace kepler

struct PrimaryEphemeris {
    double t = 0;   // mean anomaly, period 2pi
    double u = 0;   // eccentric anomaly
    double rho = 1; // 1 - e cos u
    Vec3 x1;
    Vec3 x2;
};

/// Positions x1 = (r rho sin t, R + r rho cos t, 0), x2 = (-r rho sin t, R - r rho cos t, 0).
/// The polar angle is t itself, not the true anomaly.
PrimaryEphemeris primary_positions(double t, const ModelParams& params);

} // namespace csit
