#pragma once

#include <functional>
#include <optional>
#include <string>

#include "csit/integrate.hpp"
#include "csit/vec3.hpp"

namespace csit::curves {

// A massless particle on an arc-length curve x(s, lambda) attracted by a
// unit mass moving on a prescribed period-1 curve y(t, lambda).
//
// Conventions follow the single-mass setting: time has period 1, the
// particle obeys s'' + U'(s) = 0 and the linearization at s = 0 is the Hill
// equation S'' + U''(0, t) S = 0. The closest approach of the two curves
// must sit at s = t = 0.
//
// Derivative callbacks are optional; missing ones are replaced by central
// differences.
struct CurvePair {
    using Curve = std::function<Vec3(double, double)>;

    std::string family;
    Curve x, dx, ddx; // in s
    Curve y, dy, ddy; // in t
    double s_lo = -pi;
    double s_hi = pi;
    bool s_periodic = true;
    double lambda_lo = 0;
    double lambda_hi = 1;
    std::optional<double> c2_bound; // M: sup of |z| and its first two derivatives
    std::optional<double> taylor_k; // k: |z.z - delta^2| <= k t^2, |z.z'| <= k |t|

    Vec3 x_at(double s, double lambda) const { return x(s, lambda); }
    Vec3 dx_at(double s, double lambda) const;
    Vec3 ddx_at(double s, double lambda) const;
    Vec3 y_at(double t, double lambda) const { return y(t, lambda); }
    Vec3 dy_at(double t, double lambda) const;
    Vec3 ddy_at(double t, double lambda) const;
};

inline constexpr double default_collision_guard = 1e-9;

/// U = -1/|x(s) - y(t)|. Throws collision_error below d_min.
double pair_potential(double s, double t, double lambda, const CurvePair& pair,
                      double d_min = default_collision_guard);

/// d^2U/ds^2 from the dot-product formula
///   [(z'.z' + z.z'')(z.z) - 3 (z.z')^2] / (z.z)^{5/2}.
double d2U_ds2(double t, double lambda, const CurvePair& pair, double s = 0);

struct MinDistance {
    double delta = 0;
    double s = 0;
    double t = 0;
    bool at_origin = false; // argmin within one grid cell of (0, 0)
};

/// Grid search over s and one period of t, then pattern-search refinement.
/// Throws config_error when the minimum lands on the boundary of a
/// non-periodic s range.
MinDistance min_distance(double lambda, const CurvePair& pair, int grid = 256);

inline constexpr double lower_bound_constant = 0.044194173824159216; // 2^{-9/2}

struct BoundReport {
    double lambda = 0;
    double delta = 0;
    double M = 0;
    double k = 0;
    bool M_supplied = false;
    bool k_supplied = false;
    double c = 0;   // min(k^{-1/2}, (k sqrt 6)^{-1}); +inf when k = 0
    double tau = 0; // c delta, clamped to half a period
    bool tau_clamped = false;
    double a_min = 0; // min of U''(0, t) over |t| <= tau
    double lower_bound = 0; // c1 / delta^3
    bool bound_ok = false;
    double tau_sqrt_a_min = 0;
    double winding_estimate = 0; // -2 tau sqrt(a_min) + pi
    // 1/2 delta^2 - sqrt(2) M delta^3 > 1/4 delta^2, the smallness the
    // lower bound relies on.
    bool numerator_bound_ok = false;
};

BoundReport bound_report(double lambda, const CurvePair& pair);

// Which primary of the curved Sitnikov binary plays the role of y(t).
// `near` reaches the antipode q = pi at its apocenter; `far` is the other one.
enum class SitnikovPrimary { near, far };

/// Circle of radius 1 through the barycenter, s = 0 at the antipode
/// (0, -1, 0); y is the chosen primary with lambda = r and period-1 time
/// tau = (t - pi)/(2 pi), so tau = 0 is the apocenter passage of the near
/// primary.
CurvePair sitnikov_instantiation(double epsilon, SitnikovPrimary which = SitnikovPrimary::near);

/// r for which the minimum distance 2 - r(1+epsilon) equals delta.
double sitnikov_lambda_for_delta(double delta, double epsilon);

/// Model time t -> curve-pair time tau = (t - pi)/(2 pi).
double section_time(double model_time) noexcept;

/// Sum of U''(0, tau(t)) over both primaries, as a function of model time.
/// Equals the model's Hill coefficient at the antipode.
Coefficient sitnikov_hill_from_pairs(const ModelParams& params);

/// x(s) = (s, 0, 0), y = (0, lambda, 0). Minimum distance lambda.
CurvePair line_fixture(double half_length = 4.0);

/// x(s) = (s, 0, 0), y(t) = (0, lambda + A(1 - cos 2 pi t), B sin 2 pi t).
CurvePair oscillating_fixture(double A, double B, double half_length = 4.0);

struct Fixture {
    CurvePair pair;
    double lambda = 0;
};

/// Parses a declarative fixture: a JSON object naming a built-in family and
/// its parameters, e.g. {"family": "sitnikov", "epsilon": 0, "lambda": 1.8}.
/// Families: "sitnikov" (epsilon, optional "primary": "near"|"far"),
/// "line", "oscillating_point" (A, B). Optional "M" and "k" override the
/// estimated constants. "delta" may replace "lambda" for the sitnikov family.
Fixture parse_fixture(const std::string& json_text);

} // namespace csit::curves
