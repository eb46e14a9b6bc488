#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csit/floquet.hpp"

namespace csit {

inline constexpr double default_collision_margin = 1e-4;
inline constexpr double default_eps_cap = 0.95;
inline constexpr double default_refine_tol = 1e-7;
inline constexpr double default_touch_band = 1e-6;

enum class ScanVariable { r, epsilon };
std::string_view to_string(ScanVariable v) noexcept;

struct ScanOptions {
    Period period = Period::two_pi;
    ode::Options ode = monodromy_options();
    double collision_margin = default_collision_margin;
    double parabolic_band = default_parabolic_band;
    double touch_band = default_touch_band; // |h| - 1 at a refined extremum counted as a tangency
    unsigned threads = 0;                   // 0: hardware concurrency
};

struct TracePoint {
    double x = 0; // r or epsilon, depending on the curve
    double half_trace = 0;
    double det = 1;
    double x1 = 1;
    double y2 = 1;
    std::string note; // e.g. high-eccentricity warning
};

struct SkippedPoint {
    double x = 0;
    std::string reason;
};

struct TraceCurve {
    Equilibrium q_star = Equilibrium::antipode;
    ScanVariable variable = ScanVariable::r;
    double epsilon = 0; // fixed epsilon of an r-curve
    double r = 0;       // fixed r of an epsilon-curve
    Period period = Period::two_pi;
    double tol = 0;
    ode::Method method = ode::Method::adaptive;
    std::vector<TracePoint> samples; // strictly increasing x
    std::vector<SkippedPoint> skipped;
};

/// Half-trace of the monodromy at every grid value of r. Points outside the
/// collision guard r < 2/(1+eps) - margin, or whose integration fails, are
/// skipped and recorded. The grid must be strictly increasing.
TraceCurve trace_curve(Equilibrium q_star, double epsilon, std::span<const double> r_grid,
                       const ScanOptions& options = {});

/// Half-trace of the origin's monodromy against epsilon at fixed r.
/// The grid must lie in [0, eps_cap] and be strictly increasing.
TraceCurve eps_scan_origin(double r, std::span<const double> eps_grid, const ScanOptions& options = {},
                           double eps_cap = default_eps_cap);

struct StabilityInterval {
    double lo = 0;
    double hi = 0;
    StabilityClass cls = StabilityClass::hyperbolic;
    bool strongly_stable = false;
};

enum class TransitionKind { crossing, tangency };
std::string_view to_string(TransitionKind k) noexcept;

struct Transition {
    double lo = 0; // bracket
    double hi = 0;
    TransitionKind kind = TransitionKind::crossing;
    // +1 when |h| - 1 goes from negative to positive with increasing r.
    int direction = 0;
    double width() const noexcept { return hi - lo; }
    double location() const noexcept { return 0.5 * (lo + hi); }
};

// A grid cell where |h| - 1 changes sign twice between samples.
struct FlaggedCell {
    double lo = 0;
    double hi = 0;
    std::string reason;
};

struct StabilityIntervals {
    Equilibrium q_star = Equilibrium::antipode;
    double epsilon = 0;
    Period period = Period::two_pi;
    double refine_tol = 0;
    std::vector<StabilityInterval> intervals;
    std::vector<Transition> transitions;
    std::vector<FlaggedCell> flagged;
    std::int64_t evaluations = 0; // monodromies computed during refinement

    std::size_t crossing_count() const noexcept;
    std::size_t strongly_stable_count() const noexcept;
};

/// Brackets each sign change of |h| - 1 between neighbouring samples and
/// bisects it on fresh monodromies until the bracket is at most refine_tol.
/// Interior local minima of ||h| - 1| are refined as well: a tangency with
/// ||h| - 1| <= touch_band is reported as a parabolic point, a hidden pair
/// of crossings is resolved and its cell flagged.
StabilityIntervals find_transitions(const TraceCurve& curve, double refine_tol = default_refine_tol,
                                    const ScanOptions& options = {});

struct CensusOptions {
    ScanOptions scan;
    double r_min_fraction = 0.95; // lower end of the scan as a fraction of the ceiling
    int initial_points = 257;
    int max_levels = 12;
};

struct CensusResult {
    int count = 0; // maximal runs of strongly stable grid points
    StabilityIntervals intervals; // brackets are grid cells
    TraceCurve curve;
    std::int64_t evaluations = 0;
    std::int64_t budget = 0;
    bool budget_exhausted = false;
    bool converged = false; // count unchanged by the last refinement
    int levels = 0;
    double r_lo = 0;
    double r_hi = 0;
};

/// Counts stability interchanges on a grid geometric in 2/(1+eps) - r,
/// doubling it by nested refinement until the count settles or `budget`
/// monodromies have been spent. Refinement only adds points, so the count
/// never decreases with the budget.
CensusResult interchange_census(double epsilon, double r_max_fraction, std::int64_t budget,
                                const CensusOptions& options = {});

} // namespace csit
