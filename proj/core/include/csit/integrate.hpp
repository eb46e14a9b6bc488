#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "csit/model.hpp"
#include "csit/ode.hpp"

namespace csit {

inline constexpr double default_monodromy_tol = 1e-10;
inline constexpr double default_orbit_tol = 1e-8;
inline constexpr double min_orbit_tol = 1e-13;
inline constexpr double max_orbit_tol = 1e-6;

inline ode::Options monodromy_options(double tol = default_monodromy_tol) {
    ode::Options o;
    o.tol = tol;
    return o;
}

inline ode::Options orbit_options(double tol = default_orbit_tol) {
    ode::Options o;
    o.tol = tol;
    return o;
}

struct TrajectorySample {
    double t = 0;
    ExtendedState state;
};

enum class Termination { completed, collision, step_underflow };

std::string_view to_string(Termination t) noexcept;

struct Trajectory {
    std::vector<TrajectorySample> samples; // strictly increasing t
    double tol = 0;
    ode::Method method = ode::Method::adaptive;
    ode::Stats stats;
    Termination termination = Termination::completed;
    std::string message;

    bool complete() const noexcept { return termination == Termination::completed; }
};

/// Integrates the extended field from `initial` (at time initial.s) up to
/// t_final.
///
/// With no sample_times every accepted step is recorded; otherwise the state
/// is interpolated at each requested time from the step's dense output.
/// Either way the first and last samples sit at initial.s and t_final. A
/// collision or step underflow ends the run early: the partial trajectory is
/// returned with `termination` set and the reason in `message`.
Trajectory integrate_orbit(const ExtendedState& initial, double t_final, const ModelParams& params,
                           const ode::Options& options = orbit_options(),
                           std::span<const double> sample_times = {});

// Fundamental matrix X(t) of v' = A(t) v, A = [[0, 1], [-a(t), 0]], X(0) = I:
//   | x1  x2 |
//   | y1  y2 |
struct FundamentalMatrix {
    double t = 0;
    double x1 = 1;
    double x2 = 0;
    double y1 = 0;
    double y2 = 1;

    double det() const noexcept { return x1 * y2 - x2 * y1; }
    double trace() const noexcept { return x1 + y2; }
    double half_trace() const noexcept { return 0.5 * (x1 + y2); }
    FundamentalMatrix operator*(const FundamentalMatrix& o) const noexcept {
        return {t + o.t, x1 * o.x1 + x2 * o.y1, x1 * o.x2 + x2 * o.y2, y1 * o.x1 + y2 * o.y1, y1 * o.x2 + y2 * o.y2};
    }
};

using Coefficient = std::function<double(double)>;

/// X(t1) for S'' + a(t) S = 0 started from X(t0) = I.
FundamentalMatrix integrate_hill(const Coefficient& a, double t0, double t1,
                                 const ode::Options& options = monodromy_options());

/// Linearized flow at an equilibrium over [0, period].
FundamentalMatrix integrate_variational(Equilibrium eq, const ModelParams& params, double period,
                                        const ode::Options& options = monodromy_options());

} // namespace csit
