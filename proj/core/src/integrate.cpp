#include "csit/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "csit/errors.hpp"

namespace csit {

std::string_view to_string(Termination t) noexcept {
    switch (t) {
    case Termination::completed:
        return "completed";
    case Termination::collision:
        return "collision";
    case Termination::step_underflow:
        return "step_underflow";
    }
    return "unknown";
}

namespace {

void check_orbit_options(const ode::Options& options) {
    if (options.method == ode::Method::adaptive && !(options.tol >= min_orbit_tol && options.tol <= max_orbit_tol))
        throw config_error("orbit tolerance must lie in [1e-13, 1e-6]");
}

ExtendedState to_state(const ode::Vec<3>& v) { return {v[0], v[1], v[2]}; }

} // namespace

Trajectory integrate_orbit(const ExtendedState& initial, double t_final, const ModelParams& params,
                           const ode::Options& options, std::span<const double> sample_times) {
    params.validate();
    check_orbit_options(options);
    const double t0 = initial.s;
    if (!(t_final >= t0))
        throw config_error("t_final must not precede the initial phase time");
    if (!std::is_sorted(sample_times.begin(), sample_times.end()))
        throw config_error("sample times must be sorted");
    if (!sample_times.empty() && (sample_times.front() < t0 || sample_times.back() > t_final))
        throw config_error("sample times must lie within [initial.s, t_final]");

    Trajectory traj;
    traj.tol = options.tol;
    traj.method = options.method;
    traj.samples.push_back({t0, initial});

    auto push = [&](double t, const ExtendedState& s) {
        if (t > traj.samples.back().t)
            traj.samples.push_back({t, s});
    };

    std::size_t next = 0;
    auto observer = [&](const ode::DenseStep<3>& step) {
        if (sample_times.empty()) {
            push(step.t1, to_state(step(step.t1)));
            return;
        }
        while (next < sample_times.size() && sample_times[next] <= step.t1) {
            push(sample_times[next], to_state(step(sample_times[next])));
            ++next;
        }
    };
    auto rhs = [&](double t, const ode::Vec<3>& y) -> ode::Vec<3> {
        (void)t;
        return {y[1], tangential_force(y[0], y[2], params), 1.0};
    };

    ode::Vec<3> y{initial.q, initial.p, initial.s};
    ode::Stats stats;
    try {
        stats = ode::integrate<3>(rhs, y, t0, t_final, options, observer);
    } catch (const collision_error& e) {
        traj.termination = Termination::collision;
        traj.message = e.what();
        return traj;
    } catch (const solver_error& e) {
        traj.termination = Termination::step_underflow;
        traj.message = e.what();
        return traj;
    }
    traj.stats = stats;
    // Pin the endpoint to the integrator's final state rather than the interpolant.
    if (traj.samples.back().t == t_final)
        traj.samples.back().state = to_state(y);
    else
        traj.samples.push_back({t_final, to_state(y)});
    return traj;
}

FundamentalMatrix integrate_hill(const Coefficient& a, double t0, double t1, const ode::Options& options) {
    auto rhs = [&](double t, const ode::Vec<4>& v) -> ode::Vec<4> {
        const double at = a(t);
        return {v[1], -at * v[0], v[3], -at * v[2]};
    };
    ode::Vec<4> v{1, 0, 0, 1};
    ode::integrate<4>(rhs, v, t0, t1, options);
    return {t1 - t0, v[0], v[2], v[1], v[3]};
}

FundamentalMatrix integrate_variational(Equilibrium eq, const ModelParams& params, double period,
                                        const ode::Options& options) {
    const HillCoefficient a(eq, params);
    if (!(period > 0))
        throw config_error("period must be positive");
    auto rhs = [&](double t, const ode::Vec<4>& v) -> ode::Vec<4> {
        const double at = a(t);
        return {v[1], -at * v[0], v[3], -at * v[2]};
    };
    ode::Vec<4> v{1, 0, 0, 1};
    ode::integrate<4>(rhs, v, 0.0, period, options);
    return {period, v[0], v[2], v[1], v[3]};
}

} // namespace csit
