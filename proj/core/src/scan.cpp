#include "csit/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "csit/errors.hpp"
#include "parallel.hpp"

namespace csit {

std::string_view to_string(ScanVariable v) noexcept { return v == ScanVariable::r ? "r" : "epsilon"; }

std::string_view to_string(TransitionKind k) noexcept {
    return k == TransitionKind::crossing ? "crossing" : "tangency";
}

std::size_t StabilityIntervals::crossing_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(transitions.begin(), transitions.end(),
                                                  [](const Transition& t) { return t.kind == TransitionKind::crossing; }));
}

std::size_t StabilityIntervals::strongly_stable_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(intervals.begin(), intervals.end(), [](const StabilityInterval& i) { return i.strongly_stable; }));
}

namespace {

void check_increasing(std::span<const double> grid, const char* what) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw config_error(std::string(what) + " grid must be strictly increasing");
}

void check_scan_options(const ScanOptions& o) {
    if (!(o.collision_margin >= 0))
        throw config_error("collision margin must be non-negative");
    if (!(o.parabolic_band > 0 && o.parabolic_band <= max_parabolic_band))
        throw config_error("parabolic band must lie in (0, 1e-3]");
    if (!(o.touch_band >= 0))
        throw config_error("touch band must be non-negative");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

TracePoint evaluate(Equilibrium eq, const ModelParams& params, double x, const ScanOptions& o) {
    const Monodromy m = monodromy(eq, params, o.period, o.ode);
    TracePoint p;
    p.x = x;
    p.half_trace = m.half_trace();
    p.det = m.matrix.det();
    p.x1 = m.matrix.x1;
    p.y2 = m.matrix.y2;
    if (params.high_eccentricity())
        p.note = "high eccentricity";
    return p;
}

ModelParams params_at(const TraceCurve& c, double x) {
    return c.variable == ScanVariable::r ? ModelParams{x, c.epsilon} : ModelParams{c.r, x};
}

// Evaluates every admissible grid point concurrently and merges in grid order.
TraceCurve run_grid(TraceCurve curve, std::span<const double> grid, const ScanOptions& o) {
    std::vector<std::optional<TracePoint>> done(grid.size());
    std::vector<std::string> reasons(grid.size());
    detail::parallel_for(grid.size(), o.threads, [&](std::size_t i) {
        const double x = grid[i];
        const ModelParams p = params_at(curve, x);
        const double limit = p.collision_ceiling() - o.collision_margin;
        if (!(p.r > 0) || !(p.r < limit)) {
            reasons[i] = "collision guard: r must lie in (0, " + fmt(limit) + ")";
            return;
        }
        try {
            done[i] = evaluate(curve.q_star, p, x, o);
        } catch (const collision_error& e) {
            reasons[i] = e.what();
        } catch (const solver_error& e) {
            reasons[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (done[i])
            curve.samples.push_back(std::move(*done[i]));
        else
            curve.skipped.push_back({grid[i], reasons[i]});
    }
    return curve;
}

int side(double g) { return g > 0 ? 1 : -1; }
double gap(double h) { return std::abs(h) - 1; }

} // namespace

TraceCurve trace_curve(Equilibrium q_star, double epsilon, std::span<const double> r_grid, const ScanOptions& options) {
    check_scan_options(options);
    if (!(epsilon >= 0 && epsilon < 1))
        throw config_error("epsilon must lie in [0, 1)");
    if (options.period == Period::pi && epsilon != 0)
        throw config_error("period pi requires epsilon = 0");
    check_increasing(r_grid, "r");
    TraceCurve c;
    c.q_star = q_star;
    c.variable = ScanVariable::r;
    c.epsilon = epsilon;
    c.period = options.period;
    c.tol = options.ode.tol;
    c.method = options.ode.method;
    return run_grid(std::move(c), r_grid, options);
}

TraceCurve eps_scan_origin(double r, std::span<const double> eps_grid, const ScanOptions& options, double eps_cap) {
    check_scan_options(options);
    if (!(r > 0))
        throw config_error("r must be positive");
    if (!(eps_cap >= 0 && eps_cap < 1))
        throw config_error("epsilon cap must lie in [0, 1)");
    check_increasing(eps_grid, "epsilon");
    if (!eps_grid.empty() && (eps_grid.front() < 0 || eps_grid.back() > eps_cap))
        throw config_error("epsilon grid must lie in [0, " + fmt(eps_cap) + "]");
    if (options.period == Period::pi && !eps_grid.empty() && eps_grid.back() != 0)
        throw config_error("period pi requires epsilon = 0");
    TraceCurve c;
    c.q_star = Equilibrium::origin;
    c.variable = ScanVariable::epsilon;
    c.r = r;
    c.period = options.period;
    c.tol = options.ode.tol;
    c.method = options.ode.method;
    return run_grid(std::move(c), eps_grid, options);
}

namespace {

struct Refiner {
    const TraceCurve& curve;
    const ScanOptions& options;
    double refine_tol;
    std::atomic<std::int64_t>& evaluations;

    double g(double x) const {
        ++evaluations;
        return gap(evaluate(curve.q_star, params_at(curve, x), x, options).half_trace);
    }

    Transition bisect(double lo, double hi, int s_lo) const {
        while (hi - lo > refine_tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            if (side(g(mid)) == s_lo)
                lo = mid;
            else
                hi = mid;
        }
        return {lo, hi, TransitionKind::crossing, s_lo < 0 ? 1 : -1};
    }

    // Golden-section search for the extremum of |h| - 1 on one side of zero.
    // Returns the events found and, for a hidden pair of crossings, a flag.
    std::pair<std::vector<Transition>, std::optional<FlaggedCell>> extremum(double a, double b, int s) const {
        constexpr double inv_phi = 0.6180339887498949;
        const double a0 = a;
        const double b0 = b;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double gc = g(c);
        double gd = g(d);
        auto flipped = [&](double x, double gx) -> std::optional<double> {
            if (side(gx) != s)
                return x;
            return std::nullopt;
        };
        std::optional<double> cross = flipped(c, gc);
        if (!cross)
            cross = flipped(d, gd);
        while (!cross && b - a > refine_tol) {
            if (s * gc < s * gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - inv_phi * (b - a);
                gc = g(c);
                cross = flipped(c, gc);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + inv_phi * (b - a);
                gd = g(d);
                cross = flipped(d, gd);
            }
        }
        if (cross) {
            std::vector<Transition> pair{bisect(a0, *cross, s), bisect(*cross, b0, -s)};
            return {pair, FlaggedCell{a0, b0, "two crossings between neighbouring samples; refine the grid"}};
        }
        const double best = std::min(s * gc, s * gd);
        if (best <= options.touch_band)
            return {{Transition{a, b, TransitionKind::tangency, 0}}, std::nullopt};
        return {{}, std::nullopt};
    }
};

StabilityInterval make_interval(double lo, double hi, int s) {
    StabilityInterval iv;
    iv.lo = lo;
    iv.hi = hi;
    iv.cls = s < 0 ? StabilityClass::elliptic : StabilityClass::hyperbolic;
    iv.strongly_stable = s < 0;
    return iv;
}

} // namespace

StabilityIntervals find_transitions(const TraceCurve& curve, double refine_tol, const ScanOptions& options) {
    check_scan_options(options);
    if (curve.samples.size() < 2)
        throw config_error("find_transitions needs at least 2 samples");
    if (!(refine_tol > 0))
        throw config_error("refine tolerance must be positive");

    ScanOptions o = options;
    o.period = curve.period;

    const auto& s = curve.samples;
    const std::size_t n = s.size();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = gap(s[i].half_trace);

    enum class TaskKind { crossing, extremum };
    struct Task {
        TaskKind kind;
        std::size_t i;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (side(g[i]) != side(g[i + 1]))
            tasks.push_back({TaskKind::crossing, i});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool same = side(g[i - 1]) == side(g[i]) && side(g[i]) == side(g[i + 1]);
        if (same && std::abs(g[i]) <= std::abs(g[i - 1]) && std::abs(g[i]) < std::abs(g[i + 1]))
            tasks.push_back({TaskKind::extremum, i});
    }

    std::atomic<std::int64_t> evaluations{0};
    const Refiner refiner{curve, o, refine_tol, evaluations};
    std::vector<std::vector<Transition>> found(tasks.size());
    std::vector<std::optional<FlaggedCell>> flags(tasks.size());
    detail::parallel_for(tasks.size(), o.threads, [&](std::size_t k) {
        const std::size_t i = tasks[k].i;
        if (tasks[k].kind == TaskKind::crossing) {
            found[k] = {refiner.bisect(s[i].x, s[i + 1].x, side(g[i]))};
        } else {
            auto [events, flag] = refiner.extremum(s[i - 1].x, s[i + 1].x, side(g[i]));
            found[k] = std::move(events);
            flags[k] = std::move(flag);
        }
    });

    StabilityIntervals out;
    out.q_star = curve.q_star;
    out.epsilon = curve.epsilon;
    out.period = curve.period;
    out.refine_tol = refine_tol;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        out.transitions.insert(out.transitions.end(), found[k].begin(), found[k].end());
        if (flags[k])
            out.flagged.push_back(*flags[k]);
    }
    std::sort(out.transitions.begin(), out.transitions.end(),
              [](const Transition& a, const Transition& b) { return a.lo < b.lo; });
    std::sort(out.flagged.begin(), out.flagged.end(),
              [](const FlaggedCell& a, const FlaggedCell& b) { return a.lo < b.lo; });
    out.evaluations = evaluations.load();

    int current = side(g.front());
    double cur = s.front().x;
    for (const Transition& t : out.transitions) {
        out.intervals.push_back(make_interval(cur, t.lo, current));
        if (t.kind == TransitionKind::crossing) {
            current = -current;
        } else {
            StabilityInterval p;
            p.lo = t.lo;
            p.hi = t.hi;
            p.cls = StabilityClass::parabolic;
            out.intervals.push_back(p);
        }
        cur = t.hi;
    }
    out.intervals.push_back(make_interval(cur, s.back().x, current));
    return out;
}

CensusResult interchange_census(double epsilon, double r_max_fraction, std::int64_t budget,
                                const CensusOptions& options) {
    const ScanOptions& so = options.scan;
    check_scan_options(so);
    if (!(epsilon >= 0 && epsilon < 1))
        throw config_error("epsilon must lie in [0, 1)");
    if (so.period == Period::pi && epsilon != 0)
        throw config_error("period pi requires epsilon = 0");
    if (!(r_max_fraction < 1))
        throw config_error("r_max_fraction must be below 1");
    if (!(options.r_min_fraction > 0 && options.r_min_fraction < r_max_fraction))
        throw config_error("r_min_fraction must lie in (0, r_max_fraction)");
    if (!(budget > 0))
        throw config_error("budget must be positive");
    if (options.initial_points < 2)
        throw config_error("census needs at least 2 initial points");
    if (options.max_levels < 0)
        throw config_error("max_levels must be non-negative");

    const double ceiling = ModelParams{1, epsilon}.collision_ceiling();
    CensusResult res;
    res.budget = budget;
    res.r_lo = options.r_min_fraction * ceiling;
    res.r_hi = std::min(r_max_fraction * ceiling, ceiling - so.collision_margin);
    if (!(res.r_lo < res.r_hi))
        throw config_error("census range is empty below the collision margin");

    const double d_hi = ceiling - res.r_lo;
    const double d_lo = ceiling - res.r_hi;
    const double log_ratio = std::log(d_lo / d_hi);

    TraceCurve base;
    base.q_star = Equilibrium::antipode;
    base.variable = ScanVariable::r;
    base.epsilon = epsilon;
    base.period = so.period;
    base.tol = so.ode.tol;
    base.method = so.ode.method;

    // Keyed by r so refinement levels interleave in order.
    std::map<double, TracePoint> points;
    std::map<double, std::string> failures;

    auto stable = [&](const TracePoint& p) { return std::abs(p.half_trace) < 1 - so.parabolic_band; };
    auto count_runs = [&] {
        int count = 0;
        bool prev = false;
        for (const auto& [r, p] : points) {
            const bool st = stable(p);
            if (st && !prev)
                ++count;
            prev = st;
        }
        return count;
    };

    std::int64_t nodes = options.initial_points - 1; // cells at the current level
    int prev_count = -1;
    for (int level = 0; level <= options.max_levels; ++level) {
        std::vector<double> fresh;
        const std::int64_t step = level == 0 ? 1 : 2;
        const std::int64_t first = level == 0 ? 0 : 1;
        for (std::int64_t j = first; j <= nodes; j += step) {
            const double frac = static_cast<double>(j) / static_cast<double>(nodes);
            fresh.push_back(j == nodes ? res.r_hi : j == 0 ? res.r_lo : ceiling - d_hi * std::exp(frac * log_ratio));
        }
        const std::int64_t remaining = budget - res.evaluations;
        if (static_cast<std::int64_t>(fresh.size()) > remaining) {
            fresh.resize(static_cast<std::size_t>(std::max<std::int64_t>(remaining, 0)));
            res.budget_exhausted = true;
        }
        const TraceCurve part = run_grid(base, fresh, so);
        res.evaluations += static_cast<std::int64_t>(fresh.size());
        for (const auto& p : part.samples)
            points[p.x] = p;
        for (const auto& sk : part.skipped)
            failures[sk.x] = sk.reason;
        res.levels = level + 1;
        res.count = count_runs();
        if (res.budget_exhausted)
            break;
        if (level > 0 && res.count == prev_count) {
            res.converged = true;
            break;
        }
        prev_count = res.count;
        nodes *= 2;
    }

    res.curve = base;
    for (auto& [r, p] : points)
        res.curve.samples.push_back(p);
    for (auto& [r, why] : failures)
        res.curve.skipped.push_back({r, why});

    StabilityIntervals& iv = res.intervals;
    iv.q_star = Equilibrium::antipode;
    iv.epsilon = epsilon;
    iv.period = so.period;
    const auto& smp = res.curve.samples;
    if (!smp.empty()) {
        std::size_t start = 0;
        for (std::size_t i = 1; i <= smp.size(); ++i) {
            if (i < smp.size() && stable(smp[i]) == stable(smp[start]))
                continue;
            StabilityInterval run = make_interval(smp[start].x, smp[i - 1].x, stable(smp[start]) ? -1 : 1);
            iv.intervals.push_back(run);
            if (i < smp.size()) {
                Transition t{smp[i - 1].x, smp[i].x, TransitionKind::crossing, stable(smp[start]) ? 1 : -1};
                iv.transitions.push_back(t);
            }
            start = i;
        }
    }
    return res;
}

} // namespace csit
