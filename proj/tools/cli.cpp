#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "csit/errors.hpp"
#include "csit/general_model.hpp"
#include "csit/io.hpp"
#include "csit/poincare.hpp"
#include "csit/scan.hpp"
#include "csit/verify.hpp"

namespace csit::cli {

using io::json;

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw config_error("grid '" + text + "': '" + s + "' is not a number");
        }
    };
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    if (parts.size() == 1)
        return {number(parts[0])};
    if (parts.size() != 3)
        throw config_error("grid '" + text + "' must have the form lo:hi:step");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0))
        throw config_error("grid '" + text + "': step must be positive");
    if (!(hi >= lo))
        throw config_error("grid '" + text + "': hi must not be below lo");
    const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    if (n > 10'000'000)
        throw config_error("grid '" + text + "' has too many points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long long i = 0; i <= n; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

namespace {

struct Integrator {
    double tol = 0;
    int fixed_step = 0;

    ode::Options options() const {
        ode::Options o;
        o.tol = tol;
        if (fixed_step > 0) {
            o.method = ode::Method::fixed_step;
            o.fixed_steps_per_period = fixed_step;
        } else if (fixed_step < 0) {
            throw config_error("--fixed-step must be positive");
        }
        return o;
    }
};

void add_integrator(CLI::App* sub, Integrator& in, double default_tol) {
    in.tol = default_tol;
    sub->add_option("--tol", in.tol, "Integrator tolerance")->capture_default_str();
    sub->add_option("--fixed-step", in.fixed_step, "Use fixed-step RK4 with N steps per 2pi (0: adaptive)")
        ->capture_default_str();
}

json run_config(const CLI::App& app, const CLI::App& sub) {
    json cfg;
    cfg["command"] = sub.get_name();
    for (const CLI::App* a : {&app, &sub}) {
        for (const CLI::Option* opt : a->get_options()) {
            if (opt->get_lnames().empty() || opt->get_name() == "--help")
                continue;
            std::string key = opt->get_lnames().front();
            std::string value;
            if (opt->count() > 0) {
                for (const auto& r : opt->results())
                    value += (value.empty() ? "" : " ") + r;
                if (value.empty())
                    value = "true";
            } else {
                value = opt->get_default_str();
            }
            cfg[key] = value;
        }
    }
    return cfg;
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (path.empty())
        return;
    if (path == "-") {
        write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw config_error("cannot open output file '" + path + "'");
    write(f);
    if (!f)
        throw config_error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw config_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void print_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Curved Sitnikov problem: orbits, Floquet stability and parameter scans"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads for scans (0: all cores)")->capture_default_str();

    double r = 1.0;
    double eps = 0.0;
    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--r", r, "Semi-major axis of the primaries")->capture_default_str();
        sub->add_option("--eps", eps, "Eccentricity")->capture_default_str();
    };

    // kepler
    auto* kep = app.add_subcommand("kepler", "Ephemeris table of the primaries");
    add_params(kep);
    double k_t0 = 0, k_t1 = two_pi;
    int k_n = 65;
    std::string k_out = "-";
    kep->add_option("--t0", k_t0)->capture_default_str();
    kep->add_option("--t1", k_t1)->capture_default_str();
    kep->add_option("--n", k_n, "Number of rows")->capture_default_str();
    kep->add_option("--output", k_out, "CSV path, '-' for stdout")->capture_default_str();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Integrate one orbit and write t,q,p,s");
    add_params(sim);
    Integrator sim_int;
    add_integrator(sim, sim_int, default_orbit_tol);
    double q0 = 0.5, p0 = 0, s0 = 0, t_final = 10 * two_pi;
    int sim_samples = 0;
    std::string sim_out = "-";
    sim->add_option("--q0", q0)->capture_default_str();
    sim->add_option("--p0", p0)->capture_default_str();
    sim->add_option("--s0", s0, "Initial phase time")->capture_default_str();
    sim->add_option("--t-final", t_final)->capture_default_str();
    sim->add_option("--samples", sim_samples, "Uniform output samples (0: every accepted step)")
        ->capture_default_str();
    sim->add_option("--output", sim_out, "CSV path, '-' for stdout")->capture_default_str();

    // floquet
    auto* flo = app.add_subcommand("floquet", "Monodromy and stability verdict at an equilibrium");
    add_params(flo);
    Integrator flo_int;
    add_integrator(flo, flo_int, default_monodromy_tol);
    std::string qstar = "pi", period = "2pi", flo_out = "-";
    double delta_par = default_parabolic_band;
    flo->add_option("--qstar", qstar, "Equilibrium: 0 or pi")->capture_default_str();
    flo->add_option("--period", period, "pi (epsilon = 0 only) or 2pi")->capture_default_str();
    flo->add_option("--delta-par", delta_par, "Parabolic band")->capture_default_str();
    flo->add_option("--output", flo_out, "JSON path, '-' for stdout")->capture_default_str();

    // scan
    auto* scn = app.add_subcommand("scan", "Half-trace curve and stability intervals");
    add_params(scn);
    Integrator scn_int;
    add_integrator(scn, scn_int, default_monodromy_tol);
    std::string scn_qstar = "pi", scn_period = "2pi", r_grid = "0.1:1.4:0.002", eps_grid, scn_csv = "-", scn_json;
    double refine_tol = default_refine_tol, margin = default_collision_margin, eps_cap = default_eps_cap;
    scn->add_option("--qstar", scn_qstar)->capture_default_str();
    scn->add_option("--period", scn_period)->capture_default_str();
    scn->add_option("--r-grid", r_grid, "r grid lo:hi:step")->capture_default_str();
    scn->add_option("--eps-grid", eps_grid, "Scan epsilon at fixed --r (origin only)");
    scn->add_option("--refine-tol", refine_tol)->capture_default_str();
    scn->add_option("--margin", margin, "Collision margin below 2/(1+eps)")->capture_default_str();
    scn->add_option("--eps-cap", eps_cap)->capture_default_str();
    scn->add_option("--csv", scn_csv, "Trace CSV path, '-' for stdout")->capture_default_str();
    scn->add_option("--json", scn_json, "Intervals JSON path");

    // census
    auto* cen = app.add_subcommand("census", "Count stability interchanges near the collision ceiling");
    cen->add_option("--eps", eps)->capture_default_str();
    Integrator cen_int;
    add_integrator(cen, cen_int, 1e-9);
    double fraction = 0.9995, min_fraction = 0.95;
    long long budget = 100000;
    int initial_points = 257;
    std::string cen_period = "2pi", cen_json = "-", cen_csv;
    cen->add_option("--fraction", fraction, "Upper end as a fraction of 2/(1+eps)")->capture_default_str();
    cen->add_option("--min-fraction", min_fraction, "Lower end as a fraction of 2/(1+eps)")->capture_default_str();
    cen->add_option("--budget", budget, "Maximum number of monodromies")->capture_default_str();
    cen->add_option("--initial-points", initial_points)->capture_default_str();
    cen->add_option("--period", cen_period)->capture_default_str();
    cen->add_option("--json", cen_json, "Census JSON path, '-' for stdout")->capture_default_str();
    cen->add_option("--csv", cen_csv, "Trace CSV path");

    // poincare
    auto* poi = app.add_subcommand("poincare", "Stroboscopic section at s = 0 mod 2pi");
    add_params(poi);
    Integrator poi_int;
    add_integrator(poi, poi_int, default_orbit_tol);
    std::string q_grid = "0.1:1.5:0.2", p_grid = "0", poi_csv = "-", poi_manifest;
    int iterates = 500;
    poi->add_option("--q-grid", q_grid, "Initial q values lo:hi:step")->capture_default_str();
    poi->add_option("--p-grid", p_grid, "Initial p values lo:hi:step")->capture_default_str();
    poi->add_option("--iterates", iterates)->capture_default_str();
    poi->add_option("--csv", poi_csv, "Section CSV path, '-' for stdout")->capture_default_str();
    poi->add_option("--manifest", poi_manifest, "JSON manifest path");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Rotation bound report for a curve pair");
    std::string fixture_path, family = "sitnikov", primary = "near", bnd_out = "-";
    double lambda = NAN, delta = NAN, A = 0, B = 0, M = NAN, k = NAN;
    bnd->add_option("--fixture", fixture_path, "JSON fixture file");
    bnd->add_option("--family", family, "sitnikov, line or oscillating_point")->capture_default_str();
    bnd->add_option("--lambda", lambda);
    bnd->add_option("--delta", delta, "Minimum distance (sitnikov)");
    bnd->add_option("--eps", eps)->capture_default_str();
    bnd->add_option("--primary", primary, "near or far")->capture_default_str();
    bnd->add_option("--A", A)->capture_default_str();
    bnd->add_option("--B", B)->capture_default_str();
    bnd->add_option("--M", M, "Override the C2 bound");
    bnd->add_option("--k", k, "Override the Taylor constant");
    bnd->add_option("--output", bnd_out, "JSON path, '-' for stdout")->capture_default_str();

    // verify
    auto* ver = app.add_subcommand("verify", "Run the invariant suite");
    std::uint64_t seed = verify::SuiteOptions{}.seed;
    ver->add_option("--seed", seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : config_failure;
    }

    try {
        if (*kep) {
            const ModelParams params = ModelParams::make(r, eps);
            if (k_n < 1)
                throw config_error("--n must be at least 1");
            const json cfg = run_config(app, *kep);
            emit(k_out, out, [&](std::ostream& os) { io::write_ephemeris_csv(os, k_t0, k_t1, k_n, params, cfg); });
        } else if (*sim) {
            const ModelParams params = ModelParams::make(r, eps);
            const ode::Options o = sim_int.options();
            if (sim_samples < 0)
                throw config_error("--samples must be non-negative");
            if (!(t_final >= s0))
                throw config_error("--t-final must not precede --s0");
            std::vector<double> times;
            for (int i = 0; i < sim_samples; ++i)
                times.push_back(sim_samples == 1 ? t_final : s0 + (t_final - s0) * i / (sim_samples - 1));
            const Trajectory traj = integrate_orbit({q0, p0, s0}, t_final, params, o, times);
            const json cfg = run_config(app, *sim);
            emit(sim_out, out, [&](std::ostream& os) { io::write_trajectory_csv(os, traj, cfg); });
            if (!traj.complete()) {
                err << "simulate: orbit ended early (" << to_string(traj.termination) << "): " << traj.message
                    << '\n';
                return numerical_failure;
            }
        } else if (*flo) {
            const ModelParams params = ModelParams::make(r, eps);
            const Equilibrium eq = parse_equilibrium(qstar);
            const Period per = parse_period(period);
            const ode::Options o = flo_int.options();
            if (!(delta_par > 0 && delta_par <= max_parabolic_band))
                throw config_error("--delta-par must lie in (0, 1e-3]");
            if (per == Period::pi && eps != 0)
                throw config_error("period pi requires epsilon = 0");
            const Monodromy m = monodromy(eq, params, per, o);
            json j = io::verdict_json(m, classify(m, delta_par));
            j["run_config"] = run_config(app, *flo);
            emit(flo_out, out, [&](std::ostream& os) { print_json(os, j); });
        } else if (*scn) {
            ScanOptions so;
            so.period = parse_period(scn_period);
            so.ode = scn_int.options();
            so.collision_margin = margin;
            so.threads = threads;
            const Equilibrium eq = parse_equilibrium(scn_qstar);
            const json cfg = run_config(app, *scn);
            if (!eps_grid.empty()) {
                if (eq != Equilibrium::origin)
                    throw config_error("--eps-grid scans the origin only; use --qstar 0");
                if (!(r > 0))
                    throw config_error("r must be positive");
                const auto grid = parse_grid(eps_grid);
                const TraceCurve curve = eps_scan_origin(r, grid, so, eps_cap);
                emit(scn_csv, out, [&](std::ostream& os) { io::write_trace_csv(os, curve, cfg); });
                json j = io::trace_json(curve);
                j["run_config"] = cfg;
                emit(scn_json, out, [&](std::ostream& os) { print_json(os, j); });
                err << "scan: " << curve.samples.size() << " points, " << curve.skipped.size() << " skipped\n";
            } else {
                if (!(eps >= 0 && eps < 1))
                    throw config_error("epsilon must lie in [0, 1)");
                const auto grid = parse_grid(r_grid);
                const TraceCurve curve = trace_curve(eq, eps, grid, so);
                emit(scn_csv, out, [&](std::ostream& os) { io::write_trace_csv(os, curve, cfg); });
                const StabilityIntervals iv = find_transitions(curve, refine_tol, so);
                json j = io::intervals_json(iv);
                j["trace"] = io::trace_json(curve);
                j["run_config"] = cfg;
                emit(scn_json, out, [&](std::ostream& os) { print_json(os, j); });
                err << "scan: " << iv.crossing_count() << " transition(s)";
                for (const auto& t : iv.transitions)
                    if (t.kind == TransitionKind::crossing)
                        err << ' ' << io::format_double(t.location());
                err << '\n';
                if (!iv.flagged.empty())
                    err << "scan: " << iv.flagged.size() << " cell(s) hide two crossings; refine the grid\n";
            }
        } else if (*cen) {
            CensusOptions co;
            co.scan.period = parse_period(cen_period);
            co.scan.ode = cen_int.options();
            co.scan.threads = threads;
            co.r_min_fraction = min_fraction;
            co.initial_points = initial_points;
            const CensusResult res = interchange_census(eps, fraction, budget, co);
            const json cfg = run_config(app, *cen);
            json j = io::census_json(res);
            j["run_config"] = cfg;
            emit(cen_json, out, [&](std::ostream& os) { print_json(os, j); });
            emit(cen_csv, out, [&](std::ostream& os) { io::write_trace_csv(os, res.curve, cfg); });
            err << "census: " << res.count << " strongly stable interval(s) from " << res.evaluations
                << " monodromies" << (res.budget_exhausted ? " (budget exhausted, partial)" : "") << '\n';
        } else if (*poi) {
            const ModelParams params = ModelParams::make(r, eps);
            const ode::Options o = poi_int.options();
            const auto qs = parse_grid(q_grid);
            const auto ps = parse_grid(p_grid);
            InitialGrid g{qs.front(), qs.back(), static_cast<int>(qs.size()), ps.front(), ps.back(),
                          static_cast<int>(ps.size())};
            const auto initial = g.points();
            const SectionCloud cloud = section(params, initial, iterates, o, threads, g.describe());
            const json cfg = run_config(app, *poi);
            emit(poi_csv, out, [&](std::ostream& os) { io::write_section_csv(os, cloud, cfg); });
            json m = io::section_manifest_json(cloud);
            m["run_config"] = cfg;
            emit(poi_manifest, out, [&](std::ostream& os) { print_json(os, m); });
        } else if (*bnd) {
            std::string text;
            if (!fixture_path.empty()) {
                text = read_file(fixture_path);
            } else {
                json f{{"family", family}};
                if (family == "sitnikov") {
                    f["epsilon"] = eps;
                    f["primary"] = primary;
                } else if (family == "oscillating_point") {
                    f["A"] = A;
                    f["B"] = B;
                }
                if (!std::isnan(delta))
                    f["delta"] = delta;
                if (!std::isnan(lambda))
                    f["lambda"] = lambda;
                if (!std::isnan(M))
                    f["M"] = M;
                if (!std::isnan(k))
                    f["k"] = k;
                text = f.dump();
            }
            const curves::Fixture fx = curves::parse_fixture(text);
            json j = io::bound_report_json(curves::bound_report(fx.lambda, fx.pair));
            j["family"] = fx.pair.family;
            j["run_config"] = run_config(app, *bnd);
            emit(bnd_out, out, [&](std::ostream& os) { print_json(os, j); });
        } else if (*ver) {
            verify::SuiteOptions vo;
            vo.seed = seed;
            vo.threads = threads;
            bool all = true;
            for (const auto& c : verify::run_invariant_suite(vo)) {
                out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
                all = all && c.passed;
            }
            return all ? ok : verification_failure;
        }
    } catch (const config_error& e) {
        err << "config error: " << e.what() << '\n';
        return config_failure;
    } catch (const collision_error& e) {
        err << "collision: " << e.what() << '\n';
        return numerical_failure;
    } catch (const solver_error& e) {
        err << "solver error: " << e.what() << '\n';
        return numerical_failure;
    }
    return ok;
}

} // namespace csit::cli
