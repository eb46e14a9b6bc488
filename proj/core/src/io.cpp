#include "csit/io.hpp"

#include <cstdio>

namespace csit::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void header(std::ostream& os, const json& run_config, const char* columns) {
    if (!run_config.is_null())
        os << "# run_config: " << run_config.dump() << '\n';
    os << columns << '\n';
}

const char* method_name(ode::Method m) { return m == ode::Method::adaptive ? "adaptive" : "fixed_step"; }

} // namespace

void write_ephemeris_csv(std::ostream& os, double t0, double t1, int n, const ModelParams& params,
                         const json& run_config) {
    header(os, run_config, "t,u,rho,x1,y1,z1,x2,y2,z2");
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? t0 : t0 + (t1 - t0) * i / (n - 1);
        const PrimaryEphemeris e = primary_positions(t, params);
        os << format_double(e.t) << ',' << format_double(e.u) << ',' << format_double(e.rho);
        for (const Vec3& v : {e.x1, e.x2})
            os << ',' << format_double(v.x) << ',' << format_double(v.y) << ',' << format_double(v.z);
        os << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const json& run_config) {
    header(os, run_config, "t,q,p,s");
    for (const auto& smp : traj.samples)
        os << format_double(smp.t) << ',' << format_double(smp.state.q) << ',' << format_double(smp.state.p) << ','
           << format_double(smp.state.s) << '\n';
}

void write_trace_csv(std::ostream& os, const TraceCurve& curve, const json& run_config) {
    header(os, run_config, curve.variable == ScanVariable::r ? "r,half_trace" : "epsilon,half_trace");
    for (const auto& p : curve.samples)
        os << format_double(p.x) << ',' << format_double(p.half_trace) << '\n';
}

void write_section_csv(std::ostream& os, const SectionCloud& cloud, const json& run_config) {
    header(os, run_config, "orbit_id,iter,q,p");
    for (const auto& orbit : cloud.orbits)
        for (std::size_t k = 0; k < orbit.hits.size(); ++k)
            os << orbit.id << ',' << k + 1 << ',' << format_double(orbit.hits[k].q) << ','
               << format_double(orbit.hits[k].p) << '\n';
}

json verdict_json(const Monodromy& m, const StabilityVerdict& v) {
    json j;
    j["q_star"] = std::string(to_string(m.equilibrium));
    j["r"] = m.params.r;
    j["epsilon"] = m.params.epsilon;
    j["period"] = std::string(to_string(m.period));
    j["half_trace"] = v.half_trace;
    j["class"] = std::string(to_string(v.cls));
    j["strongly_stable"] = v.strongly_stable;
    j["parabolic_kind"] = std::string(to_string(v.parabolic_kind));
    j["det"] = m.matrix.det();
    j["monodromy"] = {{m.matrix.x1, m.matrix.x2}, {m.matrix.y1, m.matrix.y2}};
    j["multipliers"] = {{v.multipliers.first.real(), v.multipliers.first.imag()},
                        {v.multipliers.second.real(), v.multipliers.second.imag()}};
    return j;
}

json intervals_json(const StabilityIntervals& iv) {
    json j;
    j["q_star"] = std::string(to_string(iv.q_star));
    j["epsilon"] = iv.epsilon;
    j["period"] = std::string(to_string(iv.period));
    j["refine_tol"] = iv.refine_tol;
    j["intervals"] = json::array();
    for (const auto& i : iv.intervals)
        j["intervals"].push_back({{"r_lo", i.lo},
                                  {"r_hi", i.hi},
                                  {"class", std::string(to_string(i.cls))},
                                  {"strongly_stable", i.strongly_stable}});
    j["transitions"] = json::array();
    for (const auto& t : iv.transitions)
        j["transitions"].push_back({{"r_bracket", {t.lo, t.hi}},
                                    {"kind", std::string(to_string(t.kind))},
                                    {"direction", t.direction}});
    j["flagged"] = json::array();
    for (const auto& f : iv.flagged)
        j["flagged"].push_back({{"r_bracket", {f.lo, f.hi}}, {"reason", f.reason}});
    j["refinement_evaluations"] = iv.evaluations;
    return j;
}

json trace_json(const TraceCurve& curve) {
    json j;
    j["q_star"] = std::string(to_string(curve.q_star));
    j["variable"] = std::string(to_string(curve.variable));
    if (curve.variable == ScanVariable::r)
        j["epsilon"] = curve.epsilon;
    else
        j["r"] = curve.r;
    j["period"] = std::string(to_string(curve.period));
    j["tol"] = curve.tol;
    j["method"] = method_name(curve.method);
    j["samples"] = curve.samples.size();
    j["skipped"] = json::array();
    for (const auto& s : curve.skipped)
        j["skipped"].push_back({{"x", s.x}, {"reason", s.reason}});
    j["notes"] = json::array();
    for (const auto& p : curve.samples)
        if (!p.note.empty())
            j["notes"].push_back({{"x", p.x}, {"note", p.note}});
    return j;
}

json census_json(const CensusResult& c) {
    json j = intervals_json(c.intervals);
    j["count"] = c.count;
    j["evaluations"] = c.evaluations;
    j["budget"] = c.budget;
    j["budget_exhausted"] = c.budget_exhausted;
    j["converged"] = c.converged;
    j["levels"] = c.levels;
    j["r_range"] = {c.r_lo, c.r_hi};
    return j;
}

json bound_report_json(const curves::BoundReport& b) {
    return json{{"lambda", b.lambda},
                {"delta", b.delta},
                {"M", b.M},
                {"M_supplied", b.M_supplied},
                {"k", b.k},
                {"k_supplied", b.k_supplied},
                {"c", b.c},
                {"tau", b.tau},
                {"tau_clamped", b.tau_clamped},
                {"a_min", b.a_min},
                {"lower_bound", b.lower_bound},
                {"bound_ok", b.bound_ok},
                {"tau_sqrt_a_min", b.tau_sqrt_a_min},
                {"winding_estimate", b.winding_estimate},
                {"numerator_bound_ok", b.numerator_bound_ok}};
}

json section_manifest_json(const SectionCloud& cloud) {
    json j;
    j["r"] = cloud.params.r;
    j["epsilon"] = cloud.params.epsilon;
    j["n_iterates"] = cloud.n_iterates;
    j["tol"] = cloud.tol;
    j["method"] = method_name(cloud.method);
    j["grid"] = cloud.grid;
    j["orbits"] = json::array();
    for (const auto& o : cloud.orbits) {
        json e{{"id", o.id}, {"q0", o.initial.q}, {"p0", o.initial.p}, {"hits", o.hits.size()},
               {"truncated", o.truncated}};
        if (o.truncated)
            e["reason"] = o.reason;
        j["orbits"].push_back(std::move(e));
    }
    return j;
}

} // namespace csit::io
