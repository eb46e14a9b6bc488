#include "csit/poincare.hpp"

#include <cmath>
#include <sstream>

#include "csit/errors.hpp"
#include "parallel.hpp"

namespace csit {

std::vector<SectionPoint> InitialGrid::points() const {
    if (nq < 1 || np < 1)
        throw config_error("initial grid needs at least one point per axis");
    std::vector<SectionPoint> out;
    out.reserve(static_cast<std::size_t>(nq) * np);
    for (int i = 0; i < nq; ++i) {
        const double q = nq == 1 ? q_lo : q_lo + (q_hi - q_lo) * i / (nq - 1);
        for (int j = 0; j < np; ++j) {
            const double p = np == 1 ? p_lo : p_lo + (p_hi - p_lo) * j / (np - 1);
            out.push_back({q, p});
        }
    }
    return out;
}

std::string InitialGrid::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "q " << q_lo << ":" << q_hi << " x" << nq << ", p " << p_lo << ":" << p_hi << " x" << np;
    return os.str();
}

SectionCloud section(const ModelParams& params, std::span<const SectionPoint> initial, int n_iterates,
                     const ode::Options& options, unsigned threads, std::string grid_description) {
    params.validate();
    if (n_iterates < 1)
        throw config_error("number of iterates must be at least 1");
    for (const auto& ic : initial) {
        if (!(ic.q > -pi && ic.q <= pi))
            throw config_error("initial q must lie in (-pi, pi]");
        if (!(std::abs(ic.p) <= max_section_momentum))
            throw config_error("initial |p| must not exceed 10");
    }

    std::vector<double> strobe(static_cast<std::size_t>(n_iterates));
    for (int k = 1; k <= n_iterates; ++k)
        strobe[k - 1] = two_pi * k;

    SectionCloud cloud;
    cloud.params = params;
    cloud.n_iterates = n_iterates;
    cloud.tol = options.tol;
    cloud.method = options.method;
    cloud.grid = std::move(grid_description);
    cloud.orbits.resize(initial.size());

    detail::parallel_for(initial.size(), threads, [&](std::size_t i) {
        SectionOrbit& orbit = cloud.orbits[i];
        orbit.id = static_cast<int>(i);
        orbit.initial = initial[i];
        const Trajectory traj =
            integrate_orbit({initial[i].q, initial[i].p, 0.0}, strobe.back(), params, options, strobe);
        std::size_t k = 0;
        for (const auto& smp : traj.samples) {
            while (k < strobe.size() && strobe[k] < smp.t)
                ++k;
            if (k < strobe.size() && strobe[k] == smp.t) {
                orbit.hits.push_back({wrap_symmetric(smp.state.q), smp.state.p});
                ++k;
            }
        }
        orbit.truncated = !traj.complete();
        orbit.reason = traj.message;
    });
    return cloud;
}

} // namespace csit
