#pragma once

#include <span>
#include <string>
#include <vector>

#include "csit/integrate.hpp"

namespace csit {

inline constexpr double max_section_momentum = 10.0;

struct SectionPoint {
    double q = 0;
    double p = 0;
};

// Rectangular grid of initial conditions, nq x np points including the ends.
// A single point along an axis sits at its lower bound.
struct InitialGrid {
    double q_lo = 0, q_hi = 0;
    int nq = 1;
    double p_lo = 0, p_hi = 0;
    int np = 1;

    std::vector<SectionPoint> points() const;
    std::string describe() const;
};

struct SectionOrbit {
    int id = 0;
    SectionPoint initial;
    std::vector<SectionPoint> hits; // iterate k = 1..hits.size(), q wrapped to (-pi, pi]
    bool truncated = false;
    std::string reason;
};

struct SectionCloud {
    ModelParams params;
    int n_iterates = 0;
    double tol = 0;
    ode::Method method = ode::Method::adaptive;
    std::string grid;
    std::vector<SectionOrbit> orbits;
};

/// Stroboscopic map at s = 0 mod 2 pi: each initial condition is integrated
/// for n_iterates periods and sampled once per period. Orbits ending in a
/// collision or a solver failure are kept with their hits so far.
SectionCloud section(const ModelParams& params, std::span<const SectionPoint> initial, int n_iterates,
                     const ode::Options& options = orbit_options(), unsigned threads = 0,
                     std::string grid_description = {});

} // namespace csit
