#include "csit/kepler.hpp"

#include <cmath>
#include <sstream>

#include "csit/errors.hpp"

namespace csit {

collision_error::collision_error(int primary, double distance)
    : std::domain_error([&] {
          std::ostringstream os;
          os.precision(17);
          if (primary == 0)
              os << "collision with the fused central mass";
          else
              os << "collision with primary " << primary;
          os << " (distance " << distance << ")";
          return os.str();
      }()),
      primary_(primary), distance_(distance) {}

ModelParams ModelParams::make(double r, double epsilon) {
    ModelParams p{r, epsilon};
    p.validate();
    return p;
}

void ModelParams::validate() const {
    std::ostringstream os;
    os.precision(17);
    if (!(epsilon >= 0 && epsilon < 1)) {
        os << "eccentricity must satisfy 0 <= epsilon < 1 (got " << epsilon << ")";
        throw config_error(os.str());
    }
    if (!(r > 0)) {
        os << "semi-major axis must satisfy r > 0 (got " << r << ")";
        throw config_error(os.str());
    }
    if (!(r < collision_ceiling())) {
        os << "semi-major axis must satisfy r < 2/(1+epsilon) = " << collision_ceiling() << " (got " << r << ")";
        throw config_error(os.str());
    }
}

bool ModelParams::valid() const noexcept {
    return epsilon >= 0 && epsilon < 1 && r > 0 && r < collision_ceiling();
}

namespace kepler {

double solve(double mean_anomaly, double epsilon) {
    if (!(epsilon >= 0 && epsilon < 1))
        throw config_error("Kepler solve requires 0 <= epsilon < 1");
    if (!std::isfinite(mean_anomaly))
        throw config_error("Kepler solve requires a finite mean anomaly");
    if (epsilon == 0)
        return mean_anomaly;

    double turns = std::floor(mean_anomaly / two_pi);
    double m = mean_anomaly - turns * two_pi;
    if (m >= two_pi) {
        m -= two_pi;
        turns += 1;
    }
    if (m < 0)
        m = 0;

    // u - e sin u - m is increasing; [0, 2pi] always brackets the root.
    double lo = 0;
    double hi = two_pi;
    double u = m + epsilon * std::sin(m);
    if (!(u > lo && u < hi))
        u = m;
    for (int it = 0; it < max_iterations; ++it) {
        const double residual = u - epsilon * std::sin(u) - m;
        if (std::abs(residual) < residual_tolerance)
            return u + turns * two_pi;
        if (residual > 0)
            hi = u;
        else
            lo = u;
        double next = u - residual / (1 - epsilon * std::cos(u));
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        u = next;
    }
    std::ostringstream os;
    os.precision(17);
    os << "Kepler solve did not converge (M=" << mean_anomaly << ", epsilon=" << epsilon << ")";
    throw solver_error(os.str());
}

double radial_factor(double t, double epsilon) {
    if (epsilon == 0)
        return 1.0;
    return 1 - epsilon * std::cos(solve(t, epsilon));
}

RadialDerivatives radial_factor_derivatives(double t, double epsilon) {
    if (epsilon == 0)
        return {1.0, 0.0, 0.0};
    const double u = solve(t, epsilon);
    const double su = std::sin(u);
    const double cu = std::cos(u);
    const double du = 1 / (1 - epsilon * cu);
    const double d2u = -epsilon * su * du * du * du;
    return {1 - epsilon * cu, epsilon * su * du, epsilon * cu * du * du + epsilon * su * d2u};
}

} // namespace kepler

PrimaryEphemeris primary_positions(double t, const ModelParams& params) {
    params.validate();
    PrimaryEphemeris e;
    e.t = t;
    e.u = kepler::solve(t, params.epsilon);
    e.rho = 1 - params.epsilon * std::cos(e.u);
    const double rr = params.r * e.rho;
    const double s = std::sin(t);
    const double c = std::cos(t);
    e.x1 = {rr * s, circle_radius + rr * c, 0.0};
    e.x2 = {-rr * s, circle_radius - rr * c, 0.0};
    return e;
}

} // namespace csit
