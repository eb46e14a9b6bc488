#include "csit/general_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "csit/errors.hpp"
#include "csit/floquet.hpp"

namespace csit::curves {

namespace {

constexpr double fd_step1 = 1e-5;
constexpr double fd_step2 = 1e-4;

Vec3 central_first(const CurvePair::Curve& f, double u, double lambda) {
    return (0.5 / fd_step1) * (f(u + fd_step1, lambda) - f(u - fd_step1, lambda));
}

Vec3 central_second(const CurvePair::Curve& f, double u, double lambda) {
    return (1 / (fd_step2 * fd_step2)) * (f(u + fd_step2, lambda) - 2.0 * f(u, lambda) + f(u - fd_step2, lambda));
}

double wrap_period_one(double t) {
    double w = t - std::floor(t + 0.5);
    if (w >= 0.5)
        w -= 1;
    return w;
}

} // namespace

Vec3 CurvePair::dx_at(double s, double lambda) const { return dx ? dx(s, lambda) : central_first(x, s, lambda); }
Vec3 CurvePair::ddx_at(double s, double lambda) const { return ddx ? ddx(s, lambda) : central_second(x, s, lambda); }
Vec3 CurvePair::dy_at(double t, double lambda) const { return dy ? dy(t, lambda) : central_first(y, t, lambda); }
Vec3 CurvePair::ddy_at(double t, double lambda) const { return ddy ? ddy(t, lambda) : central_second(y, t, lambda); }

double pair_potential(double s, double t, double lambda, const CurvePair& pair, double d_min) {
    const double d = norm(pair.x_at(s, lambda) - pair.y_at(t, lambda));
    if (d <= d_min)
        throw collision_error(1, d);
    return -1 / d;
}

double d2U_ds2(double t, double lambda, const CurvePair& pair, double s) {
    const Vec3 z = pair.x_at(s, lambda) - pair.y_at(t, lambda);
    const Vec3 z1 = pair.dx_at(s, lambda);
    const Vec3 z2 = pair.ddx_at(s, lambda);
    const double zz = dot(z, z);
    if (std::sqrt(zz) <= default_collision_guard)
        throw collision_error(1, std::sqrt(zz));
    const double zz1 = dot(z, z1);
    return ((dot(z1, z1) + dot(z, z2)) * zz - 3 * zz1 * zz1) / (zz * zz * std::sqrt(zz));
}

MinDistance min_distance(double lambda, const CurvePair& pair, int grid) {
    if (grid < 8)
        throw config_error("min_distance grid must have at least 8 points per axis");
    const int ns = pair.s_periodic ? grid : grid + 1;
    const double ds = (pair.s_hi - pair.s_lo) / grid;
    const double dt = 1.0 / grid;

    std::vector<Vec3> ys(grid);
    for (int j = 0; j < grid; ++j)
        ys[j] = pair.y_at(-0.5 + j * dt, lambda);

    double best = std::numeric_limits<double>::infinity();
    int bi = 0, bj = 0;
    auto closeness = [&](int i, int j) {
        return std::abs(pair.s_lo + i * ds) + std::abs(-0.5 + j * dt);
    };
    for (int i = 0; i < ns; ++i) {
        const Vec3 xs = pair.x_at(pair.s_lo + i * ds, lambda);
        for (int j = 0; j < grid; ++j) {
            const Vec3 z = xs - ys[j];
            const double d2 = dot(z, z);
            const bool tie = std::abs(d2 - best) <= 1e-15 * best;
            if ((d2 < best && !tie) || (tie && closeness(i, j) < closeness(bi, bj))) {
                best = std::min(best, d2);
                bi = i;
                bj = j;
            }
        }
    }
    if (!pair.s_periodic && (bi == 0 || bi == ns - 1))
        throw config_error("invalid curve pair: distance minimum lies on the boundary of the s range");

    // Compass search on |z|^2.
    double s = pair.s_lo + bi * ds;
    double t = -0.5 + bj * dt;
    auto f = [&](double ss, double tt) {
        const Vec3 z = pair.x_at(ss, lambda) - pair.y_at(tt, lambda);
        return dot(z, z);
    };
    double fs = f(s, t);
    double hs = ds;
    double ht = dt;
    while (hs > 1e-13 || ht > 1e-13) {
        bool moved = false;
        const double cand[4][2] = {{s + hs, t}, {s - hs, t}, {s, t + ht}, {s, t - ht}};
        for (const auto& c : cand) {
            if (!pair.s_periodic && (c[0] < pair.s_lo || c[0] > pair.s_hi))
                continue;
            const double fc = f(c[0], c[1]);
            if (fc < fs) {
                fs = fc;
                s = c[0];
                t = c[1];
                moved = true;
                break;
            }
        }
        if (!moved) {
            hs *= 0.5;
            ht *= 0.5;
        }
    }
    MinDistance out;
    out.delta = std::sqrt(fs);
    out.s = s;
    out.t = wrap_period_one(t);
    out.at_origin = std::abs(out.s) <= ds && std::abs(out.t) <= dt;
    return out;
}

BoundReport bound_report(double lambda, const CurvePair& pair) {
    BoundReport rep;
    rep.lambda = lambda;
    rep.delta = min_distance(lambda, pair).delta;
    const double delta = rep.delta;

    if (pair.c2_bound) {
        rep.M = *pair.c2_bound;
        rep.M_supplied = true;
    } else {
        constexpr int n = 64;
        double M = 0;
        for (int i = 0; i <= n; ++i) {
            const double s = pair.s_lo + (pair.s_hi - pair.s_lo) * i / n;
            M = std::max({M, norm(pair.dx_at(s, lambda)), norm(pair.ddx_at(s, lambda))});
            for (int j = 0; j < n; ++j) {
                const double t = -0.5 + static_cast<double>(j) / n;
                M = std::max(M, norm(pair.x_at(s, lambda) - pair.y_at(t, lambda)));
            }
        }
        for (int j = 0; j < n; ++j) {
            const double t = -0.5 + static_cast<double>(j) / n;
            M = std::max({M, norm(pair.dy_at(t, lambda)), norm(pair.ddy_at(t, lambda))});
        }
        rep.M = M;
    }

    if (pair.taylor_k) {
        rep.k = *pair.taylor_k;
        rep.k_supplied = true;
    } else {
        constexpr int n = 2048;
        const Vec3 z1 = pair.dx_at(0, lambda);
        double k = 0;
        for (int j = 1; j <= n; ++j) {
            for (double sign : {-1.0, 1.0}) {
                const double t = sign * 0.5 * j / n;
                const Vec3 z = pair.x_at(0, lambda) - pair.y_at(t, lambda);
                k = std::max({k, std::abs(dot(z, z) - delta * delta) / (t * t), std::abs(dot(z, z1)) / std::abs(t)});
            }
        }
        rep.k = k;
    }

    rep.c = rep.k > 0 ? std::min(1 / std::sqrt(rep.k), 1 / (rep.k * std::sqrt(6.0)))
                      : std::numeric_limits<double>::infinity();
    rep.tau = rep.c * delta;
    if (!(rep.tau <= 0.5)) {
        rep.tau = 0.5;
        rep.tau_clamped = true;
    }
    rep.a_min = coefficient_minimum([&](double t) { return d2U_ds2(t, lambda, pair); }, -rep.tau, rep.tau, 512);
    rep.lower_bound = lower_bound_constant / (delta * delta * delta);
    rep.bound_ok = rep.a_min >= rep.lower_bound;
    rep.tau_sqrt_a_min = rep.a_min > 0 ? rep.tau * std::sqrt(rep.a_min) : 0.0;
    rep.winding_estimate = -2 * rep.tau_sqrt_a_min + pi;
    rep.numerator_bound_ok = 0.5 * delta * delta - std::sqrt(2.0) * rep.M * delta * delta * delta > 0.25 * delta * delta;
    return rep;
}

namespace {

struct Kinematics {
    Vec3 pos, vel, acc; // model time derivatives
};

// x1 for sign = +1, x2 for sign = -1.
Kinematics primary_kinematics(double t, double r, double epsilon, double sign) {
    const auto d = kepler::radial_factor_derivatives(t, epsilon);
    const double st = std::sin(t);
    const double ct = std::cos(t);
    const double k = sign * r;
    return {{k * d.rho * st, circle_radius + k * d.rho * ct, 0.0},
            {k * (d.drho_dt * st + d.rho * ct), k * (d.drho_dt * ct - d.rho * st), 0.0},
            {k * (d.d2rho_dt2 * st + 2 * d.drho_dt * ct - d.rho * st),
             k * (d.d2rho_dt2 * ct - 2 * d.drho_dt * st - d.rho * ct), 0.0}};
}

double model_time(double tau) { return two_pi * tau + pi; }

} // namespace

double section_time(double model_t) noexcept { return (model_t - pi) / two_pi; }

double sitnikov_lambda_for_delta(double delta, double epsilon) { return (2 * circle_radius - delta) / (1 + epsilon); }

CurvePair sitnikov_instantiation(double epsilon, SitnikovPrimary which) {
    if (!(epsilon >= 0 && epsilon < 1))
        throw config_error("sitnikov instantiation requires 0 <= epsilon < 1");
    const double sign = which == SitnikovPrimary::near ? 1.0 : -1.0;
    CurvePair p;
    p.family = which == SitnikovPrimary::near ? "sitnikov" : "sitnikov_far";
    p.x = [](double s, double) { return Vec3{0, -std::cos(s), -std::sin(s)}; };
    p.dx = [](double s, double) { return Vec3{0, std::sin(s), -std::cos(s)}; };
    p.ddx = [](double s, double) { return Vec3{0, std::cos(s), std::sin(s)}; };
    p.y = [=](double tau, double r) { return primary_kinematics(model_time(tau), r, epsilon, sign).pos; };
    p.dy = [=](double tau, double r) { return two_pi * primary_kinematics(model_time(tau), r, epsilon, sign).vel; };
    p.ddy = [=](double tau, double r) {
        return (two_pi * two_pi) * primary_kinematics(model_time(tau), r, epsilon, sign).acc;
    };
    p.s_lo = -pi;
    p.s_hi = pi;
    p.s_periodic = true;
    p.lambda_lo = 0;
    p.lambda_hi = 2 * circle_radius / (1 + epsilon);
    return p;
}

Coefficient sitnikov_hill_from_pairs(const ModelParams& params) {
    params.validate();
    const CurvePair near = sitnikov_instantiation(params.epsilon, SitnikovPrimary::near);
    const CurvePair far = sitnikov_instantiation(params.epsilon, SitnikovPrimary::far);
    const double r = params.r;
    return [near, far, r](double t) {
        const double tau = section_time(t);
        return d2U_ds2(tau, r, near) + d2U_ds2(tau, r, far);
    };
}

CurvePair line_fixture(double half_length) {
    CurvePair p;
    p.family = "line";
    p.x = [](double s, double) { return Vec3{s, 0, 0}; };
    p.dx = [](double, double) { return Vec3{1, 0, 0}; };
    p.ddx = [](double, double) { return Vec3{0, 0, 0}; };
    p.y = [](double, double lambda) { return Vec3{0, lambda, 0}; };
    p.dy = [](double, double) { return Vec3{0, 0, 0}; };
    p.ddy = [](double, double) { return Vec3{0, 0, 0}; };
    p.s_lo = -half_length;
    p.s_hi = half_length;
    p.s_periodic = false;
    p.lambda_lo = 0;
    p.lambda_hi = 1;
    return p;
}

CurvePair oscillating_fixture(double A, double B, double half_length) {
    CurvePair p = line_fixture(half_length);
    p.family = "oscillating_point";
    p.y = [=](double t, double lambda) {
        return Vec3{0, lambda + A * (1 - std::cos(two_pi * t)), B * std::sin(two_pi * t)};
    };
    p.dy = [=](double t, double) {
        return Vec3{0, two_pi * A * std::sin(two_pi * t), two_pi * B * std::cos(two_pi * t)};
    };
    p.ddy = [=](double t, double) {
        const double w2 = two_pi * two_pi;
        return Vec3{0, w2 * A * std::cos(two_pi * t), -w2 * B * std::sin(two_pi * t)};
    };
    return p;
}

Fixture parse_fixture(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("fixture is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw config_error("fixture must be an object with a string 'family'");
    auto number = [&](const char* key) -> double {
        if (!j.contains(key) || !j[key].is_number())
            throw config_error(std::string("fixture is missing numeric '") + key + "'");
        return j[key].get<double>();
    };
    const std::string family = j["family"].get<std::string>();
    Fixture fx;
    if (family == "sitnikov") {
        const double eps = j.contains("epsilon") ? number("epsilon") : 0.0;
        SitnikovPrimary which = SitnikovPrimary::near;
        if (j.contains("primary")) {
            const std::string w = j["primary"].get<std::string>();
            if (w == "far")
                which = SitnikovPrimary::far;
            else if (w != "near")
                throw config_error("fixture 'primary' must be 'near' or 'far'");
        }
        fx.pair = sitnikov_instantiation(eps, which);
        if (j.contains("delta"))
            fx.lambda = sitnikov_lambda_for_delta(number("delta"), eps);
        else
            fx.lambda = number("lambda");
        ModelParams::make(fx.lambda, eps);
    } else if (family == "line") {
        fx.pair = line_fixture();
        fx.lambda = number("lambda");
    } else if (family == "oscillating_point") {
        fx.pair = oscillating_fixture(number("A"), number("B"));
        fx.lambda = number("lambda");
    } else {
        throw config_error("unknown curve family '" + family + "'");
    }
    if (!(fx.lambda > 0))
        throw config_error("fixture lambda must be positive");
    if (j.contains("M"))
        fx.pair.c2_bound = number("M");
    if (j.contains("k"))
        fx.pair.taylor_k = number("k");
    return fx;
}

} // namespace csit::curves
