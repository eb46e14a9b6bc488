#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library.

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Plain bisection on u - e sin u - M, which is increasing in u.
inline double kepler_bisection(double M, double e) {
    double lo = M - 1.0 - e;
    double hi = M + 1.0 + e;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid - e * std::sin(mid) - M < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double rho(double t, double e) { return 1 - e * std::cos(kepler_bisection(t, e)); }

// Hill coefficient a(t) = -df/dq at the antipode, written out from the
// distances to the two primaries at q = pi.
inline double antipode_coefficient(double t, double r, double e) {
    const double rr = r * rho(t, e);
    const double w = rr * std::cos(t);
    return -((1 + w) / std::pow(rr * rr + 4 + 4 * w, 1.5) + (1 - w) / std::pow(rr * rr + 4 - 4 * w, 1.5));
}

inline double origin_coefficient(double t, double r, double e) {
    const double rr = r * rho(t, e);
    return 2 / (rr * rr * rr);
}

struct Matrix2 {
    double x1, x2, y1, y2;
};

// Classical RK4 with n equal steps on X' = [[0, 1], [-a, 0]] X.
inline Matrix2 rk4_monodromy(const std::function<double(double)>& a, double T, int n) {
    using V = std::array<double, 4>; // x1, y1, x2, y2
    auto f = [&](double t, const V& v) -> V {
        const double at = a(t);
        return {v[1], -at * v[0], v[3], -at * v[2]};
    };
    V v{1, 0, 0, 1};
    const double h = T / n;
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        V k1 = f(t, v), tmp;
        for (int j = 0; j < 4; ++j) tmp[j] = v[j] + 0.5 * h * k1[j];
        V k2 = f(t + 0.5 * h, tmp);
        for (int j = 0; j < 4; ++j) tmp[j] = v[j] + 0.5 * h * k2[j];
        V k3 = f(t + 0.5 * h, tmp);
        for (int j = 0; j < 4; ++j) tmp[j] = v[j] + h * k3[j];
        V k4 = f(t + h, tmp);
        for (int j = 0; j < 4; ++j) v[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return {v[0], v[2], v[1], v[3]};
}

// Values computed offline and frozen.
// scipy DOP853, rtol = atol = 1e-12, antipode, eps = 0.
inline constexpr double half_trace_pi_r1 = 1.8354948304962986;
inline constexpr double half_trace_2pi_r1 = 5.738082545557457;
inline constexpr double first_transition = 1.2349417829628; // |h| = 1 at the antipode, eps = 0
inline constexpr std::array<std::array<double, 2>, 6> half_trace_pi_table = {{{1.20, 1.17244177},
                                                                              {1.23, 1.02575641},
                                                                              {1.24, 0.97314338},
                                                                              {1.25, 0.91853769},
                                                                              {1.30, 0.61246198},
                                                                              {1.32, 0.47273866}}};
// mpmath, 40 digits.
inline constexpr double kepler_1_03 = 1.288091313211837697447;
inline constexpr double kepler_2_09 = 2.522365434000244884658;
inline constexpr double force_half_pi = -0.17888543819998317571; // q = pi/2, t = 0, r = 1, eps = 0
inline constexpr double potential_half_pi = -1.44721359549995793928;
inline constexpr double hyperbolic_threshold = 1.05976677887998572128; // (sqrt 17 - 3)^{1/2}

} // namespace oracle
