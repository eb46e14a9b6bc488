#pragma once

// Explicit Runge-Kutta engine for small fixed-size systems.
//
// Default: Dormand-Prince 5(4) embedded pair, local extrapolation, FSAL,
// with Hairer's fourth-order continuous extension for dense output.
// Alternative: classical RK4 at a fixed step with cubic Hermite dense output,
// used for bit-reproducible regression runs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "csit/errors.hpp"

namespace csit::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

enum class Method { adaptive, fixed_step };

struct Options {
    Method method = Method::adaptive;
    // Per-step local error bound, mixed absolute/relative:
    // |err_i| <= tol * (1 + max(|y0_i|, |y1_i|)).
    double tol = 1e-10;
    // RK4 steps per 2pi of integration time (fixed_step only).
    int fixed_steps_per_period = 4096;
    double initial_step = 0; // 0 selects a step automatically
    double max_step = 0;     // 0 means unbounded
    std::size_t max_steps = 20'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

// Interpolant over one accepted step, in Hairer's nested form
//   y(t0 + th h) = r1 + th (r2 + (1-th)(r3 + th (r4 + (1-th) r5))).
template <std::size_t N>
struct DenseStep {
    double t0 = 0;
    double t1 = 0;
    Vec<N> r1{}, r2{}, r3{}, r4{}, r5{};

    Vec<N> operator()(double t) const {
        const double h = t1 - t0;
        const double th = h == 0 ? 1.0 : (t - t0) / h;
        const double th1 = 1 - th;
        Vec<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

namespace detail {

template <std::size_t N>
inline Vec<N> axpy(const Vec<N>& y, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
    Vec<N> out = y;
    for (const auto& [c, k] : terms) {
        if (c == 0)
            continue;
        for (std::size_t i = 0; i < N; ++i)
            out[i] += h * c * (*k)[i];
    }
    return out;
}

template <std::size_t N>
double max_norm(const Vec<N>& v) {
    double m = 0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

inline void validate(const Options& opt, double t0, double t1) {
    if (!(t1 >= t0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw config_error("integration interval must satisfy t0 <= t1");
    if (opt.method == Method::adaptive && !(opt.tol > 0))
        throw config_error("integration tolerance must be positive");
    if (opt.method == Method::fixed_step && opt.fixed_steps_per_period <= 0)
        throw config_error("fixed-step count must be positive");
}

template <std::size_t N, class Rhs>
double initial_step(Rhs& rhs, double t0, const Vec<N>& y0, const Vec<N>& f0, double tol, double span,
                    Stats& stats) {
    double dy = 0, df = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sk = tol * (1 + std::abs(y0[i]));
        dy = std::max(dy, std::abs(y0[i]) / sk);
        df = std::max(df, std::abs(f0[i]) / sk);
    }
    double h = (dy <= 1e-5 || df <= 1e-5) ? 1e-6 : 0.01 * dy / df;
    h = std::min(h, span);
    const Vec<N> y1 = axpy<N>(y0, h, {{1.0, &f0}});
    const Vec<N> f1 = rhs(t0 + h, y1);
    ++stats.evaluations;
    double d2 = 0;
    for (std::size_t i = 0; i < N; ++i)
        d2 = std::max(d2, std::abs(f1[i] - f0[i]) / (tol * (1 + std::abs(y0[i]))));
    d2 /= h;
    const double dmax = std::max(d2, df);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5);
    return std::min({100 * h, h1, span});
}

template <std::size_t N, class Rhs, class Observer>
Stats integrate_adaptive(Rhs& rhs, Vec<N>& y, double t0, double t1, const Options& opt, Observer& observer) {
    Stats stats;
    if (t1 == t0)
        return stats;
    const double span = t1 - t0;
    double t = t0;
    Vec<N> k1 = rhs(t, y);
    ++stats.evaluations;
    double h = opt.initial_step > 0 ? std::min(opt.initial_step, span) : initial_step<N>(rhs, t, y, k1, opt.tol, span, stats);
    if (opt.max_step > 0)
        h = std::min(h, opt.max_step);
    bool last_rejected = false;
    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps)
            throw solver_error("integrator exceeded the maximum number of steps");
        if (t + 1.01 * h >= t1)
            h = t1 - t;
        const double hmin = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < hmin) {
            std::ostringstream os;
            os.precision(17);
            os << "step size underflow at t=" << t << " (stiff or singular problem)";
            throw solver_error(os.str());
        }
        const Vec<N> y2 = axpy<N>(y, h, {{a21, &k1}});
        const Vec<N> k2 = rhs(t + c2 * h, y2);
        const Vec<N> y3 = axpy<N>(y, h, {{a31, &k1}, {a32, &k2}});
        const Vec<N> k3 = rhs(t + c3 * h, y3);
        const Vec<N> y4 = axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        const Vec<N> k4 = rhs(t + c4 * h, y4);
        const Vec<N> y5 = axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        const Vec<N> k5 = rhs(t + c5 * h, y5);
        const Vec<N> y6 = axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        const Vec<N> k6 = rhs(t + h, y6);
        const Vec<N> ynew = axpy<N>(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const Vec<N> k7 = rhs(t + h, ynew);
        stats.evaluations += 6;

        double err = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sk = opt.tol * (1 + std::max(std::abs(y[i]), std::abs(ynew[i])));
            err = std::max(err, std::abs(ei) / sk);
        }
        if (!std::isfinite(err))
            err = 1e10;

        if (err <= 1) {
            DenseStep<N> dense;
            dense.t0 = t;
            dense.t1 = (t + h >= t1 || h == t1 - t) ? t1 : t + h;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                dense.r1[i] = y[i];
                dense.r2[i] = ydiff;
                dense.r3[i] = bspl;
                dense.r4[i] = ydiff - h * k7[i] - bspl;
                dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            t = dense.t1;
            y = ynew;
            k1 = k7;
            ++stats.accepted;
            observer(dense);
            double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (last_rejected)
                fac = std::min(fac, 1.0);
            h *= fac;
            if (opt.max_step > 0)
                h = std::min(h, opt.max_step);
            last_rejected = false;
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
        }
    }
    return stats;
}

template <std::size_t N, class Rhs, class Observer>
Stats integrate_fixed(Rhs& rhs, Vec<N>& y, double t0, double t1, const Options& opt, Observer& observer) {
    Stats stats;
    if (t1 == t0)
        return stats;
    const double span = t1 - t0;
    const auto steps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(span / (6.283185307179586476925286766559 / opt.fixed_steps_per_period) - 1e-9)));
    if (steps > opt.max_steps)
        throw solver_error("integrator exceeded the maximum number of steps");
    const double h = span / static_cast<double>(steps);
    Vec<N> f0 = rhs(t0, y);
    ++stats.evaluations;
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = t0 + static_cast<double>(n) * h;
        const double tn = n + 1 == steps ? t1 : t0 + static_cast<double>(n + 1) * h;
        const double hs = tn - t;
        const Vec<N> k2 = rhs(t + 0.5 * hs, axpy<N>(y, hs, {{0.5, &f0}}));
        const Vec<N> k3 = rhs(t + 0.5 * hs, axpy<N>(y, hs, {{0.5, &k2}}));
        const Vec<N> k4 = rhs(tn, axpy<N>(y, hs, {{1.0, &k3}}));
        const Vec<N> ynew = axpy<N>(y, hs, {{1.0 / 6, &f0}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
        const Vec<N> f1 = rhs(tn, ynew);
        stats.evaluations += 4;
        DenseStep<N> dense;
        dense.t0 = t;
        dense.t1 = tn;
        for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y[i];
            dense.r1[i] = y[i];
            dense.r2[i] = ydiff;
            dense.r3[i] = hs * f0[i] - ydiff;
            dense.r4[i] = ydiff - hs * f1[i] - dense.r3[i];
            dense.r5[i] = 0;
        }
        y = ynew;
        f0 = f1;
        ++stats.accepted;
        observer(dense);
    }
    return stats;
}

} // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 >= t0), leaving the final
/// state in y. observer(const DenseStep<N>&) is called after every accepted
/// step; the interpolant is valid on [step.t0, step.t1].
template <std::size_t N, class Rhs, class Observer>
Stats integrate(Rhs&& rhs, Vec<N>& y, double t0, double t1, const Options& opt, Observer&& observer) {
    detail::validate(opt, t0, t1);
    if (opt.method == Method::fixed_step)
        return detail::integrate_fixed<N>(rhs, y, t0, t1, opt, observer);
    return detail::integrate_adaptive<N>(rhs, y, t0, t1, opt, observer);
}

template <std::size_t N, class Rhs>
Stats integrate(Rhs&& rhs, Vec<N>& y, double t0, double t1, const Options& opt) {
    auto ignore = [](const DenseStep<N>&) {};
    return integrate<N>(rhs, y, t0, t1, opt, ignore);
}

} // namespace csit::ode
