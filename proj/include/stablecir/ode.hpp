#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stablecir {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    long max_steps = 2000000;
    bool store_trajectory = false;
};

template <std::size_t N>
struct OdeResult {
    std::array<double, N> y{};
    long steps_taken = 0;
    double max_residual = 0.0;  // largest accepted scaled local error estimate
    std::vector<std::pair<double, std::array<double, N>>> trajectory;
};

// Embedded Dormand-Prince 5(4) with adaptive steps. `clamp` is applied to
// the state after every accepted step; it must map states back into the
// invariant domain (e.g. [0,inf) for v, (-inf,0] for psi) where the
// fractional-power right-hand side stays well defined.
template <std::size_t N, class F, class Clamp>
OdeResult<N> integrate_rk45(F f, std::array<double, N> y0, double t0, double t1,
                            const OdeOptions& opts, Clamp clamp) {
    using State = std::array<double, N>;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeResult<N> res;
    res.y = y0;
    if (t1 <= t0) {
        if (opts.store_trajectory) res.trajectory.push_back({t0, y0});
        return res;
    }

    State y = y0;
    double t = t0;
    double h = (t1 - t0) / 100.0;
    if (opts.store_trajectory) res.trajectory.push_back({t, y});

    State k1 = f(t, y);
    bool have_k1 = true;

    auto axpy = [](State& out, const State& base, double hh, const State& k, double c) {
        for (std::size_t i = 0; i < N; ++i) out[i] = base[i] + hh * c * k[i];
    };
    (void)axpy;

    while (t < t1) {
        if (res.steps_taken >= opts.max_steps)
            throw std::runtime_error("ode: step budget exhausted (stiffness?)");
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("ode: step size underflow");
        if (t + h > t1) h = t1 - t;

        if (!have_k1) {
            k1 = f(t, y);
            have_k1 = true;
        }
        State tmp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        State k2 = f(t + c2 * h, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State k3 = f(t + c3 * h, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State k4 = f(t + c4 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State k5 = f(t + c5 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        State k6 = f(t + h, tmp);
        State y5;
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        State k7 = f(t + h, y5);

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                   e7 * k7[i]);
            const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(ei) / scale);
        }

        ++res.steps_taken;
        if (err <= 1.0) {
            t += h;
            y = y5;
            clamp(y);
            // FSAL only valid when the clamp did not move the state
            if (y == y5) {
                k1 = k7;
            } else {
                have_k1 = false;
            }
            res.max_residual = std::max(res.max_residual, err);
            if (opts.store_trajectory) res.trajectory.push_back({t, y});
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, factor));
    }
    res.y = y;
    return res;
}

} // namespace stablecir
