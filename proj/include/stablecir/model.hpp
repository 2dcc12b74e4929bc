#pragma once

#include <string>

namespace stablecir {

// Parameter vector of the stable CIR SDE
//   dY = (a - b Y) dt + sigma sqrt(Y) dW + delta Y^{1/alpha} dL,
// plus the deterministic initial value y0. Single source of truth for the
// branching/immigration mechanisms and the roots built from them.
struct ModelParams {
    double a = 0.0;      // immigration rate, >= 0
    double b = 0.0;      // growth rate, any sign
    double sigma = 0.0;  // diffusion coefficient, >= 0
    double delta = 1.0;  // stable-noise coefficient, > 0
    double alpha = 1.5;  // stability index, in (1,2)
    double y0 = 0.0;     // initial value, >= 0

    // throws std::invalid_argument on violation
    void validate() const;
};

ModelParams make_params(double a, double b, double sigma, double delta, double alpha, double y0);

enum class Regime { Subcritical, Critical, Supercritical };

std::string regime_name(Regime r);

// R(z) = sigma^2 z^2 / 2 + delta^alpha z^alpha / alpha + b z,  z >= 0
double branching_mechanism(const ModelParams& p, double z);

// F(z) = a z
double immigration_mechanism(const ModelParams& p, double z);

// derivative R'(z), used by solvers
double branching_mechanism_deriv(const ModelParams& p, double z);

// theta0 = inf{z > 0 : R(z) >= 0}; zero when b >= 0, the unique positive
// root of R when b < 0 (closed form for sigma = 0, bisection otherwise).
double theta0(const ModelParams& p);

// For b >= 0 and v < 0: the unique x < 0 with R(-x) = -v.
double c_v_root(const ModelParams& p, double v);

// E(Y_t) = e^{-bt}(y0 - a/b) + a/b for b != 0, y0 + a t for b = 0.
double mean_Y(const ModelParams& p, double t);

Regime classify(const ModelParams& p);

namespace detail {

// Plain bisection on [lo, hi] assuming f(lo), f(hi) straddle zero. Bisection
// rather than Newton: near 0 the mechanism has an unbounded second
// derivative, so derivative-based methods are not safe there.
template <class F>
double bisect(F f, double lo, double hi, double abs_tol, int max_iter = 400) {
    double flo = f(lo);
    for (int i = 0; i < max_iter && (hi - lo) > abs_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

} // namespace stablecir
