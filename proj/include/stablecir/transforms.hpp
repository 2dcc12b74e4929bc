#pragma once

#include "stablecir/model.hpp"

#include <utility>
#include <vector>

namespace stablecir {

struct OdeSolution {
    double terminal_value = 0.0;
    std::vector<std::pair<double, double>> trajectory;  // (time, value), optional
    long steps_taken = 0;
    double max_residual = 0.0;
};

struct TransformResult {
    double value = 1.0;
    double error_estimate = 0.0;  // quadrature/ODE error proxy
    long ode_steps = 0;
    int quad_intervals = 0;
};

// v_t(lambda): unique locally bounded solution of dv/dt = -R(v), v_0 = lambda.
// Solution clamped to [0,inf); monotone toward 0 for b >= 0 and toward
// theta0 for b < 0.
OdeSolution solve_v(const ModelParams& p, double lambda, double t, bool store_trajectory = false);

// psi_{u,v}(t): solution of psi' = sigma^2 psi^2/2 + delta^alpha (-psi)^alpha/alpha - b psi + v,
// psi(0) = u, for u <= 0, v <= 0; clamped to (-inf, 0].
OdeSolution solve_psi(const ModelParams& p, double u, double v, double t,
                      bool store_trajectory = false);

// E[e^{-lambda Y_t}] = exp{-y0 v_t(lambda) - int_0^t F(v_s(lambda)) ds}
// (the time-integral route; the integral is accumulated alongside the ODE).
TransformResult laplace_Y(const ModelParams& p, double lambda, double t);

// Same transform via the substitution route
// exp{-y0 v_t(lambda) + int_lambda^{v_t(lambda)} F(z)/R(z) dz};
// requires lambda != theta0 when b < 0.
TransformResult laplace_Y_substitution(const ModelParams& p, double lambda, double t);

// E[exp{u Y_t + v int_0^t Y_s ds}] = exp{y0 psi_{u,v}(t) + a int_0^t psi_{u,v}(s) ds}.
TransformResult joint_laplace(const ModelParams& p, double u, double v, double t);

// Stationary law (b >= 0): exp{-int_0^lambda F(x)/R(x) dx}.
TransformResult stationary_laplace(const ModelParams& p, double lambda);

// Mean of the stationary law: 0 if a=b=0, a/b if b>0, +inf if a>0, b=0.
double stationary_mean(const ModelParams& p);

// K(lambda) = lambda exp{int_0^lambda (b/R(z) - 1/z) dz} on (0, theta0), b < 0;
// strictly increasing onto (0, inf).
double K_fun(const ModelParams& p, double lambda);

// Inverse of K by bisection on (0, theta0) to 1e-10 relative in lambda.
double K_inverse(const ModelParams& p, double x);

// E[e^{uV}] = exp{y0 psi_u^* + int_0^{-psi_u^*} F(z)/R(z) dz} with
// psi_u^* = -K^{-1}(-u) for u < 0 (supercritical a.s. limit V of e^{bt} Y_t).
TransformResult laplace_V(const ModelParams& p, double u);

// Closed forms for alpha = 3/2 (and the sigma = 0 cases for general alpha).
// These are the independent oracles the numeric engines are checked against.
namespace closed {

// sigma = 0, b < 0 (general alpha): K and its inverse in closed form.
double K_sigma0(const ModelParams& p, double lambda);
double K_inverse_sigma0(const ModelParams& p, double x);

// sigma = 0, b < 0 (general alpha): psi_u^* in closed form.
double psi_star_sigma0(const ModelParams& p, double u);

} // namespace closed

namespace alpha32 {

// guards: throws std::domain_error unless alpha == 3/2 (and the stated case applies)
double theta0(const ModelParams& p);

// Laplace transform of the stationary law at lambda >= 0; covers the three
// sigma > 0 branches (b above/at/below 2 delta^3 / (9 sigma^2)), b = 0, and
// the two sigma = 0 cases.
double stationary_laplace(const ModelParams& p, double lambda);

// Residual of the implicit transcendental equation satisfied by
// psi_{u,0}(t) (sigma > 0); zero certifies a numeric psi value.
double psi_residual(const ModelParams& p, double psi, double t, double u);

// K(lambda) in closed form: product form for sigma > 0, Bernoulli form for
// sigma = 0; b < 0, lambda in (0, theta0).
double K_fun(const ModelParams& p, double lambda);

// Fully explicit Laplace transform of V for sigma = 0, b < 0.
double laplace_V_sigma0(const ModelParams& p, double u);

} // namespace alpha32

} // namespace stablecir
