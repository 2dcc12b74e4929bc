#pragma once

#include "stablecir/model.hpp"
#include "stablecir/simulate.hpp"

#include <optional>
#include <string>

namespace stablecir {

enum class JumpMethod { FullInformation, PathOnly };

std::string jump_method_name(JumpMethod m);
JumpMethod jump_method_from_name(const std::string& name);

struct EstimateReport {
    double b_hat = 0.0;
    double sigma2_hat = 0.0;
    double integral_Y = 0.0;    // left Riemann sum of int_0^T Y ds
    double jump_integral = 0.0; // delta int_0^T Y_{u-}^{1/alpha} dL proxy
    double T = 0.0;
    // filled when the reference b (params_used.b) is taken as the truth:
    // sqrt(T)(b_hat-b) for b>0, e^{-bT/2}(b_hat-b) for b<0
    std::optional<double> scaled_error_deterministic;
    // (1/sigma) (int Y)^{1/2} (b_hat-b), needs sigma > 0
    std::optional<double> scaled_error_random;
    JumpMethod method = JumpMethod::FullInformation;
};

// sigma^2 statistic: (realized quadratic variation of the grid increments
// minus the squared recorded jumps) over the left Riemann sum of Y,
// clamped at 0. Throws on a zero denominator.
double estimate_sigma2(const Path& path);

// delta int_0^T Y_{u-}^{1/alpha} dL. FullInformation sums the stored
// increments (exact for the scheme). PathOnly sums the recorded jumps and
// subtracts the analytic truncation compensator
// delta * (int Y^{1/alpha}) * tail_mean(eps) at eps = jump_threshold(dt).
double reconstruct_jump_integral(const Path& path, JumpMethod method);

// MLE of the growth rate:
//   b_hat = -(Y_T - y0 - a T - delta int Y^{1/alpha} dL) / int Y ds,
// with a, sigma, delta, alpha, y0 supplied as known through p; p.b is used
// as the reference value for the standardized errors.
EstimateReport mle_b(const Path& path, JumpMethod method, const ModelParams& p);

struct AuxiliaryEstimates {
    std::optional<double> log_ratio;             // -log(Y_T / Y_{T-1})
    std::optional<double> terminal_over_integral; // -Y_T / int_0^T Y ds
};

// Strongly consistent supercritical estimators of b built from the path
// alone; not computable when the needed grid values are nonpositive.
AuxiliaryEstimates auxiliary_supercritical_estimators(const Path& path);

} // namespace stablecir
