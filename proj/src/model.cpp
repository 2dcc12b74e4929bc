#include "stablecir/model.hpp"

#include <cmath>
#include <stdexcept>

namespace stablecir {

void ModelParams::validate() const {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("model: a must be >= 0");
    if (!std::isfinite(b)) throw std::invalid_argument("model: b must be finite");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("model: sigma must be >= 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("model: delta must be > 0");
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::invalid_argument("model: alpha must lie in (1,2)");
    if (!(y0 >= 0.0) || !std::isfinite(y0)) throw std::invalid_argument("model: y0 must be >= 0");
}

ModelParams make_params(double a, double b, double sigma, double delta, double alpha, double y0) {
    ModelParams p{a, b, sigma, delta, alpha, y0};
    p.validate();
    return p;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        case Regime::Supercritical: return "supercritical";
    }
    return "?";
}

double branching_mechanism(const ModelParams& p, double z) {
    if (z < 0.0) throw std::invalid_argument("branching_mechanism: z must be >= 0");
    if (z == 0.0) return 0.0;
    return 0.5 * p.sigma * p.sigma * z * z + std::pow(p.delta, p.alpha) / p.alpha * std::pow(z, p.alpha) +
           p.b * z;
}

double immigration_mechanism(const ModelParams& p, double z) {
    if (z < 0.0) throw std::invalid_argument("immigration_mechanism: z must be >= 0");
    return p.a * z;
}

double branching_mechanism_deriv(const ModelParams& p, double z) {
    if (z <= 0.0) return p.b;
    return p.sigma * p.sigma * z + std::pow(p.delta, p.alpha) * std::pow(z, p.alpha - 1.0) + p.b;
}

namespace {

// doubles the outer endpoint until f changes sign; ledger of the search is
// the caller's bracket [lo, hi]
template <class F>
void expand_upper(F f, double& lo, double& hi, int cap = 200) {
    double fhi = f(hi);
    const double flo_sign = f(lo) <= 0.0 ? -1.0 : 1.0;
    int n = 0;
    while ((fhi <= 0.0 ? -1.0 : 1.0) == flo_sign) {
        lo = hi;
        hi *= 2.0;
        fhi = f(hi);
        if (++n > cap) throw std::runtime_error("model: bracket expansion exceeded cap");
    }
}

} // namespace

double theta0(const ModelParams& p) {
    p.validate();
    if (p.b >= 0.0) return 0.0;
    const double da = std::pow(p.delta, p.alpha);
    if (p.sigma == 0.0) {
        // R(z) = z (delta^alpha z^{alpha-1}/alpha + b): root at (-b alpha / delta^alpha)^{1/(alpha-1)}
        return std::pow(-p.b * p.alpha / da, 1.0 / (p.alpha - 1.0));
    }
    auto f = [&](double z) { return branching_mechanism(p, z); };
    double lo = 1e-300, hi = 1.0;
    expand_upper(f, lo, hi);
    return detail::bisect(f, lo, hi, 1e-12);
}

double c_v_root(const ModelParams& p, double v) {
    p.validate();
    if (!(v < 0.0)) throw std::invalid_argument("c_v_root: v must be < 0");
    if (p.b < 0.0) throw std::invalid_argument("c_v_root: requires b >= 0");
    // R(-x) = -v with x < 0 is R(w) = -v with w = -x > 0; R is strictly
    // increasing on (0,inf) for b >= 0, so bisect on w.
    auto f = [&](double w) { return branching_mechanism(p, w) + v; };
    double lo = 1e-300, hi = 1.0;
    expand_upper(f, lo, hi);
    return -detail::bisect(f, lo, hi, 1e-12);
}

double mean_Y(const ModelParams& p, double t) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("mean_Y: t must be >= 0");
    const double scale = std::max({1.0, std::abs(p.a), p.y0});
    if (std::abs(p.b) < 1e-12 * scale) return p.y0 + p.a * t;
    // a(1-e^{-bt})/b via expm1 to avoid cancellation for small |b|t
    return p.y0 * std::exp(-p.b * t) - p.a * std::expm1(-p.b * t) / p.b;
}

Regime classify(const ModelParams& p) {
    p.validate();
    if (p.b > 0.0) return Regime::Subcritical;
    if (p.b < 0.0) return Regime::Supercritical;
    return Regime::Critical;
}

} // namespace stablecir
