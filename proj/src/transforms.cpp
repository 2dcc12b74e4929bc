#include "stablecir/transforms.hpp"

#include "stablecir/ode.hpp"
#include "stablecir/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stablecir {

namespace {

// (-x)^alpha as exp(alpha log(-x)) with a 0-clamp guard; the right-hand
// sides are non-Lipschitz only at the invariant boundary x = 0.
inline double neg_pow(double x, double alpha) {
    if (x >= 0.0) return 0.0;
    return std::exp(alpha * std::log(-x));
}

struct Mech {
    double half_sigma2, da, alpha, b;
    explicit Mech(const ModelParams& p)
        : half_sigma2(0.5 * p.sigma * p.sigma),
          da(std::pow(p.delta, p.alpha)),
          alpha(p.alpha),
          b(p.b) {}
    double R(double z) const {
        if (z <= 0.0) return 0.0;
        return half_sigma2 * z * z + da / alpha * std::pow(z, alpha) + b * z;
    }
};

OdeSolution to_solution(const OdeResult<2>& r) {
    OdeSolution s;
    s.terminal_value = r.y[0];
    s.steps_taken = r.steps_taken;
    s.max_residual = r.max_residual;
    s.trajectory.reserve(r.trajectory.size());
    for (const auto& [t, y] : r.trajectory) s.trajectory.push_back({t, y[0]});
    return s;
}

// integrate (v, int F(v)) forward
OdeResult<2> run_v(const ModelParams& p, double lambda, double t, bool store) {
    const Mech m(p);
    const double a = p.a;
    OdeOptions opts;
    opts.store_trajectory = store;
    auto rhs = [&](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{-m.R(y[0]), a * y[0]};
    };
    auto clamp = [](std::array<double, 2>& y) {
        if (y[0] < 0.0) y[0] = 0.0;
    };
    return integrate_rk45<2>(rhs, {lambda, 0.0}, 0.0, t, opts, clamp);
}

// integrate (psi, int psi) forward
OdeResult<2> run_psi(const ModelParams& p, double u, double v, double t, bool store) {
    const Mech m(p);
    OdeOptions opts;
    opts.store_trajectory = store;
    auto rhs = [&](double, const std::array<double, 2>& y) {
        const double psi = y[0];
        return std::array<double, 2>{
            m.half_sigma2 * psi * psi + m.da / m.alpha * neg_pow(psi, m.alpha) - m.b * psi + v, psi};
    };
    auto clamp = [](std::array<double, 2>& y) {
        if (y[0] > 0.0) y[0] = 0.0;
    };
    return integrate_rk45<2>(rhs, {u, 0.0}, 0.0, t, opts, clamp);
}

// int_0^c F(z)/R(z) dz for b >= 0 through the substitution z = s^{1/(2-alpha)},
// which flattens the z^{1-alpha} integrable singularity at 0 (present when
// b = 0).
QuadResult integral_F_over_R_origin(const ModelParams& p, double c) {
    if (c <= 0.0) return {};
    const double m = 2.0 - p.alpha;
    const double da = std::pow(p.delta, p.alpha);
    const double a = p.a;
    const ModelParams pp = p;
    auto g = [m, da, a, pp](double s) {
        const double z = std::pow(s, 1.0 / m);
        const double denom = 0.5 * pp.sigma * pp.sigma * z + da / pp.alpha * std::pow(z, pp.alpha - 1.0) + pp.b;
        const double xprime = std::pow(s, (pp.alpha - 1.0) / m) / m;
        return a / denom * xprime;
    };
    return integrate_adaptive(g, 0.0, std::pow(c, m), 1e-10, 1e-12);
}

// Pole-subtracted integrands lose all precision to cancellation within
// ~1e-7 of theta0; constant-extend them across that collar. The collar only
// ever matters for root-bracketing endpoints, where sign beats precision.
double clamp_off_pole(double z, double th) {
    const double w0 = 1e-7 * th;
    const double d = z - th;
    if (std::abs(d) >= w0) return z;
    return d < 0.0 ? th - w0 : th + w0;
}

// int_lo^hi F(z)/R(z) dz on a segment that never crosses a root of R.
// For b < 0 the simple pole of the integrand at theta0 is subtracted and
// integrated analytically, so segments ending arbitrarily close to theta0
// stay cheap; F/R is continuous at 0 in that case (limit a/b).
QuadResult integral_F_over_R_segment(const ModelParams& p, double lo, double hi) {
    QuadResult out;
    if (hi == lo) return out;
    const bool flip = hi < lo;
    if (flip) std::swap(lo, hi);
    const Mech m(p);
    const double a = p.a;
    if (p.b < 0.0) {
        const double th = theta0(p);
        const double residue = a * th / branching_mechanism_deriv(p, th);
        auto reg = [&](double z) {
            if (z <= 0.0) return a / p.b + residue / th;
            z = clamp_off_pole(z, th);
            return a * z / m.R(z) - residue / (z - th);
        };
        out = integrate_adaptive(reg, lo, hi, 1e-10, 1e-12);
        out.value += residue * (std::log(std::abs(hi - th)) - std::log(std::abs(lo - th)));
    } else if (lo == 0.0) {
        out = integral_F_over_R_origin(p, hi);
    } else {
        auto f = [&](double z) { return a * z / m.R(z); };
        out = integrate_adaptive(f, lo, hi, 1e-10, 1e-12);
    }
    if (flip) out.value = -out.value;
    return out;
}

} // namespace

OdeSolution solve_v(const ModelParams& p, double lambda, double t, bool store_trajectory) {
    p.validate();
    if (lambda < 0.0) throw std::invalid_argument("solve_v: lambda must be >= 0");
    if (t < 0.0) throw std::invalid_argument("solve_v: t must be >= 0");
    if (lambda == 0.0) {
        OdeSolution s;
        s.terminal_value = 0.0;
        if (store_trajectory) s.trajectory = {{0.0, 0.0}, {t, 0.0}};
        return s;
    }
    return to_solution(run_v(p, lambda, t, store_trajectory));
}

OdeSolution solve_psi(const ModelParams& p, double u, double v, double t, bool store_trajectory) {
    p.validate();
    if (u > 0.0) throw std::invalid_argument("solve_psi: u must be <= 0");
    if (v > 0.0) throw std::invalid_argument("solve_psi: v must be <= 0");
    if (t < 0.0) throw std::invalid_argument("solve_psi: t must be >= 0");
    if (u == 0.0 && v == 0.0) {
        OdeSolution s;
        s.terminal_value = 0.0;
        if (store_trajectory) s.trajectory = {{0.0, 0.0}, {t, 0.0}};
        return s;
    }
    return to_solution(run_psi(p, u, v, t, store_trajectory));
}

TransformResult laplace_Y(const ModelParams& p, double lambda, double t) {
    p.validate();
    if (lambda < 0.0) throw std::invalid_argument("laplace_Y: lambda must be >= 0");
    if (t < 0.0) throw std::invalid_argument("laplace_Y: t must be >= 0");
    TransformResult out;
    if (lambda == 0.0) return out;
    if (t == 0.0) {
        out.value = std::exp(-lambda * p.y0);
        return out;
    }
    const auto r = run_v(p, lambda, t, false);
    out.value = std::exp(-p.y0 * r.y[0] - r.y[1]);
    out.ode_steps = r.steps_taken;
    out.error_estimate = r.max_residual;
    return out;
}

TransformResult laplace_Y_substitution(const ModelParams& p, double lambda, double t) {
    p.validate();
    if (lambda < 0.0) throw std::invalid_argument("laplace_Y: lambda must be >= 0");
    if (t < 0.0) throw std::invalid_argument("laplace_Y: t must be >= 0");
    TransformResult out;
    if (lambda == 0.0) return out;
    if (t == 0.0) {
        out.value = std::exp(-lambda * p.y0);
        return out;
    }
    if (p.b < 0.0) {
        const double th = theta0(p);
        if (std::abs(lambda - th) < 1e-12 * std::max(1.0, th))
            throw std::domain_error("laplace_Y_substitution: lambda = theta0 is excluded");
    }
    const auto r = run_v(p, lambda, t, false);
    const double vt = r.y[0];
    // v_s stays strictly on one side of every root of R, so the integrand
    // is continuous on the segment [lambda, v_t]
    const QuadResult q = integral_F_over_R_segment(p, lambda, vt);
    out.value = std::exp(-p.y0 * vt + q.value);
    out.ode_steps = r.steps_taken;
    out.quad_intervals = q.intervals;
    out.error_estimate = q.error_estimate + r.max_residual;
    return out;
}

TransformResult joint_laplace(const ModelParams& p, double u, double v, double t) {
    p.validate();
    if (u > 0.0 || v > 0.0) throw std::invalid_argument("joint_laplace: u, v must be <= 0");
    if (t < 0.0) throw std::invalid_argument("joint_laplace: t must be >= 0");
    TransformResult out;
    if (u == 0.0 && v == 0.0) return out;
    if (t == 0.0) {
        out.value = std::exp(u * p.y0);
        return out;
    }
    const auto r = run_psi(p, u, v, t, false);
    out.value = std::exp(p.y0 * r.y[0] + p.a * r.y[1]);
    out.ode_steps = r.steps_taken;
    out.error_estimate = r.max_residual;
    return out;
}

TransformResult stationary_laplace(const ModelParams& p, double lambda) {
    p.validate();
    if (p.b < 0.0) throw std::domain_error("stationary_laplace: requires b >= 0");
    if (lambda < 0.0) throw std::invalid_argument("stationary_laplace: lambda must be >= 0");
    TransformResult out;
    if (lambda == 0.0) return out;
    const QuadResult q = integral_F_over_R_origin(p, lambda);
    out.value = std::exp(-q.value);
    out.quad_intervals = q.intervals;
    out.error_estimate = q.error_estimate;
    return out;
}

double stationary_mean(const ModelParams& p) {
    p.validate();
    if (p.b < 0.0) throw std::domain_error("stationary_mean: requires b >= 0");
    if (p.b > 0.0) return p.a / p.b;
    if (p.a == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

double K_fun(const ModelParams& p, double lambda) {
    p.validate();
    if (!(p.b < 0.0)) throw std::domain_error("K_fun: requires b < 0");
    const double th = theta0(p);
    if (!(lambda > 0.0 && lambda < th)) throw std::domain_error("K_fun: lambda must lie in (0, theta0)");
    // b/R - 1/z = -(sigma^2 z/2 + delta^alpha z^{alpha-1}/alpha)/R(z); the
    // z^{alpha-2} singularity at 0 flattens under z = s^{1/(alpha-1)}, and
    // on the upper part the theta0 pole is subtracted analytically
    const Mech m(p);
    const double mm = p.alpha - 1.0;
    const double split = std::min(lambda, 0.5 * th);
    auto g = [&](double s) {
        const double z = std::pow(s, 1.0 / mm);
        const double num = m.half_sigma2 * z + m.da / m.alpha * std::pow(z, mm);
        const double xprime = std::pow(s, (2.0 - p.alpha) / mm) / mm;
        return -num / m.R(z) * xprime;
    };
    double total = integrate_adaptive(g, 0.0, std::pow(split, mm), 1e-11, 1e-12).value;
    if (lambda > split) {
        const double residue = p.b / branching_mechanism_deriv(p, th);
        auto reg = [&](double z) {
            z = clamp_off_pole(z, th);
            return p.b / m.R(z) - 1.0 / z - residue / (z - th);
        };
        total += integrate_adaptive(reg, split, lambda, 1e-11, 1e-12).value;
        total += residue * (std::log(th - lambda) - std::log(th - split));
    }
    return lambda * std::exp(total);
}

double K_inverse(const ModelParams& p, double x) {
    p.validate();
    if (!(p.b < 0.0)) throw std::domain_error("K_inverse: requires b < 0");
    if (!(x > 0.0)) throw std::invalid_argument("K_inverse: x must be > 0");
    const double th = theta0(p);
    double lo = th * 1e-12, hi = th * (1.0 - 1e-12);
    // K is strictly increasing from 0 to +inf on (0, theta0)
    if (K_fun(p, lo) >= x) return lo;
    if (K_fun(p, hi) <= x) return hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (K_fun(p, mid) < x)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-10 * hi) break;
    }
    return 0.5 * (lo + hi);
}

TransformResult laplace_V(const ModelParams& p, double u) {
    p.validate();
    if (!(p.b < 0.0)) throw std::domain_error("laplace_V: requires b < 0");
    if (u > 0.0) throw std::invalid_argument("laplace_V: u must be <= 0");
    TransformResult out;
    if (u == 0.0) return out;  // psi_0^* = 0
    const double psi_star = -K_inverse(p, -u);
    // F/R is continuous on [0, -psi^*]: lim_{z->0} F/R = a/b and
    // -psi^* < theta0 strictly; cap the upper limit defensively
    const QuadResult q = integral_F_over_R_segment(p, 0.0, -psi_star * (1.0 - 1e-14));
    out.value = std::exp(p.y0 * psi_star + q.value);
    out.quad_intervals = q.intervals;
    out.error_estimate = q.error_estimate;
    return out;
}

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

namespace closed {

double K_sigma0(const ModelParams& p, double lambda) {
    p.validate();
    if (p.sigma != 0.0) throw std::domain_error("K_sigma0: requires sigma = 0");
    if (!(p.b < 0.0)) throw std::domain_error("K_sigma0: requires b < 0");
    const double da = std::pow(p.delta, p.alpha);
    return std::pow(da / (p.b * p.alpha) + std::pow(lambda, 1.0 - p.alpha), 1.0 / (1.0 - p.alpha));
}

double K_inverse_sigma0(const ModelParams& p, double x) {
    p.validate();
    if (p.sigma != 0.0) throw std::domain_error("K_inverse_sigma0: requires sigma = 0");
    if (!(p.b < 0.0)) throw std::domain_error("K_inverse_sigma0: requires b < 0");
    const double da = std::pow(p.delta, p.alpha);
    return std::pow(std::pow(x, 1.0 - p.alpha) - da / (p.b * p.alpha), 1.0 / (1.0 - p.alpha));
}

double psi_star_sigma0(const ModelParams& p, double u) {
    if (u == 0.0) return 0.0;
    return -K_inverse_sigma0(p, -u);
}

} // namespace closed

namespace alpha32 {

namespace {

void require_alpha32(const ModelParams& p) {
    if (std::abs(p.alpha - 1.5) > 1e-12) throw std::domain_error("alpha32: requires alpha = 3/2");
}

} // namespace

double theta0(const ModelParams& p) {
    p.validate();
    require_alpha32(p);
    if (p.b >= 0.0) return 0.0;
    const double d32 = std::pow(p.delta, 1.5);
    if (p.sigma == 0.0) return 9.0 * p.b * p.b / (4.0 * p.delta * p.delta * p.delta);
    const double s2 = p.sigma * p.sigma;
    const double A = 2.0 * d32 / (3.0 * s2);
    const double D = std::sqrt(A * A - 2.0 * p.b / s2);
    return (D - A) * (D - A);
}

double stationary_laplace(const ModelParams& p, double lambda) {
    p.validate();
    require_alpha32(p);
    if (p.b < 0.0) throw std::domain_error("alpha32::stationary_laplace: requires b >= 0");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (lambda == 0.0) return 1.0;
    const double sq = std::sqrt(lambda);
    const double d32 = std::pow(p.delta, 1.5);
    if (p.sigma == 0.0) {
        const double pure = std::exp(-3.0 * p.a / d32 * sq);
        if (p.b == 0.0) return pure;
        return pure * std::pow(1.0 + 2.0 * d32 / (3.0 * p.b) * sq, 9.0 * p.b * p.a / (2.0 * std::pow(p.delta, 3.0)));
    }
    const double s2 = p.sigma * p.sigma;
    if (p.b == 0.0) return std::pow(3.0 * s2 / (4.0 * d32) * sq + 1.0, -4.0 * p.a / s2);
    const double A = 2.0 * d32 / (3.0 * s2);
    const double crit = 2.0 * std::pow(p.delta, 3.0) / (9.0 * s2);
    const double base = std::pow(s2 / (2.0 * p.b) * lambda + 2.0 * d32 / (3.0 * p.b) * sq + 1.0,
                                 -2.0 * p.a / s2);
    if (std::abs(p.b - crit) <= 1e-12 * crit) {
        // (y+A)^{-2} antiderivative evaluates to sq/(A(sq+A))
        return base * std::exp(4.0 * p.a / s2 * sq / (sq + A));
    }
    if (p.b > crit) {
        const double P = std::sqrt(2.0 * p.b / s2 - A * A);
        return base * std::exp(8.0 * p.a * d32 / (3.0 * s2 * s2) / P *
                               std::atan(P / ((2.0 * p.b / s2) / sq + A)));
    }
    const double D = std::sqrt(A * A - 2.0 * p.b / s2);
    const double ratio = (sq * (A + D) + 2.0 * p.b / s2) / (sq * (A - D) + 2.0 * p.b / s2);
    return base * std::pow(ratio, 4.0 * p.a * d32 / (3.0 * s2 * s2 * D));
}

double psi_residual(const ModelParams& p, double psi, double t, double u) {
    p.validate();
    require_alpha32(p);
    if (!(p.sigma > 0.0)) throw std::domain_error("alpha32::psi_residual: requires sigma > 0");
    if (!(psi < 0.0) || !(u < 0.0)) throw std::invalid_argument("psi_residual: psi, u must be < 0");
    const double g = std::sqrt(-psi);
    const double s0 = std::sqrt(-u);
    const double s2 = p.sigma * p.sigma;
    const double d32 = std::pow(p.delta, 1.5);
    const double A = 2.0 * d32 / (3.0 * s2);
    if (p.b == 0.0) {
        auto H = [&](double x) {
            return std::log(1.0 + 2.0 * A / x) / (4.0 * A * A) - 1.0 / (2.0 * A * x);
        };
        return (H(g) - H(s0)) + s2 / 4.0 * t;
    }
    const double q = 2.0 * p.b / s2;
    const double crit = 2.0 * std::pow(p.delta, 3.0) / (9.0 * s2);
    auto Q = [&](double x) { return x * x + 2.0 * A * x + q; };
    auto J = [&](double x) {
        if (std::abs(p.b - crit) <= 1e-12 * crit) return -1.0 / (x + A);
        if (p.b > crit) {
            const double P = std::sqrt(q - A * A);
            return std::atan((x + A) / P) / P;
        }
        const double D = std::sqrt(A * A - q);
        return std::log(std::abs((x + A - D) / (x + A + D))) / (2.0 * D);
    };
    auto H = [&](double x) {
        return std::log(x) / q - std::log(std::abs(Q(x))) / (2.0 * q) - A / q * J(x);
    };
    return (H(s0) - H(g)) - s2 / 4.0 * t;
}

double K_fun(const ModelParams& p, double lambda) {
    p.validate();
    require_alpha32(p);
    if (!(p.b < 0.0)) throw std::domain_error("alpha32::K_fun: requires b < 0");
    const double th = alpha32::theta0(p);
    if (!(lambda > 0.0 && lambda < th)) throw std::domain_error("alpha32::K_fun: lambda outside (0, theta0)");
    if (p.sigma == 0.0) return closed::K_sigma0(p, lambda);
    const double s2 = p.sigma * p.sigma;
    const double d32 = std::pow(p.delta, 1.5);
    const double A = 2.0 * d32 / (3.0 * s2);
    const double D = std::sqrt(A * A - 2.0 * p.b / s2);
    const double sq = std::sqrt(lambda);
    return lambda * (-2.0 * p.b / s2) * std::pow((D - A) / (D + A), A / D) *
           std::pow(D - A - sq, -1.0 - A / D) * std::pow(D + A + sq, -1.0 + A / D);
}

double laplace_V_sigma0(const ModelParams& p, double u) {
    p.validate();
    require_alpha32(p);
    if (p.sigma != 0.0) throw std::domain_error("alpha32::laplace_V_sigma0: requires sigma = 0");
    if (!(p.b < 0.0)) throw std::domain_error("alpha32::laplace_V_sigma0: requires b < 0");
    if (u > 0.0) throw std::invalid_argument("u must be <= 0");
    if (u == 0.0) return 1.0;
    const double d32 = std::pow(p.delta, 1.5);
    const double d3 = std::pow(p.delta, 3.0);
    const double w = std::pow(-u, -0.5) - 2.0 * d32 / (3.0 * p.b);
    return std::exp(-p.y0 / (w * w)) * std::exp(3.0 * p.a / d32 / w) *
           std::pow(1.0 - 2.0 * d32 / (3.0 * p.b) * std::sqrt(-u), 9.0 * p.a * p.b / (2.0 * d3));
}

} // namespace alpha32

} // namespace stablecir
