#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace stablecir {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes/weights on [-1,1] (symmetric half listed).
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(F& f, double a, double b, double& value, double& err) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double x = h * gk_nodes[j];
        double fv;
        if (j == 7) {
            fv = f(c);
            resk += gk_wk[7] * fv;
            resg += gk_wg[3] * fv;
        } else {
            const double f1 = f(c - x);
            const double f2 = f(c + x);
            resk += gk_wk[j] * (f1 + f2);
            if (j % 2 == 1) resg += gk_wg[j / 2] * (f1 + f2);
        }
    }
    value = resk * h;
    const double diff = std::abs(resk - resg) * std::abs(h);
    // classic QUADPACK error sharpening
    err = diff > 0.0 ? std::min(diff, std::pow(200.0 * diff, 1.5)) : 0.0;
}

} // namespace detail

// Adaptive Gauss-Kronrod: bisects the interval with the largest error
// estimate until abs_tol/rel_tol is met.
template <class F>
QuadResult integrate_adaptive(F f, double a, double b, double abs_tol = 1e-10,
                              double rel_tol = 1e-10, int max_intervals = 4000) {
    QuadResult out;
    if (a == b) return out;
    struct Seg {
        double a, b, value, err;
    };
    std::vector<Seg> segs;
    double v, e;
    detail::gk15(f, a, b, v, e);
    segs.push_back({a, b, v, e});

    auto total = [&segs]() {
        double tv = 0.0, te = 0.0;
        for (const auto& s : segs) {
            tv += s.value;
            te += s.err;
        }
        return std::pair<double, double>(tv, te);
    };

    while (true) {
        auto [tv, te] = total();
        if (te <= std::max(abs_tol, rel_tol * std::abs(tv))) {
            out.value = tv;
            out.error_estimate = te;
            out.intervals = static_cast<int>(segs.size());
            return out;
        }
        if (static_cast<int>(segs.size()) >= max_intervals)
            throw std::runtime_error("quadrature: interval budget exhausted");
        auto worst = std::max_element(segs.begin(), segs.end(),
                                      [](const Seg& x, const Seg& y) { return x.err < y.err; });
        const Seg s = *worst;
        segs.erase(worst);
        const double mid = 0.5 * (s.a + s.b);
        Seg left{s.a, mid, 0.0, 0.0}, right{mid, s.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        segs.push_back(left);
        segs.push_back(right);
    }
}

} // namespace stablecir
