#include "stablecir/experiments.hpp"

#include "stablecir/rng.hpp"
#include "stablecir/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace stablecir {

void ExperimentConfig::validate() const {
    params.validate();
    if (n_reps < 2) throw std::invalid_argument("experiment: n_reps must be >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument("experiment: dt must be > 0");
    if (T_grid.empty()) throw std::invalid_argument("experiment: T_grid must be non-empty");
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
        if (!(T_grid[i] > 0.0)) throw std::invalid_argument("experiment: horizons must be > 0");
        if (i > 0 && !(T_grid[i] > T_grid[i - 1]))
            throw std::invalid_argument("experiment: T_grid must be strictly increasing");
    }
    if (diagnostics.v_transform) {
        for (double u : diagnostics.u_grid)
            if (u > 0.0) throw std::invalid_argument("experiment: u_grid must be nonpositive");
    }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730950488); }

// Acklam's rational approximation, refined by one Halley step; |err| < 1e-13
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p in (0,1) required");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * 3.141592653589793) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

namespace {

// Q_KS(x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2)
double ks_tail(double x) {
    if (x < 1e-8) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
        sum += term;
        if (std::abs(term) < 1e-14) break;
    }
    return std::min(1.0, std::max(0.0, sum));
}

double nan_val() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace

std::pair<double, double> ks_normal(const std::vector<double>& samples) {
    if (samples.size() < 20) throw std::invalid_argument("ks_normal: needs >= 20 samples");
    std::vector<double> x = samples;
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf(x[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    const double sn = std::sqrt(n);
    const double p = ks_tail((sn + 0.12 + 0.11 / sn) * d);  // Stephens' correction
    return {d, p};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    const std::size_t n_T = cfg.T_grid.size();
    const std::size_t n_tasks = static_cast<std::size_t>(cfg.n_reps) * n_T;
    ExperimentResult res;
    res.rows.resize(n_tasks);

    auto run_task = [&](std::size_t idx) {
        const int rep = static_cast<int>(idx / n_T);
        const std::size_t t_idx = idx % n_T;
        RepRow& row = res.rows[idx];
        row.rep = rep;
        row.T = cfg.T_grid[t_idx];
        row.seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(rep), t_idx);
        row.b_hat = row.err_det = row.err_rand = nan_val();
        row.aux_log_ratio = row.aux_term_over_int = nan_val();
        row.scaled_y_T = row.scaled_int_Y = nan_val();
        try {
            const auto n_steps = static_cast<std::size_t>(std::llround(row.T / cfg.dt));
            const Path path = simulate_path(cfg.params, row.T, n_steps, row.seed);
            const EstimateReport rep_out = mle_b(path, cfg.method, cfg.params);
            row.b_hat = rep_out.b_hat;
            if (rep_out.scaled_error_deterministic) row.err_det = *rep_out.scaled_error_deterministic;
            if (rep_out.scaled_error_random) row.err_rand = *rep_out.scaled_error_random;
            const auto aux = auxiliary_supercritical_estimators(path);
            if (aux.log_ratio) row.aux_log_ratio = *aux.log_ratio;
            if (aux.terminal_over_integral) row.aux_term_over_int = *aux.terminal_over_integral;
            const double damp = std::exp(cfg.params.b * row.T);
            row.scaled_y_T = damp * path.values.back();
            row.scaled_int_Y = damp * rep_out.integral_Y;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    };

    const int n_workers = std::max(1, workers);
    if (n_workers == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) run_task(i);
            });
        for (auto& th : pool) th.join();
    }

    // reductions run sequentially in T-grid order
    for (std::size_t t_idx = 0; t_idx < n_T; ++t_idx) {
        HorizonSummary s;
        s.T = cfg.T_grid[t_idx];
        std::vector<double> bhats, rand_errs, abs_errs;
        for (int rep = 0; rep < cfg.n_reps; ++rep) {
            const RepRow& row = res.rows[static_cast<std::size_t>(rep) * n_T + t_idx];
            if (!row.ok) continue;
            bhats.push_back(row.b_hat);
            if (std::isfinite(row.err_rand)) rand_errs.push_back(row.err_rand);
            abs_errs.push_back(std::abs(row.b_hat - cfg.params.b));
        }
        s.n_effective = static_cast<int>(bhats.size());
        s.mean_b_hat = s.var_b_hat = s.ks_stat = s.ks_p = s.median_abs_err = nan_val();
        if (!bhats.empty()) {
            double m = 0.0;
            for (double v : bhats) m += v;
            m /= static_cast<double>(bhats.size());
            s.mean_b_hat = m;
            if (bhats.size() > 1) {
                double ss = 0.0;
                for (double v : bhats) ss += (v - m) * (v - m);
                s.var_b_hat = ss / static_cast<double>(bhats.size() - 1);
            }
        }
        if (cfg.diagnostics.ks_normal && rand_errs.size() >= 20) {
            const auto [d, pv] = ks_normal(rand_errs);
            s.ks_stat = d;
            s.ks_p = pv;
        }
        if (!abs_errs.empty()) {
            std::sort(abs_errs.begin(), abs_errs.end());
            const std::size_t n = abs_errs.size();
            s.median_abs_err = (n % 2 == 1) ? abs_errs[n / 2]
                                            : 0.5 * (abs_errs[n / 2 - 1] + abs_errs[n / 2]);
        }
        res.summaries.push_back(s);
    }

    // supercritical V diagnostics at the largest horizon
    res.v_identity_fraction = nan_val();
    if (cfg.params.b < 0.0) {
        int n_ok = 0, n_pass = 0;
        for (int rep = 0; rep < cfg.n_reps; ++rep) {
            const RepRow& row = res.rows[static_cast<std::size_t>(rep) * n_T + (n_T - 1)];
            if (!row.ok || !std::isfinite(row.scaled_y_T)) continue;
            ++n_ok;
            const double lhs = std::abs(row.scaled_int_Y + row.scaled_y_T / cfg.params.b);
            if (lhs / std::max(row.scaled_y_T, 0.01) < 0.05) ++n_pass;
        }
        if (n_ok > 0) res.v_identity_fraction = static_cast<double>(n_pass) / n_ok;
    }
    if (cfg.diagnostics.v_transform && !cfg.diagnostics.u_grid.empty()) {
        for (double u : cfg.diagnostics.u_grid) {
            VCheckRow v;
            v.u = u;
            double sum = 0.0, sum2 = 0.0;
            int n = 0;
            for (int rep = 0; rep < cfg.n_reps; ++rep) {
                const RepRow& row = res.rows[static_cast<std::size_t>(rep) * n_T + (n_T - 1)];
                if (!row.ok || !std::isfinite(row.scaled_y_T)) continue;
                const double val = std::exp(u * row.scaled_y_T);
                sum += val;
                sum2 += val * val;
                ++n;
            }
            if (n > 1) {
                v.mc_mean = sum / n;
                v.mc_se = std::sqrt(std::max(0.0, (sum2 / n - v.mc_mean * v.mc_mean) / (n - 1)));
            } else {
                v.mc_mean = v.mc_se = nan_val();
            }
            v.analytic = (u == 0.0) ? 1.0 : laplace_V(cfg.params, u).value;
            res.v_table.push_back(v);
        }
    }

    res.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

std::vector<std::pair<double, double>> consistency_curve(const ExperimentConfig& cfg, int workers) {
    ExperimentConfig c = cfg;
    c.diagnostics.consistency = true;
    const ExperimentResult res = run_experiment(c, workers);
    std::vector<std::pair<double, double>> out;
    out.reserve(res.summaries.size());
    for (const auto& s : res.summaries) out.push_back({s.T, s.median_abs_err});
    return out;
}

std::vector<VCheckRow> check_V_limit(const ExperimentConfig& cfg, const std::vector<double>& u_grid,
                                     int workers) {
    if (!(cfg.params.b < 0.0)) throw std::invalid_argument("check_V_limit: requires b < 0");
    ExperimentConfig c = cfg;
    c.diagnostics.v_transform = true;
    c.diagnostics.u_grid = u_grid;
    return run_experiment(c, workers).v_table;
}

} // namespace stablecir
