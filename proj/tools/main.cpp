// stablecir command-line front end: simulate | estimate | laplace |
// experiment | oracle-check. Configs are versioned JSON; unknown fields are
// rejected before any computation starts, and output files are only written
// after the run completes.

#include "stablecir/experiments.hpp"
#include "stablecir/inference.hpp"
#include "stablecir/io.hpp"
#include "stablecir/model.hpp"
#include "stablecir/simulate.hpp"
#include "stablecir/transforms.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace stablecir;

void emit_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", message}, {"kind", kind}}.dump() << "\n";
}

int cmd_simulate(const std::string& config_file, const std::string& out,
                 std::optional<std::uint64_t> seed_override) {
    SimulateJob job = simulate_job_from_json(load_json_file(config_file));
    if (seed_override) job.seed = *seed_override;
    const Path path = simulate_path(job.params, job.T, job.n_steps, job.seed, job.options);
    write_path_csv(path, out, out + ".json");
    return 0;
}

int cmd_estimate(const std::string& path_csv, const std::string& sidecar, const std::string& method,
                 const std::string& out) {
    const std::string side = sidecar.empty() ? path_csv + ".json" : sidecar;
    const Path path = read_path_csv(path_csv, side);
    const EstimateReport rep = mle_b(path, jump_method_from_name(method), path.params_used);
    const json j = estimate_report_to_json(rep);
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(j, out);
    return 0;
}

int cmd_laplace(const std::string& config_file, const std::string& out) {
    const LaplaceQuery q = laplace_query_from_json(load_json_file(config_file));
    TransformResult r;
    if (q.kind == "Y")
        r = laplace_Y(q.params, q.lambda, q.t);
    else if (q.kind == "joint")
        r = joint_laplace(q.params, q.u, q.v, q.t);
    else if (q.kind == "stationary")
        r = stationary_laplace(q.params, q.lambda);
    else
        r = laplace_V(q.params, q.u);
    const json j = laplace_result_to_json(q, r);
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(j, out);
    return 0;
}

int cmd_experiment(const std::string& config_file, const std::string& out, int workers,
                   std::optional<std::uint64_t> seed_override, const std::string& format) {
    ExperimentConfig cfg = experiment_config_from_json(load_json_file(config_file));
    if (seed_override) cfg.base_seed = *seed_override;
    const ExperimentResult res = run_experiment(cfg, workers);
    if (format == "csv" || format == "both")
        write_text_file(experiment_rows_to_csv(res), out + ".csv");
    if (format == "json" || format == "both")
        write_json_file(experiment_summary_to_json(cfg, res), out + ".json");
    return 0;
}

struct OracleRow {
    std::string name;
    double closed, numeric, rel;
    bool pass;
};

// Appendix-style closed forms vs the numeric engines on fixed grids.
int cmd_oracle_check(double tol) {
    std::vector<OracleRow> rows;
    auto push = [&rows, tol](const std::string& name, double closed_v, double numeric_v) {
        const double rel = std::abs(closed_v - numeric_v) /
                           std::max({std::abs(closed_v), std::abs(numeric_v), 1e-300});
        rows.push_back({name, closed_v, numeric_v, rel, rel < tol});
    };

    const double a = 1.1, delta = 1.2, y0 = 0.7;
    const double d3 = delta * delta * delta;

    // stationary law: three sigma>0 branches, b=0 sigma>0, both sigma=0 cases
    struct Cfg {
        const char* tag;
        double b, sigma;
    };
    const double crit = 2.0 * d3 / 9.0;  // sigma = 1
    const Cfg stat_cases[] = {{"b>crit", 2.0 * crit, 1.0}, {"b=crit", crit, 1.0},
                              {"b<crit", 0.5 * crit, 1.0}, {"b=0 s>0", 0.0, 1.0},
                              {"b>0 s=0", 0.8, 0.0},       {"b=0 s=0", 0.0, 0.0}};
    for (const auto& c : stat_cases) {
        const ModelParams p = make_params(a, c.b, c.sigma, delta, 1.5, y0);
        for (int i = 1; i <= 10; ++i) {
            const double lam = 0.35 * i;
            push(std::string("stationary ") + c.tag + " lam=" + format_double(lam),
                 alpha32::stationary_laplace(p, lam), stationary_laplace(p, lam).value);
        }
    }

    // K: closed product form vs quadrature, sigma>0 and sigma=0
    for (double sigma : {1.0, 0.0}) {
        const ModelParams p = make_params(a, -0.8, sigma, delta, 1.5, y0);
        const double th = theta0(p);
        for (int i = 1; i <= 10; ++i) {
            const double lam = th * i / 11.0;
            push(std::string("K sigma=") + format_double(sigma) + " lam/theta0=" +
                     format_double(i / 11.0),
                 alpha32::K_fun(p, lam), K_fun(p, lam));
        }
    }

    // V transform, sigma=0 fully closed vs the K-inverse route
    {
        const ModelParams p = make_params(a, -0.8, 0.0, delta, 1.5, y0);
        for (int i = 1; i <= 10; ++i) {
            const double u = -0.4 * i;
            push("laplace_V s=0 u=" + format_double(u), alpha32::laplace_V_sigma0(p, u),
                 laplace_V(p, u).value);
        }
    }

    // psi_{u,0} transcendental residual at ODE outputs (looser tolerance)
    {
        const double rtol = 1e-7;
        const Cfg psi_cases[] = {{"b>crit", 2.0 * crit, 1.0}, {"b=crit", crit, 1.0},
                                 {"b<crit", 0.5 * crit, 1.0}, {"b=0", 0.0, 1.0},
                                 {"b<0", -0.8, 1.0}};
        for (const auto& c : psi_cases) {
            const ModelParams p = make_params(a, c.b, c.sigma, delta, 1.5, y0);
            for (double u : {-0.5, -2.0}) {
                for (double t : {0.5, 1.5, 3.0}) {
                    const double psi = solve_psi(p, u, 0.0, t).terminal_value;
                    const double res = alpha32::psi_residual(p, psi, t, u);
                    rows.push_back({std::string("psi residual ") + c.tag + " u=" +
                                        format_double(u) + " t=" + format_double(t),
                                    0.0, res, std::abs(res), std::abs(res) < rtol});
                }
            }
        }
    }

    int n_fail = 0;
    std::printf("%-44s %22s %22s %10s  %s\n", "case", "closed", "numeric", "rel", "status");
    for (const auto& r : rows) {
        if (!r.pass) ++n_fail;
        std::printf("%-44s %22.15g %22.15g %10.2e  %s\n", r.name.c_str(), r.closed, r.numeric,
                    r.rel, r.pass ? "pass" : "FAIL");
    }
    std::printf("%zu checks, %d failures\n", rows.size(), n_fail);
    return n_fail == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-stable CIR processes: simulation, Laplace transforms, growth-rate MLE"};
    app.require_subcommand(1);

    std::string config_file, out, sidecar, method = "FullInformation", format = "both";
    std::string path_csv;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    double oracle_tol = 1e-8;

    auto* sim = app.add_subcommand("simulate", "simulate a path, write CSV + JSON sidecar");
    sim->add_option("--config", config_file, "simulate config JSON")->required();
    sim->add_option("--out", out, "output CSV path")->required();
    sim->add_option("--seed", seed, "seed override");

    auto* est = app.add_subcommand("estimate", "MLE of b from a path CSV");
    est->add_option("--path", path_csv, "path CSV file")->required();
    est->add_option("--sidecar", sidecar, "sidecar JSON (default: <path>.json)");
    est->add_option("--method", method, "FullInformation|PathOnly");
    est->add_option("--out", out, "output JSON (stdout when omitted)");

    auto* lap = app.add_subcommand("laplace", "evaluate a Laplace transform query");
    lap->add_option("--config", config_file, "query JSON")->required();
    lap->add_option("--out", out, "output JSON (stdout when omitted)");

    auto* exp = app.add_subcommand("experiment", "Monte Carlo replication harness");
    exp->add_option("--config", config_file, "experiment config JSON")->required();
    exp->add_option("--out", out, "output stem (<stem>.csv, <stem>.json)")->required();
    exp->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    exp->add_option("--seed", seed, "base seed override");
    exp->add_option("--format", format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));

    auto* orc = app.add_subcommand("oracle-check", "closed forms vs numeric engines");
    orc->add_option("--tol", oracle_tol, "relative tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        emit_error("validation", e.what());
        return 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_file, out, seed);
        if (est->parsed()) return cmd_estimate(path_csv, sidecar, method, out);
        if (lap->parsed()) return cmd_laplace(config_file, out);
        if (exp->parsed()) return cmd_experiment(config_file, out, workers, seed, format);
        if (orc->parsed()) return cmd_oracle_check(oracle_tol);
    } catch (const std::invalid_argument& e) {
        emit_error("validation", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        emit_error("validation", e.what());
        return 1;
    } catch (const std::domain_error& e) {
        emit_error("validation", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("numeric", e.what());
        return 2;
    }
    return 0;
}
