#include "stablecir/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stablecir {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("bad numeric field: '" + s + "'");
    return v;
}

// unknown fields are hard errors: protects experiment provenance
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (key == k) {
                ok = true;
                break;
            }
        if (!ok) throw std::invalid_argument(std::string(what) + ": unknown field '" + key + "'");
    }
}

double need_num(const json& j, const char* key, const char* what) {
    if (!j.contains(key)) throw std::invalid_argument(std::string(what) + ": missing field '" + key + "'");
    if (!j.at(key).is_number()) throw std::invalid_argument(std::string(what) + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

void need_version(const json& j, const char* what) {
    if (!j.contains("version")) throw std::invalid_argument(std::string(what) + ": missing 'version'");
    if (j.at("version") != 1) throw std::invalid_argument(std::string(what) + ": unsupported version");
}

} // namespace

json params_to_json(const ModelParams& p) {
    return json{{"a", p.a}, {"b", p.b}, {"sigma", p.sigma},
                {"delta", p.delta}, {"alpha", p.alpha}, {"y0", p.y0}};
}

ModelParams params_from_json(const json& j) {
    check_keys(j, {"a", "b", "sigma", "delta", "alpha", "y0"}, "params");
    ModelParams p;
    p.a = need_num(j, "a", "params");
    p.b = need_num(j, "b", "params");
    p.sigma = need_num(j, "sigma", "params");
    p.delta = need_num(j, "delta", "params");
    p.alpha = need_num(j, "alpha", "params");
    p.y0 = need_num(j, "y0", "params");
    p.validate();
    return p;
}

SimulateJob simulate_job_from_json(const json& j) {
    need_version(j, "simulate config");
    check_keys(j, {"version", "params", "T", "n_steps", "seed", "jump_kappa", "zero_brownian",
                   "zero_stable"},
               "simulate config");
    SimulateJob job;
    if (!j.contains("params")) throw std::invalid_argument("simulate config: missing 'params'");
    job.params = params_from_json(j.at("params"));
    job.T = need_num(j, "T", "simulate config");
    job.n_steps = j.value("n_steps", std::size_t{0});
    if (j.contains("seed")) job.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jump_kappa")) job.options.jump_kappa = j.at("jump_kappa").get<double>();
    if (j.contains("zero_brownian")) job.options.zero_brownian = j.at("zero_brownian").get<bool>();
    if (j.contains("zero_stable")) job.options.zero_stable = j.at("zero_stable").get<bool>();
    if (!(job.T > 0.0)) throw std::invalid_argument("simulate config: T must be > 0");
    if (job.n_steps < 1) throw std::invalid_argument("simulate config: n_steps must be >= 1");
    return job;
}

LaplaceQuery laplace_query_from_json(const json& j) {
    need_version(j, "laplace query");
    check_keys(j, {"version", "params", "kind", "lambda", "t", "u", "v"}, "laplace query");
    LaplaceQuery q;
    if (!j.contains("params")) throw std::invalid_argument("laplace query: missing 'params'");
    q.params = params_from_json(j.at("params"));
    if (!j.contains("kind")) throw std::invalid_argument("laplace query: missing 'kind'");
    q.kind = j.at("kind").get<std::string>();
    if (q.kind == "Y") {
        q.lambda = need_num(j, "lambda", "laplace query");
        q.t = need_num(j, "t", "laplace query");
    } else if (q.kind == "joint") {
        q.u = need_num(j, "u", "laplace query");
        q.v = need_num(j, "v", "laplace query");
        q.t = need_num(j, "t", "laplace query");
    } else if (q.kind == "stationary") {
        q.lambda = need_num(j, "lambda", "laplace query");
    } else if (q.kind == "V") {
        q.u = need_num(j, "u", "laplace query");
    } else {
        throw std::invalid_argument("laplace query: kind must be Y|joint|stationary|V");
    }
    return q;
}

json laplace_result_to_json(const LaplaceQuery& q, const TransformResult& r) {
    json query{{"kind", q.kind}, {"params", params_to_json(q.params)}};
    if (q.kind == "Y") {
        query["lambda"] = q.lambda;
        query["t"] = q.t;
    } else if (q.kind == "joint") {
        query["u"] = q.u;
        query["v"] = q.v;
        query["t"] = q.t;
    } else if (q.kind == "stationary") {
        query["lambda"] = q.lambda;
    } else {
        query["u"] = q.u;
    }
    return json{{"query", query},
                {"value", r.value},
                {"diagnostics",
                 {{"error_estimate", r.error_estimate},
                  {"ode_steps", r.ode_steps},
                  {"quad_intervals", r.quad_intervals}}}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
    need_version(j, "experiment config");
    check_keys(j,
               {"version", "params", "T_grid", "dt", "n_reps", "base_seed", "method", "diagnostics"},
               "experiment config");
    ExperimentConfig cfg;
    if (!j.contains("params")) throw std::invalid_argument("experiment config: missing 'params'");
    cfg.params = params_from_json(j.at("params"));
    if (!j.contains("T_grid")) throw std::invalid_argument("experiment config: missing 'T_grid'");
    cfg.T_grid = j.at("T_grid").get<std::vector<double>>();
    cfg.dt = need_num(j, "dt", "experiment config");
    cfg.n_reps = static_cast<int>(need_num(j, "n_reps", "experiment config"));
    if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("method")) cfg.method = jump_method_from_name(j.at("method").get<std::string>());
    if (j.contains("diagnostics")) {
        const json& d = j.at("diagnostics");
        check_keys(d, {"ks_normal", "moments", "consistency", "v_transform", "u_grid"},
                   "experiment diagnostics");
        cfg.diagnostics.ks_normal = d.value("ks_normal", true);
        cfg.diagnostics.moments = d.value("moments", true);
        cfg.diagnostics.consistency = d.value("consistency", false);
        cfg.diagnostics.v_transform = d.value("v_transform", false);
        if (d.contains("u_grid")) cfg.diagnostics.u_grid = d.at("u_grid").get<std::vector<double>>();
    }
    cfg.validate();
    return cfg;
}

json experiment_summary_to_json(const ExperimentConfig& cfg, const ExperimentResult& res) {
    json summaries = json::array();
    for (const auto& s : res.summaries) {
        json row{{"T", s.T},
                 {"n_effective", s.n_effective},
                 {"mean_b_hat", s.mean_b_hat},
                 {"var_b_hat", s.var_b_hat},
                 {"median_abs_err", s.median_abs_err}};
        if (std::isfinite(s.ks_stat)) {
            row["ks_stat"] = s.ks_stat;
            row["ks_p"] = s.ks_p;
        }
        summaries.push_back(row);
    }
    json out{{"version", 1},
             {"params", params_to_json(cfg.params)},
             {"dt", cfg.dt},
             {"n_reps", cfg.n_reps},
             {"base_seed", cfg.base_seed},
             {"method", jump_method_name(cfg.method)},
             {"summaries", summaries},
             {"runtime_seconds", res.runtime_seconds}};
    if (std::isfinite(res.v_identity_fraction)) out["v_identity_fraction"] = res.v_identity_fraction;
    if (!res.v_table.empty()) {
        json vt = json::array();
        for (const auto& v : res.v_table)
            vt.push_back(json{{"u", v.u}, {"mc_mean", v.mc_mean}, {"mc_se", v.mc_se},
                              {"analytic", v.analytic}});
        out["v_check"] = vt;
    }
    return out;
}

std::string experiment_rows_to_csv(const ExperimentResult& res) {
    std::ostringstream os;
    os << "rep,T,seed,ok,b_hat,err_det,err_rand,aux_log_ratio,aux_term_over_int,scaled_y_T,"
          "scaled_int_Y,error\n";
    for (const auto& r : res.rows) {
        os << r.rep << ',' << format_double(r.T) << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ','
           << format_double(r.b_hat) << ',' << format_double(r.err_det) << ','
           << format_double(r.err_rand) << ',' << format_double(r.aux_log_ratio) << ','
           << format_double(r.aux_term_over_int) << ',' << format_double(r.scaled_y_T) << ','
           << format_double(r.scaled_int_Y) << ',' << r.error << '\n';
    }
    return os.str();
}

json estimate_report_to_json(const EstimateReport& rep) {
    json out{{"b_hat", rep.b_hat},
             {"sigma2_hat", rep.sigma2_hat},
             {"integral_Y", rep.integral_Y},
             {"jump_integral", rep.jump_integral},
             {"T", rep.T},
             {"method", jump_method_name(rep.method)}};
    if (rep.scaled_error_deterministic) out["scaled_error_deterministic"] = *rep.scaled_error_deterministic;
    if (rep.scaled_error_random) out["scaled_error_random"] = *rep.scaled_error_random;
    return out;
}

void write_path_csv(const Path& path, const std::string& csv_file, const std::string& sidecar_file) {
    const bool incr = path.has_increments();
    std::vector<char> is_jump(path.values.size(), 0);
    for (const auto& rec : path.jump_records)
        if (rec.step < is_jump.size()) is_jump[rec.step] = 1;

    std::ostringstream os;
    os << (incr ? "t,y,dW,dL,is_jump\n" : "t,y\n");
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        os << format_double(path.times[k]) << ',' << format_double(path.values[k]);
        if (incr) {
            const double dw = k == 0 ? 0.0 : path.brownian_increments[k - 1];
            const double dl = k == 0 ? 0.0 : path.stable_increments[k - 1];
            os << ',' << format_double(dw) << ',' << format_double(dl) << ','
               << static_cast<int>(is_jump[k]);
        }
        os << '\n';
    }
    write_text_file(os.str(), csv_file);

    json side{{"version", 1},
              {"params", params_to_json(path.params_used)},
              {"seed", path.seed},
              {"jump_kappa", path.jump_kappa},
              {"n_steps", path.n_steps()}};
    write_json_file(side, sidecar_file);
}

Path read_path_csv(const std::string& csv_file, const std::string& sidecar_file) {
    const json side = load_json_file(sidecar_file);
    check_keys(side, {"version", "params", "seed", "jump_kappa", "n_steps"}, "path sidecar");
    need_version(side, "path sidecar");

    Path path;
    path.params_used = params_from_json(side.at("params"));
    if (side.contains("seed")) path.seed = side.at("seed").get<std::uint64_t>();
    if (side.contains("jump_kappa")) path.jump_kappa = side.at("jump_kappa").get<double>();

    std::ifstream in(csv_file);
    if (!in) throw std::invalid_argument("cannot open path csv: " + csv_file);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("path csv: empty file");
    const bool incr = line == "t,y,dW,dL,is_jump";
    if (!incr && line != "t,y") throw std::invalid_argument("path csv: unexpected header '" + line + "'");

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        const std::size_t expected = incr ? 5 : 2;
        if (fields.size() != expected) throw std::invalid_argument("path csv: malformed row");
        path.times.push_back(parse_double(fields[0]));
        path.values.push_back(parse_double(fields[1]));
        if (incr && row > 0) {
            path.brownian_increments.push_back(parse_double(fields[2]));
            path.stable_increments.push_back(parse_double(fields[3]));
            if (fields[4] == "1") {
                const double dy = path.values[row] - path.values[row - 1];
                // exact jump part when increments are present, raw increment otherwise
                const ModelParams& p = path.params_used;
                const double yprev = path.values[row - 1];
                const double jump = yprev > 0.0
                                        ? p.delta * std::pow(yprev, 1.0 / p.alpha) *
                                              path.stable_increments[row - 1]
                                        : dy;
                path.jump_records.push_back({row, jump});
            }
        }
        ++row;
    }
    if (path.values.size() < 2) throw std::invalid_argument("path csv: needs at least 2 rows");
    return path;
}

json load_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open file: " + file);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("json parse error in " + file + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& file) {
    write_text_file(j.dump(2) + "\n", file);
}

void write_text_file(const std::string& text, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write file: " + file);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + file);
}

} // namespace stablecir
