#pragma once

#include "stablecir/experiments.hpp"
#include "stablecir/inference.hpp"
#include "stablecir/model.hpp"
#include "stablecir/simulate.hpp"
#include "stablecir/transforms.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace stablecir {

// 17-significant-digit rendering; round-trips 64-bit floats exactly.
std::string format_double(double v);

nlohmann::json params_to_json(const ModelParams& p);
// strict: all six keys required, unknown keys are hard errors
ModelParams params_from_json(const nlohmann::json& j);

struct SimulateJob {
    ModelParams params;
    double T = 1.0;
    std::size_t n_steps = 1;
    std::uint64_t seed = 0;
    SimulateOptions options;
};
SimulateJob simulate_job_from_json(const nlohmann::json& j);

struct LaplaceQuery {
    ModelParams params;
    std::string kind;  // "Y" | "joint" | "stationary" | "V"
    double lambda = 0.0;
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
};
LaplaceQuery laplace_query_from_json(const nlohmann::json& j);
nlohmann::json laplace_result_to_json(const LaplaceQuery& q, const TransformResult& r);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_summary_to_json(const ExperimentConfig& cfg, const ExperimentResult& res);
std::string experiment_rows_to_csv(const ExperimentResult& res);

nlohmann::json estimate_report_to_json(const EstimateReport& rep);

// Path CSV (header t,y[,dW,dL,is_jump]) + JSON sidecar with params/seed.
// Numeric columns round-trip bit-exactly.
void write_path_csv(const Path& path, const std::string& csv_file, const std::string& sidecar_file);
Path read_path_csv(const std::string& csv_file, const std::string& sidecar_file);

nlohmann::json load_json_file(const std::string& file);
void write_json_file(const nlohmann::json& j, const std::string& file);
void write_text_file(const std::string& text, const std::string& file);

} // namespace stablecir
