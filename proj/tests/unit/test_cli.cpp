// Drives the installed CLI binary end to end through std::system.
#include "stablecir/io.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#ifndef STABLECIR_CLI_PATH
#error "STABLECIR_CLI_PATH must be defined"
#endif

using nlohmann::json;

namespace {

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("stablecir_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(STABLECIR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& file) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json sim_config(double a, double b, double y0, double T, int n_steps, std::uint64_t seed) {
    return json{{"version", 1},
                {"params",
                 {{"a", a}, {"b", b}, {"sigma", 1.0}, {"delta", 1.0}, {"alpha", 1.5}, {"y0", y0}}},
                {"T", T},
                {"n_steps", n_steps},
                {"seed", seed}};
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("simulate then estimate round trip") {
    TempDir tmp;
    stablecir::write_json_file(sim_config(1, 1, 1, 2.0, 400, 99), tmp.file("sim.json"));
    CHECK(run("simulate --config " + tmp.file("sim.json") + " --out " + tmp.file("path.csv")) == 0);
    CHECK(std::filesystem::exists(tmp.file("path.csv")));
    CHECK(std::filesystem::exists(tmp.file("path.csv.json")));

    CHECK(run("estimate --path " + tmp.file("path.csv") + " --method full-information --out " +
              tmp.file("est.json")) == 0);
    const json rep = stablecir::load_json_file(tmp.file("est.json"));
    CHECK(rep.contains("b_hat"));
    CHECK(rep.at("method") == "FullInformation");
}

TEST_CASE("absorbed config writes an all-zero column") {
    TempDir tmp;
    stablecir::write_json_file(sim_config(0, 1, 0, 1.0, 100, 5), tmp.file("sim.json"));
    CHECK(run("simulate --config " + tmp.file("sim.json") + " --out " + tmp.file("zero.csv")) == 0);
    std::ifstream in(tmp.file("zero.csv"));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const auto second = line.find(',', comma + 1);
        CHECK(line.substr(comma + 1, second - comma - 1) == "0");
    }
}

TEST_CASE("simulate output is byte deterministic in the seed") {
    TempDir tmp;
    stablecir::write_json_file(sim_config(1, -0.5, 1, 1.0, 500, 31), tmp.file("sim.json"));
    CHECK(run("simulate --config " + tmp.file("sim.json") + " --out " + tmp.file("a.csv")) == 0);
    CHECK(run("simulate --config " + tmp.file("sim.json") + " --out " + tmp.file("b.csv")) == 0);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
    CHECK(run("simulate --config " + tmp.file("sim.json") + " --seed 32 --out " + tmp.file("c.csv")) ==
          0);
    CHECK(slurp(tmp.file("a.csv")) != slurp(tmp.file("c.csv")));
}

TEST_CASE("laplace stationary at lambda zero") {
    TempDir tmp;
    const json q = {{"version", 1},
                    {"params",
                     {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}, {"delta", 1.0}, {"alpha", 1.5}, {"y0", 0.0}}},
                    {"kind", "stationary"},
                    {"lambda", 0.0}};
    stablecir::write_json_file(q, tmp.file("q.json"));
    CHECK(run("laplace --config " + tmp.file("q.json") + " --out " + tmp.file("r.json")) == 0);
    const json r = stablecir::load_json_file(tmp.file("r.json"));
    CHECK(r.at("value") == 1.0);
}

TEST_CASE("invalid config exits 1 and produces no output") {
    TempDir tmp;
    json bad = sim_config(1, 1, 1, 1.0, 100, 1);
    bad["params"]["alpha"] = 2.5;
    stablecir::write_json_file(bad, tmp.file("bad.json"));
    CHECK(run("simulate --config " + tmp.file("bad.json") + " --out " + tmp.file("out.csv")) == 1);
    CHECK(!std::filesystem::exists(tmp.file("out.csv")));

    json unknown = sim_config(1, 1, 1, 1.0, 100, 1);
    unknown["surprise"] = true;
    stablecir::write_json_file(unknown, tmp.file("unk.json"));
    CHECK(run("simulate --config " + tmp.file("unk.json") + " --out " + tmp.file("out2.csv")) == 1);
    CHECK(!std::filesystem::exists(tmp.file("out2.csv")));

    CHECK(run("laplace --config " + tmp.file("does_not_exist.json")) == 1);
}

TEST_CASE("experiment emits csv and json") {
    TempDir tmp;
    const json cfg = {{"version", 1},
                      {"params",
                       {{"a", 1.0}, {"b", 1.0}, {"sigma", 1.0}, {"delta", 1.0}, {"alpha", 1.5}, {"y0", 1.0}}},
                      {"T_grid", {1.0}},
                      {"dt", 0.01},
                      {"n_reps", 4},
                      {"base_seed", 8},
                      {"method", "FullInformation"}};
    stablecir::write_json_file(cfg, tmp.file("exp.json"));
    CHECK(run("experiment --config " + tmp.file("exp.json") + " --out " + tmp.file("res") +
              " --workers 2") == 0);
    CHECK(std::filesystem::exists(tmp.file("res.csv")));
    CHECK(std::filesystem::exists(tmp.file("res.json")));
    const json summary = stablecir::load_json_file(tmp.file("res.json"));
    CHECK(summary.at("summaries").size() == 1);

    // reruns with the same seed are byte-identical in the CSV
    CHECK(run("experiment --config " + tmp.file("exp.json") + " --out " + tmp.file("res2") +
              " --workers 4") == 0);
    CHECK(slurp(tmp.file("res.csv")) == slurp(tmp.file("res2.csv")));
}

TEST_SUITE_END();
