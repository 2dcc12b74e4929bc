#pragma once

#include "stablecir/model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace stablecir {

struct JumpRecord {
    std::size_t step = 0;  // increment index k, jump lives on (t_{k-1}, t_k]
    double delta_y = 0.0;  // delta * Y_{k-1}^{1/alpha} * dL_k
};

// A simulated (or ingested) trajectory on a uniform grid t_k = k*dt.
// brownian/stable increment k drives the step from values[k-1] to values[k];
// both vectors are empty for paths read back without increment columns.
struct Path {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> brownian_increments;
    std::vector<double> stable_increments;
    std::vector<JumpRecord> jump_records;
    ModelParams params_used;
    std::uint64_t seed = 0;
    double jump_kappa = 6.0;

    std::size_t n_steps() const { return times.empty() ? 0 : times.size() - 1; }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    bool has_increments() const { return !brownian_increments.empty(); }
};

struct SimulateOptions {
    double jump_kappa = 6.0;   // recorded-jump cutoff in dt^{1/alpha} units
    bool zero_brownian = false;  // test hook: freeze the W stream at 0
    bool zero_stable = false;    // test hook: freeze the L stream at 0
};

// Cutoff for recording a stable increment as a jump: kappa * dt^{1/alpha}.
// kappa = 6 keeps the chance that a pure-diffusion grid increment crosses
// the reconstruction threshold below ~1e-6.
double jump_threshold(double dt, double alpha, double kappa = 6.0);

// Explicit Euler-Maruyama with frozen coefficients and positivity projection:
//   Y_{k+1} = max(0, Y_k + (a - b Y_k) dt + sigma sqrt(Y_k) dW_k
//                    + delta Y_k^{1/alpha} dL_k).
// Brownian and stable increments are sampled independently per step and
// stored on the Path; jump_records holds steps with |dL_k| above threshold.
Path simulate_path(const ModelParams& p, double T, std::size_t n_steps, std::uint64_t seed,
                   const SimulateOptions& opts = {});

// Left-endpoint Riemann sum of int_0^T Y_s ds (predictable convention).
double integrate_path(const Path& path);

// Left-endpoint Riemann sum of int_0^T Y_s^q ds.
double integrate_path_pow(const Path& path, double q);

// Re-applies the scheme recursion from the stored increments; true when the
// stored values are reproduced exactly.
bool replay_consistent(const Path& path);

} // namespace stablecir
