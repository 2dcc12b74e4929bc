#include "stablecir/simulate.hpp"

#include "stablecir/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace stablecir;

TEST_SUITE_BEGIN("simulate");

TEST_CASE("absorbed at zero when a = 0, y0 = 0") {
    const auto p = make_params(0, 1, 1, 1, 1.5, 0);
    const Path path = simulate_path(p, 2.0, 500, 123);
    for (double y : path.values) CHECK(y == 0.0);
}

TEST_CASE("determinism in the seed") {
    const auto p = make_params(1, 1, 1, 1, 1.5, 1);
    const Path a = simulate_path(p, 1.0, 300, 42);
    const Path b = simulate_path(p, 1.0, 300, 42);
    const Path c = simulate_path(p, 1.0, 300, 43);
    CHECK(a.values == b.values);
    CHECK(a.brownian_increments == b.brownian_increments);
    CHECK(a.stable_increments == b.stable_increments);
    CHECK(a.values != c.values);
}

TEST_CASE("zeroed noise reduces to the drift ODE") {
    const auto p = make_params(1, 1, 1, 1, 1.5, 0);
    SimulateOptions opts;
    opts.zero_brownian = true;
    opts.zero_stable = true;
    const double dt = 1e-3;
    const Path path = simulate_path(p, 1.0, 1000, 5, opts);
    // Euler on y' = 1 - y from 0: within O(dt) of 1 - e^{-1}
    CHECK(std::abs(path.values.back() - (1.0 - std::exp(-1.0))) < dt);
    CHECK(path.brownian_increments[10] == 0.0);
    CHECK(path.stable_increments[10] == 0.0);
}

TEST_CASE("positivity holds on rough configs") {
    for (auto [a, b] : {std::pair{0.1, -0.2}, {0.0, 1.0}, {2.0, 0.0}}) {
        const auto p = make_params(a, b, 2.0, 1.5, 1.3, 0.05);
        const Path path = simulate_path(p, 2.0, 4000, 777);
        for (double y : path.values) CHECK(y >= 0.0);
    }
}

TEST_CASE("weak error against the first-moment formula") {
    const auto p = make_params(1, 1, 1, 1, 1.5, 1);
    const double target = mean_Y(p, 5.0);  // fixed point a/b = 1
    const std::size_t n_paths = 10000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        const Path path = simulate_path(p, 5.0, 5000, 1000 + i);
        const double y = path.values.back();
        sum += y;
        sum2 += y * y;
    }
    const double mean = sum / n_paths;
    const double se = std::sqrt(std::max(0.0, sum2 / n_paths - mean * mean) / n_paths);
    CHECK(std::abs(mean - target) < 3.0 * se + 2e-3);
}

TEST_CASE("weak error shrinks with dt") {
    const auto p = make_params(1, 1, 1, 1, 1.5, 1);
    const double target = mean_Y(p, 1.0);
    auto run = [&](std::size_t steps, std::uint64_t seed0) {
        const std::size_t n_paths = 4000;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n_paths; ++i) {
            const double y = simulate_path(p, 1.0, steps, seed0 + i).values.back();
            sum += y;
            sum2 += y * y;
        }
        const double mean = sum / n_paths;
        const double se = std::sqrt(std::max(0.0, sum2 / n_paths - mean * mean) / n_paths);
        return std::pair{std::abs(mean - target), se};
    };
    const auto [coarse, se1] = run(100, 50000);
    const auto [fine, se2] = run(1000, 90000);
    CHECK(fine <= coarse + 3.0 * (se1 + se2));
}

TEST_CASE("integrate_path on fabricated paths") {
    Path zero;
    zero.times = {0.0, 0.5, 1.0};
    zero.values = {0.0, 0.0, 0.0};
    CHECK(integrate_path(zero) == 0.0);

    Path constant;
    constant.times = {0.0, 0.5, 1.0, 1.5, 2.0};
    constant.values = {3.0, 3.0, 3.0, 3.0, 3.0};
    CHECK(integrate_path(constant) == doctest::Approx(6.0).epsilon(1e-14));

    // linear ramp on [0,1]: left sum = (n-1)/(2n)
    const std::size_t n = 64;
    Path ramp;
    for (std::size_t k = 0; k <= n; ++k) {
        ramp.times.push_back(static_cast<double>(k) / n);
        ramp.values.push_back(static_cast<double>(k) / n);
    }
    CHECK(integrate_path(ramp) ==
          doctest::Approx((n - 1.0) / (2.0 * n)).epsilon(1e-13));
}

TEST_CASE("jump threshold definition and scaling") {
    CHECK(jump_threshold(1e-4, 1.5) == doctest::Approx(6.0 * std::pow(1e-4, 2.0 / 3.0)).epsilon(1e-14));
    const double ratio = jump_threshold(0.5e-4, 1.5) / jump_threshold(1e-4, 1.5);
    CHECK(ratio == doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-13));

    // kappa = 0 records every step
    const auto p = make_params(1, 1, 1, 1, 1.5, 1);
    SimulateOptions opts;
    opts.jump_kappa = 0.0;
    const Path path = simulate_path(p, 0.5, 200, 9, opts);
    CHECK(path.jump_records.size() == path.n_steps());
}

TEST_CASE("jump records carry the exact jump part") {
    const auto p = make_params(1, -0.5, 1, 1, 1.5, 1);
    const Path path = simulate_path(p, 5.0, 5000, 2024);
    CHECK(!path.jump_records.empty());
    for (const auto& rec : path.jump_records) {
        const double y = path.values[rec.step - 1];
        const double expect = p.delta * std::pow(y, 1.0 / p.alpha) * path.stable_increments[rec.step - 1];
        CHECK(rec.delta_y == expect);
        CHECK(std::abs(path.stable_increments[rec.step - 1]) >
              jump_threshold(path.dt(), p.alpha, path.jump_kappa));
    }
}

TEST_CASE("replay reproduces stored values exactly") {
    const auto p = make_params(1, 0, 1, 1, 1.5, 1);
    Path path = simulate_path(p, 2.0, 2000, 31);
    CHECK(replay_consistent(path));
    path.values[100] += 1e-12;
    CHECK(!replay_consistent(path));
}

TEST_CASE("validation") {
    const auto p = make_params(1, 1, 1, 1, 1.5, 1);
    CHECK_THROWS(simulate_path(p, 0.0, 10, 1));
    CHECK_THROWS(simulate_path(p, 1.0, 0, 1));
    CHECK_THROWS(jump_threshold(0.0, 1.5));
}

TEST_SUITE_END();
