#include "stablecir/experiments.hpp"
#include "stablecir/inference.hpp"
#include "stablecir/levy.hpp"
#include "stablecir/model.hpp"
#include "stablecir/rng.hpp"
#include "stablecir/simulate.hpp"
#include "stablecir/transforms.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace stablecir;

PYBIND11_MODULE(_stablecir, m) {
    m.doc() = "alpha-stable CIR processes: simulation, Riccati Laplace transforms, growth-rate MLE";

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double a, double b, double sigma, double delta, double alpha, double y0) {
                 return make_params(a, b, sigma, delta, alpha, y0);
             }),
             py::arg("a"), py::arg("b"), py::arg("sigma"), py::arg("delta"), py::arg("alpha"),
             py::arg("y0"))
        .def_readonly("a", &ModelParams::a)
        .def_readonly("b", &ModelParams::b)
        .def_readonly("sigma", &ModelParams::sigma)
        .def_readonly("delta", &ModelParams::delta)
        .def_readonly("alpha", &ModelParams::alpha)
        .def_readonly("y0", &ModelParams::y0)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) +
                   ", sigma=" + std::to_string(p.sigma) + ", delta=" + std::to_string(p.delta) +
                   ", alpha=" + std::to_string(p.alpha) + ", y0=" + std::to_string(p.y0) + ")";
        });

    py::enum_<Regime>(m, "Regime")
        .value("Subcritical", Regime::Subcritical)
        .value("Critical", Regime::Critical)
        .value("Supercritical", Regime::Supercritical);

    py::enum_<JumpMethod>(m, "JumpMethod")
        .value("FullInformation", JumpMethod::FullInformation)
        .value("PathOnly", JumpMethod::PathOnly);

    m.def("branching_mechanism", &branching_mechanism, py::arg("params"), py::arg("z"));
    m.def("immigration_mechanism", &immigration_mechanism, py::arg("params"), py::arg("z"));
    m.def("theta0", &theta0, py::arg("params"));
    m.def("c_v_root", &c_v_root, py::arg("params"), py::arg("v"));
    m.def("mean_Y", &mean_Y, py::arg("params"), py::arg("t"));
    m.def("classify", &classify, py::arg("params"));

    py::class_<StableLaw>(m, "StableLaw")
        .def(py::init<double>(), py::arg("alpha"))
        .def_property_readonly("alpha", &StableLaw::alpha)
        .def_property_readonly("levy_constant", &StableLaw::levy_constant)
        .def("laplace_exponent", &StableLaw::laplace_exponent, py::arg("lam"))
        .def("tail_mass", &StableLaw::tail_mass, py::arg("threshold"))
        .def("tail_mean", &StableLaw::tail_mean, py::arg("threshold"))
        .def("sample", [](const StableLaw& law, double dt, std::uint64_t seed, std::size_t n) {
            Rng rng(seed);
            std::vector<double> out(n);
            for (auto& v : out) v = law.sample_increment(dt, rng);
            return out;
        }, py::arg("dt"), py::arg("seed"), py::arg("n"));

    py::class_<JumpRecord>(m, "JumpRecord")
        .def_readonly("step", &JumpRecord::step)
        .def_readonly("delta_y", &JumpRecord::delta_y);

    py::class_<Path>(m, "Path")
        .def_readonly("times", &Path::times)
        .def_readonly("values", &Path::values)
        .def_readonly("brownian_increments", &Path::brownian_increments)
        .def_readonly("stable_increments", &Path::stable_increments)
        .def_readonly("jump_records", &Path::jump_records)
        .def_readonly("params_used", &Path::params_used)
        .def_readonly("seed", &Path::seed)
        .def_property_readonly("dt", &Path::dt)
        .def_property_readonly("horizon", &Path::horizon);

    m.def("simulate_path",
          [](const ModelParams& p, double T, std::size_t n_steps, std::uint64_t seed,
             double jump_kappa, bool zero_brownian, bool zero_stable) {
              SimulateOptions opts;
              opts.jump_kappa = jump_kappa;
              opts.zero_brownian = zero_brownian;
              opts.zero_stable = zero_stable;
              return simulate_path(p, T, n_steps, seed, opts);
          },
          py::arg("params"), py::arg("T"), py::arg("n_steps"), py::arg("seed"),
          py::arg("jump_kappa") = 6.0, py::arg("zero_brownian") = false,
          py::arg("zero_stable") = false);
    m.def("integrate_path", &integrate_path, py::arg("path"));
    m.def("jump_threshold", &jump_threshold, py::arg("dt"), py::arg("alpha"), py::arg("kappa") = 6.0);

    py::class_<OdeSolution>(m, "OdeSolution")
        .def_readonly("terminal_value", &OdeSolution::terminal_value)
        .def_readonly("trajectory", &OdeSolution::trajectory)
        .def_readonly("steps_taken", &OdeSolution::steps_taken)
        .def_readonly("max_residual", &OdeSolution::max_residual);

    py::class_<TransformResult>(m, "TransformResult")
        .def_readonly("value", &TransformResult::value)
        .def_readonly("error_estimate", &TransformResult::error_estimate)
        .def_readonly("ode_steps", &TransformResult::ode_steps)
        .def_readonly("quad_intervals", &TransformResult::quad_intervals);

    m.def("solve_v", &solve_v, py::arg("params"), py::arg("lam"), py::arg("t"),
          py::arg("store_trajectory") = false);
    m.def("solve_psi", &solve_psi, py::arg("params"), py::arg("u"), py::arg("v"), py::arg("t"),
          py::arg("store_trajectory") = false);
    m.def("laplace_Y", &laplace_Y, py::arg("params"), py::arg("lam"), py::arg("t"));
    m.def("laplace_Y_substitution", &laplace_Y_substitution, py::arg("params"), py::arg("lam"),
          py::arg("t"));
    m.def("joint_laplace", &joint_laplace, py::arg("params"), py::arg("u"), py::arg("v"),
          py::arg("t"));
    m.def("stationary_laplace", &stationary_laplace, py::arg("params"), py::arg("lam"));
    m.def("stationary_mean", &stationary_mean, py::arg("params"));
    m.def("K_fun", &K_fun, py::arg("params"), py::arg("lam"));
    m.def("K_inverse", &K_inverse, py::arg("params"), py::arg("x"));
    m.def("laplace_V", &laplace_V, py::arg("params"), py::arg("u"));

    auto oracle = m.def_submodule("alpha32", "closed forms for alpha = 3/2");
    oracle.def("theta0", &alpha32::theta0, py::arg("params"));
    oracle.def("stationary_laplace", &alpha32::stationary_laplace, py::arg("params"), py::arg("lam"));
    oracle.def("psi_residual", &alpha32::psi_residual, py::arg("params"), py::arg("psi"),
               py::arg("t"), py::arg("u"));
    oracle.def("K_fun", &alpha32::K_fun, py::arg("params"), py::arg("lam"));
    oracle.def("laplace_V_sigma0", &alpha32::laplace_V_sigma0, py::arg("params"), py::arg("u"));

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("b_hat", &EstimateReport::b_hat)
        .def_readonly("sigma2_hat", &EstimateReport::sigma2_hat)
        .def_readonly("integral_Y", &EstimateReport::integral_Y)
        .def_readonly("jump_integral", &EstimateReport::jump_integral)
        .def_readonly("T", &EstimateReport::T)
        .def_readonly("scaled_error_deterministic", &EstimateReport::scaled_error_deterministic)
        .def_readonly("scaled_error_random", &EstimateReport::scaled_error_random)
        .def_readonly("method", &EstimateReport::method);

    m.def("estimate_sigma2", &estimate_sigma2, py::arg("path"));
    m.def("reconstruct_jump_integral", &reconstruct_jump_integral, py::arg("path"), py::arg("method"));
    m.def("mle_b", &mle_b, py::arg("path"), py::arg("method"), py::arg("params"));

    m.def("ks_normal", &ks_normal, py::arg("samples"));

    py::class_<DiagnosticsRequest>(m, "DiagnosticsRequest")
        .def(py::init<>())
        .def_readwrite("ks_normal", &DiagnosticsRequest::ks_normal)
        .def_readwrite("moments", &DiagnosticsRequest::moments)
        .def_readwrite("consistency", &DiagnosticsRequest::consistency)
        .def_readwrite("v_transform", &DiagnosticsRequest::v_transform)
        .def_readwrite("u_grid", &DiagnosticsRequest::u_grid);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("params", &ExperimentConfig::params)
        .def_readwrite("T_grid", &ExperimentConfig::T_grid)
        .def_readwrite("dt", &ExperimentConfig::dt)
        .def_readwrite("n_reps", &ExperimentConfig::n_reps)
        .def_readwrite("base_seed", &ExperimentConfig::base_seed)
        .def_readwrite("method", &ExperimentConfig::method)
        .def_readwrite("diagnostics", &ExperimentConfig::diagnostics);

    py::class_<RepRow>(m, "RepRow")
        .def_readonly("rep", &RepRow::rep)
        .def_readonly("T", &RepRow::T)
        .def_readonly("seed", &RepRow::seed)
        .def_readonly("ok", &RepRow::ok)
        .def_readonly("b_hat", &RepRow::b_hat)
        .def_readonly("err_det", &RepRow::err_det)
        .def_readonly("err_rand", &RepRow::err_rand)
        .def_readonly("aux_log_ratio", &RepRow::aux_log_ratio)
        .def_readonly("aux_term_over_int", &RepRow::aux_term_over_int)
        .def_readonly("scaled_y_T", &RepRow::scaled_y_T)
        .def_readonly("scaled_int_Y", &RepRow::scaled_int_Y);

    py::class_<HorizonSummary>(m, "HorizonSummary")
        .def_readonly("T", &HorizonSummary::T)
        .def_readonly("n_effective", &HorizonSummary::n_effective)
        .def_readonly("mean_b_hat", &HorizonSummary::mean_b_hat)
        .def_readonly("var_b_hat", &HorizonSummary::var_b_hat)
        .def_readonly("ks_stat", &HorizonSummary::ks_stat)
        .def_readonly("ks_p", &HorizonSummary::ks_p)
        .def_readonly("median_abs_err", &HorizonSummary::median_abs_err);

    py::class_<VCheckRow>(m, "VCheckRow")
        .def_readonly("u", &VCheckRow::u)
        .def_readonly("mc_mean", &VCheckRow::mc_mean)
        .def_readonly("mc_se", &VCheckRow::mc_se)
        .def_readonly("analytic", &VCheckRow::analytic);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("rows", &ExperimentResult::rows)
        .def_readonly("summaries", &ExperimentResult::summaries)
        .def_readonly("v_table", &ExperimentResult::v_table)
        .def_readonly("v_identity_fraction", &ExperimentResult::v_identity_fraction)
        .def_readonly("runtime_seconds", &ExperimentResult::runtime_seconds);

    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("consistency_curve", &consistency_curve, py::arg("config"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("check_V_limit", &check_V_limit, py::arg("config"), py::arg("u_grid"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
}
