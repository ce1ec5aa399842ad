#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "ambandit/expert.hpp"
#include "ambandit/hjb.hpp"
#include "ambandit/model.hpp"
#include "ambandit/sim.hpp"
#include "ambandit/two_period.hpp"

namespace py = pybind11;

using namespace ambandit;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Robust experimentation with two arms under multiplier preferences: "
      "closed-form cutoffs and values, variational HJB solvers, Monte-Carlo "
      "simulation, and the two-period max-min example.";
  m.attr("__version__") = "0.1.0";

  py::class_<ModelParams>(m, "ModelParams",
                          "Model primitives: safe flow r, ambiguous arm means "
                          "theta_low/theta_high, noise scales sigma (and "
                          "optionally gamma for the expert signal), discount "
                          "rate delta, ambiguity penalty weight alpha.")
      .def(py::init([](double r, double theta_low, double theta_high, double sigma,
                       double delta, double alpha, std::optional<double> gamma) {
             return ModelParams{r, theta_low, theta_high, sigma, delta, alpha, gamma};
           }),
           py::arg("r") = 0.2, py::arg("theta_low") = 0.0, py::arg("theta_high") = 1.0,
           py::arg("sigma") = 0.4, py::arg("delta") = 0.9, py::arg("alpha") = 0.14,
           py::arg("gamma") = py::none())
      .def_readwrite("r", &ModelParams::r)
      .def_readwrite("theta_low", &ModelParams::theta_low)
      .def_readwrite("theta_high", &ModelParams::theta_high)
      .def_readwrite("sigma", &ModelParams::sigma)
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream s;
        s << "ModelParams(r=" << p.r << ", theta_low=" << p.theta_low
          << ", theta_high=" << p.theta_high << ", sigma=" << p.sigma
          << ", delta=" << p.delta << ", alpha=" << p.alpha << ", gamma=";
        if (p.gamma) s << *p.gamma; else s << "None";
        s << ")";
        return s.str();
      });

  py::class_<ClosedForm>(m, "ClosedForm",
                         "Closed-form solution of the baseline problem; coeff "
                         "is None when eta >= 1 (never explore, p_bar = 1).")
      .def_readonly("eta", &ClosedForm::eta)
      .def_readonly("phi", &ClosedForm::phi)
      .def_readonly("lambda_", &ClosedForm::lambda)
      .def_readonly("p_bar", &ClosedForm::p_bar)
      .def_readonly("ambiguity_cost", &ClosedForm::ambiguity_cost)
      .def_readonly("coeff", &ClosedForm::coeff)
      .def("__repr__", [](const ClosedForm& cf) {
        std::ostringstream s;
        s << "ClosedForm(eta=" << cf.eta << ", lambda=" << cf.lambda
          << ", p_bar=" << cf.p_bar << ")";
        return s.str();
      });

  py::class_<ExpertClosedForm>(m, "ExpertClosedForm",
                               "Closed-form solution with the free expert "
                               "signal; c1/c2 are None when p_tilde = 1.")
      .def_readonly("lambda1", &ExpertClosedForm::lambda1)
      .def_readonly("lambda2", &ExpertClosedForm::lambda2)
      .def_readonly("big_lambda", &ExpertClosedForm::big_lambda)
      .def_readonly("p_tilde", &ExpertClosedForm::p_tilde)
      .def_readonly("phi_sigma", &ExpertClosedForm::phi_sigma)
      .def_readonly("phi_gamma", &ExpertClosedForm::phi_gamma)
      .def_readonly("c1", &ExpertClosedForm::c1)
      .def_readonly("c2", &ExpertClosedForm::c2)
      .def_readonly("outside_derivation", &ExpertClosedForm::outside_derivation);

  m.def("validate_params", &validate_params, py::arg("params"),
        "Returns the params unchanged or raises ValueError listing every violation.");
  m.def("conditional_mean", &conditional_mean, py::arg("params"), py::arg("p"),
        "m(p): expected ambiguous-arm flow at belief p.");
  m.def("diffusion_coefficient", &diffusion_coefficient, py::arg("params"), py::arg("p"),
        "Phi(p): squared volatility of the belief under full attention.");
  m.def("ambiguity_cost", &ambiguity_cost, py::arg("params"),
        "Constant equilibrium flow penalty sigma^2 delta / (2 alpha).");
  m.def("worst_case_drift", &worst_case_drift, py::arg("params"), py::arg("mu"),
        "Nature's equilibrium distortion h*(mu) = -sigma delta sqrt(mu) / alpha.");
  m.def("derive_closed_form", &derive_closed_form, py::arg("params"));
  m.def("value_function", &value_function, py::arg("params"), py::arg("cf"), py::arg("p"));
  m.def("optimal_allocation", &optimal_allocation, py::arg("cf"), py::arg("p"),
        "Equilibrium attention: 1 above the cutoff p_bar, else 0.");
  m.def("derive_expert_closed_form", &derive_expert_closed_form, py::arg("params"));
  m.def("expert_value_function", &expert_value_function, py::arg("params"), py::arg("ecf"),
        py::arg("p"));
  m.def("surplus", &surplus, py::arg("params"), py::arg("p"),
        "Value created by the expert signal at belief p.");
  m.def("surplus_argmax", &surplus_argmax, py::arg("params"), py::arg("grid_size"),
        "Belief maximizing the surplus over a uniform grid.");

  py::class_<Grid>(m, "Grid", "Uniform interior belief grid with n points (i+1)/(n+1).")
      .def(py::init([](int n) { return Grid{n}; }), py::arg("n") = 999)
      .def_readwrite("n", &Grid::n)
      .def("step", &Grid::step)
      .def("point", &Grid::point, py::arg("i"))
      .def("points", &Grid::points);

  py::class_<GridSolution>(m, "GridSolution")
      .def_readonly("values", &GridSolution::values)
      .def_readonly("policy", &GridSolution::policy)
      .def_readonly("free_boundary", &GridSolution::free_boundary)
      .def_readonly("residual", &GridSolution::residual)
      .def_readonly("iterations", &GridSolution::iterations);

  m.def("solve_baseline", &solve_baseline, py::arg("params"), py::arg("grid"),
        py::arg("tol") = 1e-10, py::arg("max_iter") = 10000,
        "Howard policy iteration for the baseline variational HJB.");
  m.def("solve_expert", &solve_expert, py::arg("params"), py::arg("grid"),
        py::arg("tol") = 1e-10, py::arg("max_iter") = 10000,
        "Howard policy iteration for the expert variational HJB (needs gamma).");

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init([](long long n_paths, double dt, double horizon, std::uint64_t seed,
                       double initial_belief) {
             return SimConfig{n_paths, dt, horizon, seed, initial_belief};
           }),
           py::arg("n_paths") = 100000, py::arg("dt") = 1e-3, py::arg("horizon") = 30.0,
           py::arg("seed") = 0, py::arg("initial_belief") = 0.5)
      .def_readwrite("n_paths", &SimConfig::n_paths)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("initial_belief", &SimConfig::initial_belief);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("payoff_mean", &SimResult::payoff_mean)
      .def_readonly("payoff_se", &SimResult::payoff_se)
      .def_readonly("entropy_mean", &SimResult::entropy_mean)
      .def_readonly("entropy_se", &SimResult::entropy_se)
      .def_readonly("terminal_belief_mean", &SimResult::terminal_belief_mean)
      .def_readonly("absorption_frac", &SimResult::absorption_frac)
      .def_readonly("truncation", &SimResult::truncation);

  py::class_<MartingaleCheck>(m, "MartingaleCheck")
      .def_readonly("mean", &MartingaleCheck::mean)
      .def_readonly("se", &MartingaleCheck::se)
      .def_readonly("passed", &MartingaleCheck::passed);

  m.def("simulate_equilibrium", &simulate_equilibrium, py::arg("params"), py::arg("cf"),
        py::arg("cfg"), "Euler-Maruyama paths under the equilibrium cutoff policy.");
  m.def("simulate_forced", &simulate_forced, py::arg("params"), py::arg("cf"), py::arg("cfg"),
        py::arg("forced_mu"), "Diagnostic paths with the allocation pinned at forced_mu.");
  m.def("martingale_check", &martingale_check, py::arg("params"), py::arg("cfg"),
        py::arg("forced_mu"), "Mean terminal belief drift under a pinned allocation.");

  py::class_<TwoPeriodConfig>(m, "TwoPeriodConfig")
      .def(py::init([](double p1, double discount, int mu_grid, int quad_nodes) {
             return TwoPeriodConfig{p1, discount, mu_grid, quad_nodes};
           }),
           py::arg("p1") = 0.5, py::arg("discount") = 1.0, py::arg("mu_grid") = 1001,
           py::arg("quad_nodes") = 64)
      .def_readwrite("p1", &TwoPeriodConfig::p1)
      .def_readwrite("discount", &TwoPeriodConfig::discount)
      .def_readwrite("mu_grid", &TwoPeriodConfig::mu_grid)
      .def_readwrite("quad_nodes", &TwoPeriodConfig::quad_nodes);

  py::class_<TwoPeriodResult>(m, "TwoPeriodResult")
      .def_readonly("v1", &TwoPeriodResult::v1)
      .def_readonly("mu1_star", &TwoPeriodResult::mu1_star)
      .def_readonly("h_star", &TwoPeriodResult::h_star)
      .def_readonly("minmax_v1", &TwoPeriodResult::minmax_v1);

  m.def("posterior_update", &posterior_update, py::arg("p1"), py::arg("mu1"), py::arg("h"),
        py::arg("y"), "Posterior belief after one observed return in the two-period example.");
  m.def("second_period_value", &second_period_value, py::arg("p2"));
  m.def("solve_two_period", &solve_two_period, py::arg("cfg"),
        "Brute-force max-min (and min-max) value of the two-period game.");
}
