#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cli.hpp"

int main(int argc, char** argv) {
  using ambandit::cli::CliOptions;
  CliOptions opts;

  CLI::App app{
      "Robust two-armed experimentation toolkit: closed-form cutoffs and value "
      "functions, finite-difference verification, Monte-Carlo simulation, and "
      "a brute-force two-period game solver.",
      ambandit::cli::kToolName};
  app.require_subcommand(1);
  app.set_version_flag("-V,--version",
                       std::string(ambandit::cli::kToolName) + " " + ambandit::cli::kVersion);

  const auto add_model_flags = [&opts](CLI::App* cmd) {
    cmd->add_option("--r", opts.r, "safe arm flow payoff");
    cmd->add_option("--theta-low", opts.theta_low, "low candidate mean of the ambiguous arm");
    cmd->add_option("--theta-high", opts.theta_high, "high candidate mean of the ambiguous arm");
    cmd->add_option("--sigma", opts.sigma, "noise scale of the ambiguous arm's returns");
    cmd->add_option("--delta", opts.delta, "discount rate");
    cmd->add_option("--alpha", opts.alpha, "ambiguity-aversion penalty weight");
    cmd->add_option("--gamma", opts.gamma, "noise scale of the expert signal (optional)");
    cmd->add_option("--params", opts.params_file, "JSON file with model parameters")
        ->check(CLI::ExistingFile);
    cmd->add_option("--preset", opts.preset,
                    "parameter preset: fig-cutoffs or fig-surplus");
  };
  const auto add_output_flags = [&opts](CLI::App* cmd, bool with_format) {
    cmd->add_option("--out", opts.out, "write output to PATH instead of stdout");
    if (with_format) cmd->add_option("--format", opts.format, "output format: csv or json");
  };

  CLI::App* cutoff = app.add_subcommand(
      "cutoff", "Closed-form experimentation cutoffs and related constants");
  add_model_flags(cutoff);
  add_output_flags(cutoff, true);

  CLI::App* value = app.add_subcommand(
      "value", "Closed-form value function (and expert value/surplus when --gamma is set)");
  add_model_flags(value);
  value->add_option("--p", opts.beliefs, "belief(s) to evaluate; repeatable");
  value->add_option("--grid", opts.grid, "uniform belief grid size when --p is not given");
  add_output_flags(value, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep one parameter and tabulate the closed-form cutoffs");
  add_model_flags(sweep);
  sweep->add_option("--sweep-param", opts.sweep_param,
                    "parameter to sweep: alpha, sigma, gamma, or delta");
  sweep->add_option("--from", opts.from, "sweep range start");
  sweep->add_option("--to", opts.to, "sweep range end");
  sweep->add_option("--steps", opts.steps, "number of sweep points");
  add_output_flags(sweep, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "Solve the variational HJB on a grid and compare with the closed forms");
  add_model_flags(verify);
  verify->add_option("--grid", opts.grid, "number of interior grid points");
  verify->add_option("--tol", opts.tol, "solver convergence tolerance");
  verify->add_option("--max-iter", opts.max_iter, "policy-iteration round limit");
  add_output_flags(verify, true);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo simulation of the equilibrium belief and payoff");
  add_model_flags(simulate);
  simulate->add_option("--p0", opts.initial_belief, "initial belief");
  simulate->add_option("--paths", opts.paths, "number of simulated paths");
  simulate->add_option("--dt", opts.dt, "Euler-Maruyama time step");
  simulate->add_option("--horizon", opts.horizon, "truncation horizon T");
  simulate->add_option("--seed", opts.seed, "RNG seed");
  simulate->add_option("--forced-mu", opts.forced_mu,
                       "diagnostic: pin the allocation at this value on every step");
  add_output_flags(simulate, true);

  CLI::App* two_period = app.add_subcommand(
      "two-period", "Brute-force max-min solution of the two-period example");
  two_period->add_option("--p1", opts.p1, "prior probability of the high arm");
  two_period->add_option("--delta", opts.delta, "weight on the second period (default 1)");
  two_period->add_option("--mu-grid", opts.mu_grid, "number of candidate allocations");
  two_period->add_option("--quad-nodes", opts.quad_nodes, "quadrature nodes per mixture component");
  add_output_flags(two_period, true);

  CLI11_PARSE(app, argc, argv);

  opts.subcommand = app.get_subcommands().front()->get_name();
  return ambandit::cli::run(opts, std::cout, std::cerr);
}
