// Monte Carlo simulator: exact deterministic cases, determinism, martingale
// property, quadratic-variation loading, and consistency with the closed form.
#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "ambandit/model.hpp"
#include "ambandit/sim.hpp"

using namespace ambandit;

namespace {

ModelParams figure_params() { return ModelParams{}; }

}  // namespace

TEST_CASE("start below the cutoff: immediate absorption, exact payoff") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  SimConfig cfg;
  cfg.n_paths = 64;
  cfg.horizon = 30.0;
  cfg.initial_belief = 0.25;  // below p_bar = 0.3212...
  const SimResult res = simulate_equilibrium(p, cf, cfg);
  const double expected = p.r * (1.0 - std::exp(-p.delta * cfg.horizon));
  CHECK(res.payoff_mean == doctest::Approx(expected).epsilon(1e-15));
  CHECK(res.payoff_se <= 1e-9);
  CHECK(res.entropy_mean == 0.0);
  CHECK(res.absorption_frac == 1.0);
  CHECK(res.terminal_belief_mean == 0.25);
  CHECK(res.truncation == doctest::Approx(std::exp(-27.0)).epsilon(1e-15));
}

TEST_CASE("identical configuration reproduces bitwise identical output") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  SimConfig cfg;
  cfg.n_paths = 500;
  cfg.horizon = 2.0;
  cfg.seed = 7;
  cfg.initial_belief = 0.6;
  const SimResult a = simulate_equilibrium(p, cf, cfg);
  const SimResult b = simulate_equilibrium(p, cf, cfg);
  CHECK(a.payoff_mean == b.payoff_mean);
  CHECK(a.payoff_se == b.payoff_se);
  CHECK(a.entropy_mean == b.entropy_mean);
  CHECK(a.terminal_belief_mean == b.terminal_belief_mean);
  CHECK(a.absorption_frac == b.absorption_frac);

  cfg.seed = 8;
  const SimResult c = simulate_equilibrium(p, cf, cfg);
  CHECK(a.payoff_mean != c.payoff_mean);
}

TEST_CASE("degenerate belief p0 = 1: flows are deterministic") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  SimConfig cfg;
  cfg.n_paths = 16;
  cfg.horizon = 1.0;
  cfg.initial_belief = 1.0;
  const SimResult res = simulate_equilibrium(p, cf, cfg);
  const double mass = 1.0 - std::exp(-p.delta);
  const double flow = p.theta_high - cf.ambiguity_cost;  // m(1) - cost
  const double h = worst_case_drift(p, 1.0);
  CHECK(res.payoff_mean == doctest::Approx(flow * mass).epsilon(1e-12));
  CHECK(res.payoff_se <= 1e-12);
  CHECK(res.entropy_mean ==
        doctest::Approx(h * h / (2.0 * p.delta) * mass).epsilon(1e-12));
  CHECK(res.terminal_belief_mean == 1.0);
  CHECK(res.absorption_frac == 0.0);
}

TEST_CASE("frozen allocation: belief is a martingale") {
  const ModelParams p = figure_params();
  SimConfig cfg;

  SUBCASE("mu = 0 freezes the belief exactly") {
    cfg.n_paths = 200;
    cfg.horizon = 0.5;
    cfg.initial_belief = 0.4;
    const MartingaleCheck mc = martingale_check(p, cfg, 0.0);
    CHECK(mc.mean == 0.0);
    CHECK(mc.se == 0.0);
    CHECK(mc.passed);
  }

  SUBCASE("mu = 1 drifts nowhere on average") {
    cfg.n_paths = 20000;
    cfg.horizon = 1.0;
    cfg.seed = 123;
    cfg.initial_belief = 0.5;
    const MartingaleCheck mc = martingale_check(p, cfg, 1.0);
    CHECK(mc.se > 0.0);
    CHECK(std::abs(mc.mean) <= 4.0 * mc.se);
    CHECK(mc.passed);
  }
}

TEST_CASE("belief variance over one step matches the diffusion loading") {
  const ModelParams p = figure_params();
  SimConfig cfg;
  cfg.n_paths = 50000;
  cfg.dt = 5e-4;
  cfg.horizon = 1e-3;  // two steps: Var[p_T - p_0] ~ Phi(p0) * horizon
  cfg.seed = 31;
  for (const double p0 : {0.3, 0.5, 0.7}) {
    cfg.initial_belief = p0;
    const MartingaleCheck mc = martingale_check(p, cfg, 1.0);
    const double sample_std = mc.se * std::sqrt(static_cast<double>(cfg.n_paths));
    const double predicted = std::sqrt(diffusion_coefficient(p, p0) * cfg.horizon);
    CHECK(std::abs(sample_std / predicted - 1.0) <= 0.03);
  }
}

TEST_CASE("forced allocation pins the entropy exactly") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  SimConfig cfg;
  cfg.n_paths = 100;
  cfg.horizon = 3.0;
  cfg.initial_belief = 0.5;
  const double mu = 0.25;
  const SimResult res = simulate_forced(p, cf, cfg, mu);
  const double h = worst_case_drift(p, mu);
  const double expected = h * h / (2.0 * p.delta) * (1.0 - std::exp(-p.delta * cfg.horizon));
  CHECK(res.entropy_mean == doctest::Approx(expected).epsilon(1e-12));
  CHECK(res.entropy_se <= 1e-12);
}

TEST_CASE("equilibrium payoff agrees with the closed-form value") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  SimConfig cfg;
  cfg.n_paths = 10000;
  cfg.dt = 2e-3;
  cfg.horizon = 20.0;
  cfg.seed = 2;
  cfg.initial_belief = 0.6;
  const SimResult res = simulate_equilibrium(p, cf, cfg);
  const double target = value_function(p, cf, 0.6);  // 0.26265023442544615
  CHECK(std::abs(res.payoff_mean - target) <= 3.0 * res.payoff_se + 5e-3);
  CHECK(res.absorption_frac > 0.0);
  CHECK(res.absorption_frac < 1.0);
}

TEST_CASE("simulation config validation") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  SimConfig cfg;

  cfg.n_paths = 0;
  CHECK_THROWS_AS((void)simulate_equilibrium(p, cf, cfg), std::invalid_argument);
  cfg.n_paths = 10;

  cfg.dt = -1.0;
  CHECK_THROWS_AS((void)simulate_equilibrium(p, cf, cfg), std::invalid_argument);
  cfg.dt = 1e-3;

  cfg.horizon = 5e-4;  // shorter than one step
  CHECK_THROWS_AS((void)simulate_equilibrium(p, cf, cfg), std::invalid_argument);
  cfg.horizon = 1.0;

  cfg.initial_belief = 1.5;
  CHECK_THROWS_AS((void)simulate_equilibrium(p, cf, cfg), std::invalid_argument);
  cfg.initial_belief = 0.5;

  CHECK_THROWS_AS((void)simulate_forced(p, cf, cfg, 1.5), std::invalid_argument);
}
