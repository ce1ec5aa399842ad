// Closed-form baseline model: derived constants, value function, equilibrium
// objects.  Expected digits below are frozen from tests/oracles/
// closed_form_oracle.py (mpmath at 40 digits, independent derivation).
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "ambandit/model.hpp"

using namespace ambandit;

namespace {

ModelParams figure_params() { return ModelParams{}; }  // r=0.2, thetas 0/1, sigma=0.4,
                                                       // delta=0.9, alpha=0.14

constexpr double kEps = 1e-12;

}  // namespace

TEST_CASE("validate_params accepts the figure parameters") {
  const ModelParams p = validate_params(figure_params());
  CHECK(p.r == 0.2);
  CHECK(p.alpha == 0.14);
  CHECK_FALSE(p.gamma.has_value());
}

TEST_CASE("validate_params reports every violation at once") {
  ModelParams p;
  p.theta_low = 2.0;   // above theta_high
  p.theta_high = 1.0;
  p.r = 5.0;           // outside the return range
  p.sigma = -1.0;
  p.delta = 0.0;
  p.alpha = std::numeric_limits<double>::quiet_NaN();
  p.gamma = 0.0;
  try {
    validate_params(p);
    FAIL("expected std::invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("theta_low") != std::string::npos);
    CHECK(msg.find("r must lie between") != std::string::npos);
    CHECK(msg.find("sigma") != std::string::npos);
    CHECK(msg.find("delta") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
    CHECK(msg.find("gamma") != std::string::npos);
  }
}

TEST_CASE("primitive quantities") {
  const ModelParams p = figure_params();
  CHECK(conditional_mean(p, 0.0) == 0.0);
  CHECK(conditional_mean(p, 1.0) == 1.0);
  CHECK(conditional_mean(p, 0.6) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(diffusion_coefficient(p, 0.5) == doctest::Approx(0.390625).epsilon(1e-14));
  CHECK(diffusion_coefficient(p, 0.0) == 0.0);
  CHECK(diffusion_coefficient(p, 1.0) == 0.0);
  CHECK(ambiguity_cost(p) == doctest::Approx(0.5142857142857144).epsilon(kEps));

  CHECK(worst_case_drift(p, 0.0) == 0.0);
  CHECK(worst_case_drift(p, 1.0) == doctest::Approx(-2.5714285714285716).epsilon(1e-15));
  CHECK(worst_case_drift(p, 0.25) == doctest::Approx(-1.2857142857142858).epsilon(1e-15));
  // scaling identity h*(mu) = sqrt(mu) h*(1)
  CHECK(worst_case_drift(p, 0.49) ==
        doctest::Approx(0.7 * worst_case_drift(p, 1.0)).epsilon(1e-15));

  CHECK_THROWS_AS((void)conditional_mean(p, -0.01), std::invalid_argument);
  CHECK_THROWS_AS((void)diffusion_coefficient(p, 1.01), std::invalid_argument);
  CHECK_THROWS_AS((void)worst_case_drift(p, -0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)worst_case_drift(p, 1.5), std::invalid_argument);
}

TEST_CASE("closed-form constants at the figure parameters") {
  const ClosedForm cf = derive_closed_form(figure_params());
  CHECK(cf.eta == doctest::Approx(0.7142857142857144).epsilon(kEps));
  CHECK(cf.phi == doctest::Approx(1.7677669529663689).epsilon(kEps));
  CHECK(cf.lambda == doctest::Approx(1.23348483283569).epsilon(kEps));
  CHECK(cf.p_bar == doctest::Approx(0.32121564663416994).epsilon(kEps));
  CHECK(cf.ambiguity_cost == doctest::Approx(0.5142857142857144).epsilon(kEps));
  REQUIRE(cf.coeff.has_value());
  CHECK(*cf.coeff == doctest::Approx(0.4862624410224376).epsilon(kEps));
  // interior cutoff sits strictly below eta (proper fraction (lambda-1)/(lambda-eta))
  CHECK(cf.p_bar < cf.eta);
  CHECK(cf.p_bar > 0.0);
}

TEST_CASE("value function reference points") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  CHECK(value_function(p, cf, 0.0) == 0.2);
  CHECK(value_function(p, cf, cf.p_bar) == 0.2);       // value matching
  CHECK(value_function(p, cf, 0.321) == 0.2);          // just inside the safe region
  CHECK(value_function(p, cf, 0.3213) == doctest::Approx(0.20000000847050219).epsilon(kEps));
  CHECK(value_function(p, cf, 0.4) == doctest::Approx(0.20644209250058615).epsilon(kEps));
  CHECK(value_function(p, cf, 0.5) == doctest::Approx(0.22884550622550436).epsilon(kEps));
  CHECK(value_function(p, cf, 0.6) == doctest::Approx(0.26265023442544615).epsilon(kEps));
  CHECK(value_function(p, cf, 0.8) == doctest::Approx(0.3560747740696137).epsilon(kEps));
  CHECK(value_function(p, cf, 1.0) == doctest::Approx(0.4857142857142856).epsilon(kEps));
  CHECK_THROWS_AS((void)value_function(p, cf, 1.2), std::invalid_argument);
}

TEST_CASE("never-explore clamp when eta >= 1") {
  ModelParams p = figure_params();
  p.alpha = 0.06;
  ClosedForm cf = derive_closed_form(p);
  CHECK(cf.eta == doctest::Approx(1.4000000000000004).epsilon(kEps));
  CHECK(cf.p_bar == 1.0);
  CHECK_FALSE(cf.coeff.has_value());
  CHECK(value_function(p, cf, 0.5) == 0.2);
  CHECK(value_function(p, cf, 1.0) == 0.2);  // theta_high - cost < r here
  CHECK(optimal_allocation(cf, 1.0) == 0);

  p.alpha = 0.072;  // eta = 1.2: still clamped
  cf = derive_closed_form(p);
  CHECK(cf.eta == doctest::Approx(1.2).epsilon(kEps));
  CHECK(cf.p_bar == 1.0);
  CHECK_FALSE(cf.coeff.has_value());
}

TEST_CASE("knife edge eta == 1") {
  ModelParams p = figure_params();
  p.alpha = 0.09;  // puts eta within one ulp of 1
  const ClosedForm cf = derive_closed_form(p);
  CHECK(cf.p_bar >= 1.0 - 1e-9);
  // whichever side rounding lands on, the coefficient accompanies an
  // interior cutoff and only an interior cutoff
  CHECK(cf.coeff.has_value() == (cf.p_bar < 1.0));
}

TEST_CASE("vanishing ambiguity keeps a small cutoff") {
  ModelParams p = figure_params();
  p.alpha = 1e6;
  const ClosedForm cf = derive_closed_form(p);
  CHECK(cf.eta == doctest::Approx(0.20000007200000001).epsilon(kEps));
  CHECK(cf.p_bar == doctest::Approx(0.045184007687047206).epsilon(kEps));
  CHECK(cf.ambiguity_cost <= 1e-7);
}

TEST_CASE("value function shape on a 1001-point grid") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  std::vector<double> v(1001);
  for (int i = 0; i <= 1000; ++i) v[i] = value_function(p, cf, i / 1000.0);
  for (int i = 0; i < 1000; ++i) CHECK(v[i + 1] >= v[i] - 1e-12);           // nondecreasing
  for (int i = 1; i < 1000; ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] >= -1e-12);  // convex
  for (const double x : v) CHECK(x >= p.r - 1e-12);                         // dominates safe arm
}

TEST_CASE("smooth pasting at the cutoff") {
  const ModelParams p = figure_params();
  const ClosedForm cf = derive_closed_form(p);
  // v' vanishes at p_bar from the right; forward slopes shrink linearly, as
  // measured by the oracle (1.17e-2, 1.19e-3, 1.19e-4).
  double prev = 1.0;
  for (const double eps : {1e-2, 1e-3, 1e-4}) {
    const double slope = (value_function(p, cf, cf.p_bar + eps) - p.r) / eps;
    CHECK(slope > 0.0);
    CHECK(slope < prev);
    prev = slope;
  }
  CHECK(prev <= 2e-4);
}

TEST_CASE("equilibrium allocation is a cutoff rule, safe on ties") {
  const ClosedForm cf = derive_closed_form(figure_params());
  CHECK(optimal_allocation(cf, 0.0) == 0);
  CHECK(optimal_allocation(cf, cf.p_bar) == 0);
  CHECK(optimal_allocation(cf, cf.p_bar + 1e-6) == 1);
  CHECK(optimal_allocation(cf, 1.0) == 1);
  CHECK_THROWS_AS((void)optimal_allocation(cf, -0.5), std::invalid_argument);
}

TEST_CASE("cutoff is nonincreasing in alpha") {
  ModelParams p = figure_params();
  double prev = 2.0;
  for (const double a : {0.08, 0.1, 0.12, 0.14, 0.2, 0.3, 0.5, 1.0, 10.0, 1e6}) {
    p.alpha = a;
    const double pbar = derive_closed_form(p).p_bar;
    CHECK(pbar <= prev + 1e-15);
    prev = pbar;
  }
}

TEST_CASE("cutoff invariants over random valid parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    ModelParams p;
    p.theta_low = -1.0 + 2.0 * u01(rng);
    p.theta_high = p.theta_low + 0.1 + 3.0 * u01(rng);
    p.r = p.theta_low + (p.theta_high - p.theta_low) * u01(rng);
    p.sigma = std::exp(std::log(0.05) + std::log(3.0 / 0.05) * u01(rng));
    p.delta = std::exp(std::log(0.05) + std::log(3.0 / 0.05) * u01(rng));
    p.alpha = std::exp(std::log(0.02) + std::log(5.0 / 0.02) * u01(rng));
    const ClosedForm cf = derive_closed_form(p);
    CHECK(cf.p_bar > 0.0);
    CHECK(cf.p_bar <= 1.0);
    if (cf.eta < 1.0) {
      CHECK(cf.p_bar < cf.eta);
      CHECK(cf.coeff.has_value());
      // the homogeneous coefficient is nonnegative where the derivation holds
      CHECK(*cf.coeff >= 0.0);
    } else {
      CHECK(cf.p_bar == 1.0);
      CHECK_FALSE(cf.coeff.has_value());
    }
  }
}
