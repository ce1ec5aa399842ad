#include "ambandit/two_period.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ambandit {

namespace {

constexpr double kSafeFlow = 1.0;
constexpr double kThetaHigh = 2.0;   // the low arm mean is 0
constexpr std::array<double, 2> kShifts{-0.5, +0.5};

// Second-period indifference belief: 2p - 1/2 = 1 at p = 3/4.
constexpr double kKinkBelief = 0.75;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

struct Quadrature {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // summing to 2
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
Quadrature gauss_legendre(int n) {
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

// E[v2(p2) | theta] for one mixture component y ~ N(mu*theta + sqrt(mu) h, mu),
// with mu > 0 and an interior prior.  v2 equals 1 exactly below the posterior
// kink, so that region is integrated in closed form; the smooth region above
// the kink is handled by Gauss-Legendre on a 14-standard-deviation window,
// beyond which v2 is within an exponentially small distance of its limit 3/2.
double component_expectation(double p1, double mu, double h, double theta,
                             const Quadrature& quad) {
  const double root_mu = std::sqrt(mu);
  const double mean = mu * theta + root_mu * h;
  const double log_prior_odds = std::log((1.0 - p1) / p1);

  // p2(y) >= 3/4 iff y >= y_kink.
  const double y_kink =
      root_mu * h + mu + 0.5 * (std::log(3.0) + log_prior_odds);
  const double z_kink = (y_kink - mean) / root_mu;

  double total = normal_cdf(z_kink);  // v2 = 1 on the safe side

  const double z_lo = std::max(z_kink, -14.0);
  const double z_hi = std::max(z_kink + 14.0, 14.0);
  const double half = 0.5 * (z_hi - z_lo);
  const double mid = 0.5 * (z_hi + z_lo);
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    const double z = mid + half * quad.nodes[k];
    const double y = mean + root_mu * z;
    const double exponent = log_prior_odds + 2.0 * (root_mu * h + mu - y);
    const double p2 = 1.0 / (1.0 + std::exp(exponent));
    total += half * quad.weights[k] * normal_pdf(z) * (2.0 * p2 - 0.5);
  }
  total += 1.5 * (1.0 - normal_cdf(z_hi));
  return total;
}

}  // namespace

double posterior_update(double p1, double mu1, double h, double y) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) {
    throw std::invalid_argument("posterior_update: prior belief must lie in [0,1]");
  }
  if (!(mu1 >= 0.0 && mu1 <= 1.0)) {
    throw std::invalid_argument("posterior_update: allocation must lie in [0,1]");
  }
  if (p1 == 0.0 || p1 == 1.0 || mu1 == 0.0) return p1;
  // Logistic form of Bayes' rule; working in log odds avoids overflow for
  // extreme observations.
  const double log_odds_against =
      std::log((1.0 - p1) / p1) + 2.0 * (std::sqrt(mu1) * h + mu1 - y);
  return 1.0 / (1.0 + std::exp(log_odds_against));
}

double second_period_value(double p2) {
  if (!(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("second_period_value: belief must lie in [0,1]");
  }
  return std::max(kSafeFlow, kThetaHigh * p2 - 0.5);
}

TwoPeriodResult solve_two_period(const TwoPeriodConfig& cfg) {
  std::ostringstream problems;
  auto flag = [&problems](const char* msg) {
    if (problems.tellp() > 0) problems << "; ";
    problems << msg;
  };
  if (!(cfg.p1 >= 0.0 && cfg.p1 <= 1.0)) flag("p1 must lie in [0,1]");
  if (!(cfg.discount > 0.0 && cfg.discount <= 1.0)) flag("discount must lie in (0,1]");
  if (cfg.mu_grid < 2) flag("mu_grid must be >= 2");
  if (cfg.quad_nodes < 8) flag("quad_nodes must be >= 8");
  if (problems.tellp() > 0) {
    throw std::invalid_argument("invalid two-period config: " + problems.str());
  }

  const Quadrature quad = gauss_legendre(cfg.quad_nodes);
  const bool degenerate = cfg.p1 == 0.0 || cfg.p1 == 1.0;

  // Objective J(mu, h) for every grid allocation and both candidate shifts.
  std::array<std::vector<double>, 2> objective;
  objective[0].resize(cfg.mu_grid);
  objective[1].resize(cfg.mu_grid);
  for (int j = 0; j < cfg.mu_grid; ++j) {
    const double mu = static_cast<double>(j) / static_cast<double>(cfg.mu_grid - 1);
    for (std::size_t hi = 0; hi < kShifts.size(); ++hi) {
      const double h = kShifts[hi];
      const double flow =
          (1.0 - mu) * kSafeFlow + mu * kThetaHigh * cfg.p1 + std::sqrt(mu) * h;
      double continuation;
      if (mu == 0.0 || degenerate) {
        // No learning: the posterior equals the prior for every outcome.
        continuation = second_period_value(cfg.p1);
      } else {
        continuation =
            cfg.p1 * component_expectation(cfg.p1, mu, h, kThetaHigh, quad) +
            (1.0 - cfg.p1) * component_expectation(cfg.p1, mu, h, 0.0, quad);
      }
      objective[hi][j] = flow + cfg.discount * continuation;
    }
  }

  TwoPeriodResult res;
  int best = 0;
  double best_inner = std::min(objective[0][0], objective[1][0]);
  for (int j = 1; j < cfg.mu_grid; ++j) {
    const double inner = std::min(objective[0][j], objective[1][j]);
    if (inner > best_inner) {
      best_inner = inner;
      best = j;
    }
  }
  res.v1 = best_inner;
  res.mu1_star = static_cast<double>(best) / static_cast<double>(cfg.mu_grid - 1);
  res.h_star = objective[0][best] <= objective[1][best] ? kShifts[0] : kShifts[1];

  double outer[2] = {objective[0][0], objective[1][0]};
  for (int j = 1; j < cfg.mu_grid; ++j) {
    outer[0] = std::max(outer[0], objective[0][j]);
    outer[1] = std::max(outer[1], objective[1][j]);
  }
  res.minmax_v1 = std::min(outer[0], outer[1]);
  return res;
}

}  // namespace ambandit
