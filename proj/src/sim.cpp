#include "ambandit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ambandit {

namespace {

// Per-path seeding: path i consumes the (i+1)-th output of a SplitMix64
// stream started at cfg.seed.  This keeps paths independent of evaluation
// order, so results do not depend on how the path loop is scheduled.
std::uint64_t splitmix64_at(std::uint64_t seed, long long index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Welford {
  long long n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  [[nodiscard]] double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
  [[nodiscard]] double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    // Guard against a tiny negative from cancellation when all values agree.
    const double var = std::max(0.0, (sumsq / static_cast<double>(n) - m * m)) *
                       (static_cast<double>(n) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

void validate_config(const SimConfig& cfg) {
  std::ostringstream problems;
  auto flag = [&problems](const char* msg) {
    if (problems.tellp() > 0) problems << "; ";
    problems << msg;
  };
  if (cfg.n_paths < 1) flag("n_paths must be >= 1");
  if (!(std::isfinite(cfg.dt) && cfg.dt > 0.0)) flag("dt must be finite and > 0");
  if (!(std::isfinite(cfg.horizon) && cfg.horizon > cfg.dt))
    flag("horizon must be finite and > dt");
  if (!(cfg.initial_belief >= 0.0 && cfg.initial_belief <= 1.0))
    flag("initial_belief must lie in [0,1]");
  if (problems.tellp() > 0) {
    throw std::invalid_argument("invalid simulation config: " + problems.str());
  }
}

struct PathStats {
  Welford payoff, entropy, terminal, drift;
  long long absorbed = 0;
};

// One Euler-Maruyama pass over all paths.  Discounting is handled through
// per-step discount-factor differences, which telescope exactly to
// 1 - e^{-delta T} regardless of dt, so the only payoff discretization errors
// are the frozen-flow-within-step approximation and the belief scheme itself.
PathStats run_paths(const ModelParams& params, const ClosedForm& cf, const SimConfig& cfg,
                    std::optional<double> forced_mu) {
  validate_params(params);
  validate_config(cfg);
  if (forced_mu && !(*forced_mu >= 0.0 && *forced_mu <= 1.0)) {
    throw std::invalid_argument("forced_mu must lie in [0,1]");
  }

  const double dtheta = params.theta_high - params.theta_low;
  const double cost = ambiguity_cost(params);
  const double discount_T = std::exp(-params.delta * cfg.horizon);

  // Full steps of dt plus one final (possibly shorter) step landing exactly
  // on the horizon.
  const auto n_steps = static_cast<long long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  const double g = std::exp(-params.delta * cfg.dt);
  const double dt_last = cfg.horizon - static_cast<double>(n_steps - 1) * cfg.dt;
  const double sqrt_dt = std::sqrt(cfg.dt);
  const double sqrt_dt_last = std::sqrt(dt_last);

  const double mu_pin = forced_mu.value_or(1.0);
  const double flow_pin = (1.0 - mu_pin) * params.r + mu_pin * (-cost);  // plus mu*m(p) per step
  const double h_pin = worst_case_drift(params, mu_pin);
  const double entropy_rate = h_pin * h_pin / (2.0 * params.delta);
  const double noise_pin = std::sqrt(mu_pin);

  PathStats stats;
  for (long long path = 0; path < cfg.n_paths; ++path) {
    std::mt19937_64 engine(splitmix64_at(cfg.seed, path));
    std::normal_distribution<double> normal;

    double p = cfg.initial_belief;
    double discount = 1.0;  // e^{-delta t} at the start of the current step
    double payoff = 0.0;
    double entropy = 0.0;
    bool absorbed = false;

    for (long long k = 0; k < n_steps; ++k) {
      if (!forced_mu && p <= cf.p_bar) {
        // Safe arm from here on: the belief freezes, so the remaining
        // discounted flow r is added in closed form.
        payoff += params.r * (discount - discount_T);
        absorbed = true;
        break;
      }
      const bool last = k == n_steps - 1;
      const double next_discount = last ? discount_T : discount * g;
      const double weight = discount - next_discount;  // delta * int_step e^{-delta t} dt

      // Equilibrium play above the cutoff allocates everything to the
      // ambiguous arm; diagnostic mode uses the pinned allocation.
      payoff += (flow_pin + mu_pin * (params.theta_low + p * dtheta)) * weight;
      entropy += entropy_rate * weight;

      if (mu_pin > 0.0 && p > 0.0 && p < 1.0) {
        const double vol = noise_pin * dtheta * p * (1.0 - p) / params.sigma;
        p += vol * (last ? sqrt_dt_last : sqrt_dt) * normal(engine);
        p = std::clamp(p, 0.0, 1.0);
      }
      discount = next_discount;
    }

    stats.payoff.add(payoff);
    stats.entropy.add(entropy);
    stats.terminal.add(p);
    stats.drift.add(p - cfg.initial_belief);
    if (forced_mu) {
      if (p <= cf.p_bar) ++stats.absorbed;
    } else if (absorbed || p <= cf.p_bar) {
      ++stats.absorbed;
    }
  }
  return stats;
}

SimResult to_result(const PathStats& stats, const ModelParams& params, const SimConfig& cfg) {
  SimResult res;
  res.payoff_mean = stats.payoff.mean();
  res.payoff_se = stats.payoff.se();
  res.entropy_mean = stats.entropy.mean();
  res.entropy_se = stats.entropy.se();
  res.terminal_belief_mean = stats.terminal.mean();
  res.absorption_frac =
      static_cast<double>(stats.absorbed) / static_cast<double>(stats.payoff.n);
  res.truncation = std::exp(-params.delta * cfg.horizon);
  return res;
}

}  // namespace

SimResult simulate_equilibrium(const ModelParams& params, const ClosedForm& cf,
                               const SimConfig& cfg) {
  return to_result(run_paths(params, cf, cfg, std::nullopt), params, cfg);
}

SimResult simulate_forced(const ModelParams& params, const ClosedForm& cf, const SimConfig& cfg,
                          double forced_mu) {
  return to_result(run_paths(params, cf, cfg, forced_mu), params, cfg);
}

MartingaleCheck martingale_check(const ModelParams& params, const SimConfig& cfg,
                                 double forced_mu) {
  // The payoff accumulators are unused here; the belief increments are what
  // matters, and they are identical to a forced simulation's.
  const ClosedForm cf = derive_closed_form(params);
  const PathStats stats = run_paths(params, cf, cfg, forced_mu);
  MartingaleCheck check;
  check.mean = stats.drift.mean();
  check.se = stats.drift.se();
  check.passed = std::abs(check.mean) <= 4.0 * check.se;
  return check;
}

}  // namespace ambandit
