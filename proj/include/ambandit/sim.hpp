#pragma once

#include <cstdint>

#include "ambandit/model.hpp"

namespace ambandit {

/// Monte-Carlo settings for the belief-path simulation.
struct SimConfig {
  long long n_paths = 100000;
  double dt = 1e-3;
  double horizon = 30.0;  // truncation time T; discount mass beyond it is exp(-delta*T)
  std::uint64_t seed = 0;
  double initial_belief = 0.5;
};

/// Path-average estimates.  All quantities are truncated at the horizon; the
/// dropped discount mass exp(-delta*horizon) is reported in `truncation` and
/// never silently ignored.
struct SimResult {
  double payoff_mean = 0.0;
  double payoff_se = 0.0;
  double entropy_mean = 0.0;  // discounted relative entropy (1/2) int e^{-delta t} h*^2 dt
  double entropy_se = 0.0;
  double terminal_belief_mean = 0.0;
  double absorption_frac = 0.0;  // fraction of paths ending at or below p_bar
  double truncation = 0.0;       // exp(-delta * horizon)
};

/// Simulates the equilibrium play: the belief follows
/// dp = sqrt(mu * Phi(p)) dW with mu = optimal_allocation(cf, p) frozen
/// within each Euler-Maruyama step, the discounted payoff accumulates
/// delta * int e^{-delta t} [(1-mu) r + mu m(p) - mu * ambiguity_cost] dt,
/// and nature's entropy cost accumulates (1/2) int e^{-delta t} h*(mu)^2 dt.
/// Once p <= p_bar the belief freezes, so the path's remaining payoff
/// r (e^{-delta t} - e^{-delta T}) is added in closed form and simulation of
/// that path stops.
SimResult simulate_equilibrium(const ModelParams& params, const ClosedForm& cf,
                               const SimConfig& cfg);

/// Diagnostic mode: attention pinned at forced_mu in [0,1] for every step of
/// every path (no absorption shortcut).  The flow payoff, the belief noise
/// scale sqrt(forced_mu * Phi(p)) and the distortion h*(forced_mu) all use
/// the pinned allocation.
SimResult simulate_forced(const ModelParams& params, const ClosedForm& cf, const SimConfig& cfg,
                          double forced_mu);

/// Zero-drift diagnostic for the simulated belief under a pinned allocation.
struct MartingaleCheck {
  double mean = 0.0;  // mean of p_T - p_0 across paths
  double se = 0.0;    // standard error of the mean
  bool passed = false;  // |mean| <= 4 * se
};

MartingaleCheck martingale_check(const ModelParams& params, const SimConfig& cfg,
                                 double forced_mu);

}  // namespace ambandit
