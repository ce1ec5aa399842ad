#pragma once

#include <optional>

namespace ambandit {

/**
 * Parameters of the robust experimentation model.
 *
 * A decision maker continuously splits attention mu in [0,1] between a safe
 * arm with known flow payoff r and an ambiguous arm whose flow is either
 * theta_low or theta_high.  Returns of the ambiguous arm are observed through
 * Brownian noise with volatility sigma, the future is discounted at rate
 * delta, and drift misspecification is guarded against with a multiplier
 * penalty parameter alpha (smaller alpha = stronger ambiguity aversion).
 *
 * gamma, when present, is the noise volatility of a free unambiguous side
 * signal about the arm ("expert information"); it enters only the expert
 * variants of the model.
 */
struct ModelParams {
  double r = 0.2;
  double theta_low = 0.0;
  double theta_high = 1.0;
  double sigma = 0.4;
  double delta = 0.9;
  double alpha = 0.14;
  std::optional<double> gamma{};
};

/// Returns `params` unchanged when every invariant holds: theta_low <= r <=
/// theta_high with theta_low < theta_high; sigma, delta, alpha strictly
/// positive; gamma strictly positive when present; all entries finite.
/// Otherwise throws std::invalid_argument naming every violated field.
ModelParams validate_params(const ModelParams& params);

/// Expected flow of the ambiguous arm at belief p:
/// m(p) = p*theta_high + (1-p)*theta_low.
[[nodiscard]] double conditional_mean(const ModelParams& params, double p);

/// Belief diffusion coefficient
/// Phi(p) = (theta_high - theta_low)^2 p^2 (1-p)^2 / sigma^2,
/// zero exactly at the degenerate beliefs p in {0,1}.
[[nodiscard]] double diffusion_coefficient(const ModelParams& params, double p);

/// Constant flow penalty sigma^2 * delta / (2 * alpha) that the worst-case
/// drift distortion imposes on the ambiguous arm's expected return.
[[nodiscard]] double ambiguity_cost(const ModelParams& params);

/// Nature's worst-case drift distortion h* = -sigma*delta*sqrt(mu)/alpha when
/// the ambiguous arm receives attention mu in [0,1].
[[nodiscard]] double worst_case_drift(const ModelParams& params, double mu);

/**
 * Closed-form solution of the baseline model.
 *
 * eta aggregates how expensive experimentation is; the cutoff p_bar is
 * interior exactly when eta < 1.  For p <= p_bar the safe arm is used forever
 * and the value is r.  Above p_bar the value is m(p) - ambiguity_cost plus
 * the decaying homogeneous term coeff * p^(1-lambda) * (1-p)^lambda whose
 * constant is pinned by value matching at the cutoff.  When eta >= 1 the safe
 * arm dominates at every belief: p_bar = 1, coeff is absent and v == r.
 *
 * Note eta also bounds the cutoff from above: p_bar / eta =
 * (lambda - 1) / (lambda - eta) < 1 whenever eta < 1, so 0 < p_bar < eta,
 * with p_bar -> eta as lambda grows and p_bar nondecreasing in eta.
 */
struct ClosedForm {
  double eta = 0.0;
  double phi = 0.0;             // (theta_high - theta_low) / (sigma * sqrt(2))
  double lambda = 0.0;          // larger root of x(x-1) = delta / phi^2
  double p_bar = 0.0;           // experimentation cutoff
  double ambiguity_cost = 0.0;  // sigma^2 * delta / (2 * alpha)
  std::optional<double> coeff;  // absent when p_bar == 1
};

/// Derives eta, phi, lambda, p_bar, coeff and the ambiguity cost from the
/// primitives.  gamma is ignored.
[[nodiscard]] ClosedForm derive_closed_form(const ModelParams& params);

/// Baseline value function v(p).  `cf` must come from derive_closed_form on
/// the same params.
[[nodiscard]] double value_function(const ModelParams& params, const ClosedForm& cf, double p);

/// Optimal attention to the ambiguous arm: 1 if p > p_bar, else 0.  The tie
/// at p == p_bar resolves to the safe arm (the indifference set is never hit
/// by the belief dynamics).
[[nodiscard]] int optimal_allocation(const ClosedForm& cf, double p);

namespace detail {

/// p^a * (1-p)^b evaluated in log space; requires p in (0,1).
[[nodiscard]] double power_pair(double p, double a, double b);

/// Throws std::invalid_argument unless p is a probability.
void require_belief(double p);

}  // namespace detail

}  // namespace ambandit
