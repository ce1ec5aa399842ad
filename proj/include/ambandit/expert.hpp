#pragma once

#include <optional>

#include "ambandit/model.hpp"

namespace ambandit {

/**
 * Closed-form solution of the model with a free unambiguous signal.
 *
 * Below the cutoff p_tilde the ambiguous arm is idle but beliefs keep moving
 * on the expert signal, so the value is r plus a strictly positive option
 * term c1 * p^lambda1 * (1-p)^(1-lambda1).  At and above p_tilde both
 * information sources are active and the value is m(p) - ambiguity_cost plus
 * c2 * p^(1-lambda2) * (1-p)^lambda2.  The branches meet C2-smoothly at
 * p_tilde: value matching, smooth pasting and super contact (the diffusion
 * never degenerates at the cutoff, so the second derivative is continuous
 * there as well).
 *
 * When eta >= 1 the safe arm dominates at every belief: p_tilde = 1, the
 * constants are absent and vtilde == r, mirroring the baseline clamp.
 */
struct ExpertClosedForm {
  double lambda1 = 0.0;     // larger root of x(x-1) = delta / phi_gamma^2
  double lambda2 = 0.0;     // larger root of x(x-1) = delta / (phi_sigma^2 + phi_gamma^2)
  double big_lambda = 0.0;  // 1 + lambda1*s + (lambda2 - 1)(1 + s) with s = sigma^2/gamma^2
  double p_tilde = 0.0;     // experimentation cutoff with expert information
  double phi_sigma = 0.0;   // (theta_high - theta_low) / (sigma * sqrt(2))
  double phi_gamma = 0.0;   // (theta_high - theta_low) / (gamma * sqrt(2))
  std::optional<double> c1; // absent when p_tilde == 1
  std::optional<double> c2; // absent when p_tilde == 1
  // True when r - m(p_tilde) + ambiguity_cost came out negative, in which
  // case the pasted constants solve the boundary conditions but lose their
  // optimality interpretation.  Never set in the clamped regime.
  bool outside_derivation = false;
};

/// Derives the expert closed form; requires params.gamma to be present.
[[nodiscard]] ExpertClosedForm derive_expert_closed_form(const ModelParams& params);

/// Value function vtilde(p) with free expert information.  `ecf` must come
/// from derive_expert_closed_form on the same params.
[[nodiscard]] double expert_value_function(const ModelParams& params, const ExpertClosedForm& ecf,
                                           double p);

/// Value of the expert information source: surplus(p) = vtilde(p) - v(p).
/// Nonnegative everywhere, zero at the degenerate beliefs p in {0,1}.
[[nodiscard]] double surplus(const ModelParams& params, double p);

/// Point of a uniform grid of grid_size >= 3 beliefs over [0,1] maximizing
/// the surplus (first maximizer on ties).  A grid scan is used deliberately:
/// the surplus has a kink at p_bar and a branch switch at p_tilde.
[[nodiscard]] double surplus_argmax(const ModelParams& params, int grid_size);

}  // namespace ambandit
