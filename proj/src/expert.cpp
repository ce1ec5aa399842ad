#include "ambandit/expert.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ambandit {

ExpertClosedForm derive_expert_closed_form(const ModelParams& params) {
  validate_params(params);
  if (!params.gamma) {
    throw std::invalid_argument("expert closed form requires gamma (expert-signal volatility)");
  }

  const double dtheta = params.theta_high - params.theta_low;
  const double gamma = *params.gamma;
  const double s = (params.sigma * params.sigma) / (gamma * gamma);

  ExpertClosedForm ecf;
  ecf.phi_sigma = dtheta / (params.sigma * std::numbers::sqrt2);
  ecf.phi_gamma = dtheta / (gamma * std::numbers::sqrt2);
  ecf.lambda1 =
      0.5 * (1.0 + std::sqrt(1.0 + 4.0 * params.delta / (ecf.phi_gamma * ecf.phi_gamma)));
  ecf.lambda2 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * params.delta /
                                                 (ecf.phi_sigma * ecf.phi_sigma +
                                                  ecf.phi_gamma * ecf.phi_gamma)));
  ecf.big_lambda = 1.0 + ecf.lambda1 * s + (ecf.lambda2 - 1.0) * (1.0 + s);

  const ClosedForm cf = derive_closed_form(params);
  if (cf.eta >= 1.0) {
    // Same clamp as the baseline: experimentation never starts.
    ecf.p_tilde = 1.0;
    ecf.c1.reset();
    ecf.c2.reset();
    return ecf;
  }

  ecf.p_tilde = (ecf.big_lambda - 1.0) * cf.eta / (ecf.big_lambda - cf.eta);
  const double gap = params.r - conditional_mean(params, ecf.p_tilde) + cf.ambiguity_cost;
  ecf.outside_derivation = gap < 0.0;
  ecf.c1 = s * gap / detail::power_pair(ecf.p_tilde, ecf.lambda1, 1.0 - ecf.lambda1);
  ecf.c2 = (1.0 + s) * gap / detail::power_pair(ecf.p_tilde, 1.0 - ecf.lambda2, ecf.lambda2);
  return ecf;
}

double expert_value_function(const ModelParams& params, const ExpertClosedForm& ecf, double p) {
  detail::require_belief(p);
  if (!ecf.c1) return params.r;  // never-explore regime: vtilde == r
  if (p < ecf.p_tilde) {
    if (p == 0.0) return params.r;  // option term vanishes at p = 0
    return params.r + *ecf.c1 * detail::power_pair(p, ecf.lambda1, 1.0 - ecf.lambda1);
  }
  if (p == 1.0) {
    // Limit of the exploring branch: the c2 term vanishes at p = 1.
    return conditional_mean(params, 1.0) - ambiguity_cost(params);
  }
  return conditional_mean(params, p) - ambiguity_cost(params) +
         *ecf.c2 * detail::power_pair(p, 1.0 - ecf.lambda2, ecf.lambda2);
}

double surplus(const ModelParams& params, double p) {
  const ClosedForm cf = derive_closed_form(params);
  const ExpertClosedForm ecf = derive_expert_closed_form(params);
  return expert_value_function(params, ecf, p) - value_function(params, cf, p);
}

double surplus_argmax(const ModelParams& params, int grid_size) {
  if (grid_size < 3) {
    throw std::invalid_argument("surplus_argmax requires grid_size >= 3");
  }
  const ClosedForm cf = derive_closed_form(params);
  const ExpertClosedForm ecf = derive_expert_closed_form(params);

  double best_p = 0.0;
  double best_surplus = -1.0;
  for (int k = 0; k < grid_size; ++k) {
    const double p = static_cast<double>(k) / (grid_size - 1);
    const double s = expert_value_function(params, ecf, p) - value_function(params, cf, p);
    if (s > best_surplus) {
      best_surplus = s;
      best_p = p;
    }
  }
  return best_p;
}

}  // namespace ambandit
