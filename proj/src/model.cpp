#include "ambandit/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ambandit {

namespace detail {

double power_pair(double p, double a, double b) {
  return std::exp(a * std::log(p) + b * std::log1p(-p));
}

void require_belief(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "belief p must lie in [0,1], got " << p;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

ModelParams validate_params(const ModelParams& params) {
  std::ostringstream problems;
  auto flag = [&problems](const char* msg) {
    if (problems.tellp() > 0) problems << "; ";
    problems << msg;
  };

  if (!std::isfinite(params.r)) flag("r must be finite");
  if (!std::isfinite(params.theta_low)) flag("theta_low must be finite");
  if (!std::isfinite(params.theta_high)) flag("theta_high must be finite");
  if (!(params.theta_low < params.theta_high))
    flag("theta_low must be strictly below theta_high (degenerate return range)");
  if (!(params.r >= params.theta_low && params.r <= params.theta_high))
    flag("r must lie between theta_low and theta_high");
  if (!(std::isfinite(params.sigma) && params.sigma > 0.0)) flag("sigma must be finite and > 0");
  if (!(std::isfinite(params.delta) && params.delta > 0.0)) flag("delta must be finite and > 0");
  if (!(std::isfinite(params.alpha) && params.alpha > 0.0)) flag("alpha must be finite and > 0");
  if (params.gamma && !(std::isfinite(*params.gamma) && *params.gamma > 0.0))
    flag("gamma must be finite and > 0 when present");

  if (problems.tellp() > 0) {
    throw std::invalid_argument("invalid model parameters: " + problems.str());
  }
  return params;
}

double conditional_mean(const ModelParams& params, double p) {
  detail::require_belief(p);
  return p * params.theta_high + (1.0 - p) * params.theta_low;
}

double diffusion_coefficient(const ModelParams& params, double p) {
  detail::require_belief(p);
  const double q = (params.theta_high - params.theta_low) * p * (1.0 - p) / params.sigma;
  return q * q;
}

double ambiguity_cost(const ModelParams& params) {
  return params.sigma * params.sigma * params.delta / (2.0 * params.alpha);
}

double worst_case_drift(const ModelParams& params, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    std::ostringstream msg;
    msg << "allocation mu must lie in [0,1], got " << mu;
    throw std::invalid_argument(msg.str());
  }
  return -params.sigma * params.delta * std::sqrt(mu) / params.alpha;
}

ClosedForm derive_closed_form(const ModelParams& params) {
  validate_params(params);

  const double dtheta = params.theta_high - params.theta_low;
  ClosedForm cf;
  cf.ambiguity_cost = ambiguity_cost(params);
  cf.eta = (params.r - params.theta_low) / dtheta + cf.ambiguity_cost / dtheta;
  cf.phi = dtheta / (params.sigma * std::numbers::sqrt2);
  cf.lambda = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * params.delta / (cf.phi * cf.phi)));

  if (cf.eta >= 1.0) {
    // Experimentation never pays: the cutoff collapses to the right endpoint
    // and the homogeneous term disappears (v == r everywhere).
    cf.p_bar = 1.0;
    cf.coeff.reset();
  } else {
    cf.p_bar = (cf.lambda - 1.0) * cf.eta / (cf.lambda - cf.eta);
    const double gap = params.r - conditional_mean(params, cf.p_bar) + cf.ambiguity_cost;
    cf.coeff = gap / detail::power_pair(cf.p_bar, 1.0 - cf.lambda, cf.lambda);
  }
  return cf;
}

double value_function(const ModelParams& params, const ClosedForm& cf, double p) {
  detail::require_belief(p);
  if (p <= cf.p_bar) return params.r;
  if (p == 1.0) {
    // Limit of the closed form: the homogeneous term vanishes at p = 1.
    return conditional_mean(params, 1.0) - cf.ambiguity_cost;
  }
  return conditional_mean(params, p) - cf.ambiguity_cost +
         *cf.coeff * detail::power_pair(p, 1.0 - cf.lambda, cf.lambda);
}

int optimal_allocation(const ClosedForm& cf, double p) {
  detail::require_belief(p);
  return p > cf.p_bar ? 1 : 0;
}

}  // namespace ambandit
