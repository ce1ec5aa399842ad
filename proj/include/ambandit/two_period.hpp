#pragma once

namespace ambandit {

/// Settings for the self-contained two-period example.  The example's
/// constants are fixed: the safe arm pays 1 per period, the ambiguous arm's
/// mean is either 0 or 2, the observation shock has unit variance, and
/// nature's candidate mean shifts are -0.5 and +0.5.
struct TwoPeriodConfig {
  double p1 = 0.5;        // prior probability that the ambiguous arm pays 2
  double discount = 1.0;  // weight on the second period, in (0,1]
  int mu_grid = 1001;     // candidate first-period allocations, uniform on [0,1]
  int quad_nodes = 64;    // Gauss-Legendre nodes per Gaussian mixture component
};

struct TwoPeriodResult {
  double v1 = 0.0;         // max-min first-period value
  double mu1_star = 0.0;   // maximizing first-period allocation
  double h_star = 0.0;     // nature's minimizing shift at mu1_star
  double minmax_v1 = 0.0;  // value with the min/max order swapped (>= v1)
};

/// Posterior probability of the high arm after observing a first-period
/// return y from allocation mu1 under candidate shift h:
///   p2 = 1 / (1 + ((1-p1)/p1) exp{2 (sqrt(mu1) h + mu1 - y)})   for mu1 > 0,
/// and p2 = p1 when mu1 = 0 (nothing is observed) or the prior is degenerate.
/// Throws std::invalid_argument when p1 is outside [0,1] or mu1 outside [0,1].
double posterior_update(double p1, double mu1, double h, double y);

/// Second-period value max{1, 2 p2 - 1/2}: play safe below the posterior
/// threshold 3/4, otherwise take the ambiguous arm at its worst-case mean.
/// Throws std::invalid_argument when p2 is outside [0,1].
double second_period_value(double p2);

/// Brute-force evaluation of the first-period game
///   v1 = max_{mu1 in grid} min_{h in {-1/2,+1/2}}
///        (1-mu1) + 2 mu1 p1 + sqrt(mu1) h + discount * E^h[v2(p2)],
/// where the outcome y is drawn from the mixture of N(mu1*theta + sqrt(mu1) h,
/// mu1) across theta in {0,2} weighted by the prior, and p2 follows
/// posterior_update.  Also reports the min-max value (orders swapped), which
/// weak duality bounds below by v1.  Ties in the outer maximization resolve
/// to the smallest allocation; an exact tie between shifts reports h = -0.5.
/// Throws std::invalid_argument on an invalid config.
TwoPeriodResult solve_two_period(const TwoPeriodConfig& cfg);

}  // namespace ambandit
