#pragma once

#include <vector>

#include "ambandit/model.hpp"

namespace ambandit {

/// Uniform interior belief grid: points p_i = (i+1)/(n+1) for i = 0..n-1.
/// The endpoints p = 0 and p = 1 carry Dirichlet data (the diffusion
/// degenerates there) and are not unknowns.
struct Grid {
  int n = 999;

  [[nodiscard]] double step() const { return 1.0 / (n + 1); }
  [[nodiscard]] double point(int i) const { return (i + 1) * step(); }
  [[nodiscard]] std::vector<double> points() const;
};

/// Discrete solution of one variational HJB problem on a Grid.
struct GridSolution {
  std::vector<double> values;  // value at each interior grid point
  std::vector<int> policy;     // attention mu in {0,1} at each interior point
  // Estimated cutoff: midpoint between the last safe node and the first
  // exploring node (halves the discretization bias); 1.0 when the safe arm
  // is used everywhere.
  double free_boundary = 1.0;
  // Max pointwise violation of the discrete variational equation at the
  // returned values.
  double residual = 0.0;
  // Policy-improvement rounds; includes damped sweeps if the fallback ran.
  int iterations = 0;
};

/// Solves the baseline variational HJB
///   v_i = max{ r, m(p_i) - ambiguity_cost + Phi_sigma(p_i) D2 v_i / (2 delta) }
/// by Howard policy iteration with exact tridiagonal policy evaluation,
/// falling back to damped value iteration if a policy cycle is detected.
/// Boundary data: v(0) = max{r, theta_low - cost} and
/// v(1) = max{r, theta_high - cost}.  Throws std::runtime_error when not
/// converged within max_iter rounds.
GridSolution solve_baseline(const ModelParams& params, const Grid& grid, double tol = 1e-10,
                            int max_iter = 10000);

/// Same for the expert problem, where the free signal keeps the belief
/// diffusing on both sides of the cutoff:
///   v_i = max over mu of { (1-mu) r + mu (m(p_i) - cost)
///                          + (mu Phi_sigma + Phi_gamma)(p_i) D2 v_i / (2 delta) }.
/// Requires params.gamma.
GridSolution solve_expert(const ModelParams& params, const Grid& grid, double tol = 1e-10,
                          int max_iter = 10000);

namespace detail {

/// Damped projected value iteration (implicit-diagonal Jacobi sweeps with
/// relaxation omega) for the same discrete problems; the convergence
/// fallback used by the solvers when Howard iteration revisits a policy.
/// Exposed for direct testing: it must agree with the Howard solution.
GridSolution damped_value_iteration(const ModelParams& params, const Grid& grid, bool expert,
                                    double tol, long max_sweeps, double omega = 0.9);

}  // namespace detail

}  // namespace ambandit
