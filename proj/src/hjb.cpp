#include "ambandit/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ambandit {

std::vector<double> Grid::points() const {
  std::vector<double> ps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ps[static_cast<std::size_t>(i)] = point(i);
  return ps;
}

namespace {

// Per-node data shared by both model variants.  A "load" is Phi/(2 delta h^2):
// the weight multiplying the raw central second difference in the discrete
// equation, so load * (v_{i-1} - 2 v_i + v_{i+1}) = Phi * D2v / (2 delta).
struct Stencil {
  int n = 0;
  bool expert = false;
  double r = 0.0;
  double cost = 0.0;
  double v_left = 0.0;   // Dirichlet value at p = 0
  double v_right = 0.0;  // Dirichlet value at p = 1
  std::vector<double> m;
  std::vector<double> load_sigma;
  std::vector<double> load_gamma;  // all zero in the baseline
};

Stencil make_stencil(const ModelParams& params, const Grid& grid, bool expert) {
  validate_params(params);
  if (grid.n < 3) throw std::invalid_argument("grid must have at least 3 interior points");
  if (expert && !params.gamma) throw std::invalid_argument("expert solve requires gamma");

  Stencil st;
  st.n = grid.n;
  st.expert = expert;
  st.r = params.r;
  st.cost = ambiguity_cost(params);
  st.v_left = std::max(params.r, params.theta_low - st.cost);
  st.v_right = std::max(params.r, params.theta_high - st.cost);

  const double h = grid.step();
  const double scale = 1.0 / (2.0 * params.delta * h * h);
  const double dtheta = params.theta_high - params.theta_low;
  st.m.resize(static_cast<std::size_t>(grid.n));
  st.load_sigma.resize(static_cast<std::size_t>(grid.n));
  st.load_gamma.assign(static_cast<std::size_t>(grid.n), 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const double p = grid.point(i);
    const auto k = static_cast<std::size_t>(i);
    st.m[k] = conditional_mean(params, p);
    const double qs = dtheta * p * (1.0 - p) / params.sigma;
    st.load_sigma[k] = qs * qs * scale;
    if (expert) {
      const double qg = dtheta * p * (1.0 - p) / *params.gamma;
      st.load_gamma[k] = qg * qg * scale;
    }
  }
  return st;
}

// Total diffusion load and flow payoff of a node under attention mu.
inline double row_load(const Stencil& st, std::size_t i, int mu) {
  return (mu != 0 ? st.load_sigma[i] : 0.0) + st.load_gamma[i];
}

inline double row_rhs(const Stencil& st, std::size_t i, int mu) {
  return mu != 0 ? st.m[i] - st.cost : st.r;
}

// Exact solve of the linear system fixed by `policy` (Thomas algorithm).
// Rows: (1 + 2 L_i) v_i - L_i (v_{i-1} + v_{i+1}) = rhs_i with the boundary
// neighbors folded into the right-hand side.
std::vector<double> policy_evaluate(const Stencil& st, const std::vector<int>& policy) {
  const auto n = static_cast<std::size_t>(st.n);
  std::vector<double> diag(n), off(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double load = row_load(st, i, policy[i]);
    diag[i] = 1.0 + 2.0 * load;
    off[i] = -load;
    rhs[i] = row_rhs(st, i, policy[i]);
  }
  rhs[0] -= off[0] * st.v_left;
  rhs[n - 1] -= off[n - 1] * st.v_right;

  // Forward elimination (the matrix is strictly diagonally dominant).
  std::vector<double> c(n), d(n);
  c[0] = off[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - off[i] * c[i - 1];
    c[i] = off[i] / denom;
    d[i] = (rhs[i] - off[i] * d[i - 1]) / denom;
  }
  std::vector<double> v(n);
  v[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    v[i] = d[i] - c[i] * v[i + 1];
  }
  return v;
}

// Candidate operator values at node i evaluated explicitly on v.
inline void candidates(const Stencil& st, const std::vector<double>& v, std::size_t i,
                       double& safe, double& explore) {
  const auto n = static_cast<std::size_t>(st.n);
  const double vm = i == 0 ? st.v_left : v[i - 1];
  const double vp = i == n - 1 ? st.v_right : v[i + 1];
  const double sd = vm - 2.0 * v[i] + vp;
  safe = st.r + st.load_gamma[i] * sd;
  explore = st.m[i] - st.cost + (st.load_sigma[i] + st.load_gamma[i]) * sd;
}

std::vector<int> improve_policy(const Stencil& st, const std::vector<double>& v) {
  std::vector<int> policy(static_cast<std::size_t>(st.n));
  for (std::size_t i = 0; i < policy.size(); ++i) {
    double safe, explore;
    candidates(st, v, i, safe, explore);
    policy[i] = explore > safe ? 1 : 0;  // tie resolves to the safe arm
  }
  return policy;
}

double variational_residual(const Stencil& st, const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double safe, explore;
    candidates(st, v, i, safe, explore);
    worst = std::max(worst, std::abs(v[i] - std::max(safe, explore)));
  }
  return worst;
}

double free_boundary_of(const std::vector<int>& policy, const Grid& grid) {
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (policy[i] != 0) {
      const double left = i == 0 ? 0.0 : grid.point(static_cast<int>(i) - 1);
      return 0.5 * (left + grid.point(static_cast<int>(i)));
    }
  }
  return 1.0;  // safe arm everywhere
}

std::size_t policy_hash(const std::vector<int>& policy) {
  std::size_t h = 1469598103934665603ULL;  // FNV-1a
  for (int mu : policy) {
    h ^= static_cast<std::size_t>(mu + 1);
    h *= 1099511628211ULL;
  }
  return h;
}

GridSolution finalize(const Stencil& st, const Grid& grid, std::vector<double> v, int iterations) {
  GridSolution sol;
  sol.policy = improve_policy(st, v);
  sol.residual = variational_residual(st, v);
  sol.free_boundary = free_boundary_of(sol.policy, grid);
  sol.values = std::move(v);
  sol.iterations = iterations;
  return sol;
}

GridSolution solve_impl(const ModelParams& params, const Grid& grid, bool expert, double tol,
                        int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  const Stencil st = make_stencil(params, grid, expert);
  const auto n = static_cast<std::size_t>(st.n);

  // Myopic start: explore wherever the static flow already beats the safe arm.
  std::vector<int> policy(n);
  for (std::size_t i = 0; i < n; ++i) policy[i] = st.m[i] - st.cost > st.r ? 1 : 0;

  std::unordered_set<std::size_t> seen{policy_hash(policy)};
  std::vector<double> v(n, st.r);
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<double> v_new = policy_evaluate(st, policy);
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, std::abs(v_new[i] - v[i]));
    std::vector<int> next = improve_policy(st, v_new);
    const bool changed = next != policy;
    v = std::move(v_new);
    if (!changed && sup < tol) {
      return finalize(st, grid, std::move(v), iter);
    }
    if (changed && !seen.insert(policy_hash(next)).second) {
      // Howard iteration revisited a policy without converging: hand the
      // current problem to the monotone damped sweep fallback.
      GridSolution sol =
          detail::damped_value_iteration(params, grid, expert, tol, 100L * max_iter);
      sol.iterations += iter;
      return sol;
    }
    policy = std::move(next);
  }

  std::ostringstream msg;
  msg << (expert ? "expert" : "baseline") << " HJB solve did not converge within " << max_iter
      << " policy iterations (residual " << variational_residual(st, v) << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace

GridSolution solve_baseline(const ModelParams& params, const Grid& grid, double tol,
                            int max_iter) {
  return solve_impl(params, grid, false, tol, max_iter);
}

GridSolution solve_expert(const ModelParams& params, const Grid& grid, double tol, int max_iter) {
  return solve_impl(params, grid, true, tol, max_iter);
}

namespace detail {

GridSolution damped_value_iteration(const ModelParams& params, const Grid& grid, bool expert,
                                    double tol, long max_sweeps, double omega) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(omega > 0.0 && omega <= 1.0)) throw std::invalid_argument("omega must lie in (0,1]");
  const Stencil st = make_stencil(params, grid, expert);
  const auto n = static_cast<std::size_t>(st.n);

  std::vector<double> v(n, st.r), v_next(n);
  for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double vm = i == 0 ? st.v_left : v[i - 1];
      const double vp = i == n - 1 ? st.v_right : v[i + 1];
      // Implicit-diagonal Jacobi: solve each row's equation for v_i with the
      // neighbors frozen, then take the better arm and relax toward it.
      double best = -1e300;
      for (int mu = 0; mu <= 1; ++mu) {
        const double load = row_load(st, i, mu);
        const double cand = (row_rhs(st, i, mu) + load * (vm + vp)) / (1.0 + 2.0 * load);
        best = std::max(best, cand);
      }
      const double x = (1.0 - omega) * v[i] + omega * best;
      worst = std::max(worst, std::abs(x - v[i]));
      v_next[i] = x;
    }
    v.swap(v_next);
    if (worst < tol) {
      return finalize(st, grid, std::move(v), static_cast<int>(std::min<long>(sweep, 1 << 30)));
    }
  }

  std::ostringstream msg;
  msg << (expert ? "expert" : "baseline") << " damped value iteration did not converge within "
      << max_sweeps << " sweeps (residual " << variational_residual(st, v) << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace detail

}  // namespace ambandit
