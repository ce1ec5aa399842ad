#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambandit::cli {

inline constexpr const char* kToolName = "ambandit";
inline constexpr const char* kVersion = "0.1.0";

/// Usage-level failure (bad flags, bad file, out-of-range request): exit 2.
/// Numeric-check failures (a verification tolerance exceeded) exit 1 without
/// an exception, and solver failures (std::runtime_error) also map to 1.
struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed command line, before parameter resolution.  Model parameters are
/// optional here; run() resolves them in increasing precedence
///   struct defaults < --preset < --params file < explicit flags
/// and validates the result.
struct CliOptions {
  std::string subcommand;

  // model parameter overrides
  std::optional<double> r, theta_low, theta_high, sigma, delta, alpha, gamma;
  std::string params_file;          // --params FILE (JSON), empty = none
  std::string preset;               // --preset NAME, empty = none

  std::string out;                  // --out PATH, empty = stdout
  std::optional<std::string> format;  // --format csv|json where applicable

  // value
  std::vector<double> beliefs;      // --p, repeatable; empty = use grid
  std::optional<int> grid;          // --grid N (also verify's grid size)

  // sweep
  std::string sweep_param;          // --sweep-param alpha|sigma|gamma|delta
  std::optional<double> from, to;   // --from, --to
  std::optional<int> steps;         // --steps

  // verify
  double tol = 1e-10;               // --tol
  int max_iter = 10000;             // --max-iter

  // simulate
  long long paths = 100000;         // --paths
  double dt = 1e-3;                 // --dt
  double horizon = 30.0;            // --horizon
  std::uint64_t seed = 0;           // --seed
  double initial_belief = 0.5;      // --p0
  std::optional<double> forced_mu;  // --forced-mu diagnostic

  // two-period (reuses --delta for the discount, default 1.0)
  double p1 = 0.5;                  // --p1
  int mu_grid = 1001;               // --mu-grid
  int quad_nodes = 64;              // --quad-nodes
};

/// Executes one subcommand.  Writes results to `out` (or to --out files) and
/// diagnostics to `err`.  Returns the process exit code: 0 on success and all
/// requested checks passing, 1 when a numeric check fails or a solver gives
/// up, 2 on usage or validation errors.
int run(const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace ambandit::cli
