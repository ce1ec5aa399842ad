#include "cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ambandit/expert.hpp"
#include "ambandit/hjb.hpp"
#include "ambandit/model.hpp"
#include "ambandit/sim.hpp"
#include "ambandit/two_period.hpp"

namespace ambandit::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

enum class Format { kCsv, kJson };

// Shortest decimal representation that round-trips the double exactly.
std::string fmt(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

Format pick_format(const CliOptions& opts, Format fallback, bool csv_allowed) {
  if (!opts.format) return fallback;
  if (*opts.format == "json") return Format::kJson;
  if (*opts.format == "csv") {
    if (!csv_allowed) {
      throw CliError("subcommand '" + opts.subcommand + "' emits JSON only (--format json)");
    }
    return Format::kCsv;
  }
  throw CliError("unknown --format '" + *opts.format + "' (expected csv or json)");
}

void apply_preset_params(const std::string& preset, ModelParams& params) {
  if (preset.empty()) return;
  if (preset != "fig-cutoffs" && preset != "fig-surplus") {
    throw CliError("unknown preset '" + preset + "' (expected fig-cutoffs or fig-surplus)");
  }
  // Both presets pin the caption parameter set used throughout the figures.
  params.r = 0.2;
  params.theta_low = 0.0;
  params.theta_high = 1.0;
  params.sigma = 0.4;
  params.delta = 0.9;
  params.alpha = 0.14;
  params.gamma = 0.3;
}

void apply_params_file(const std::string& path, ModelParams& params) {
  std::ifstream file(path);
  if (!file) throw CliError("cannot read params file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(file);
  } catch (const ordered_json::parse_error& e) {
    throw CliError("params file " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw CliError("params file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "gamma" && value.is_null()) {
      params.gamma.reset();
      continue;
    }
    if (!value.is_number()) {
      throw CliError("params file key '" + key + "' must be a number");
    }
    const double x = value.get<double>();
    if (key == "r") params.r = x;
    else if (key == "theta_low") params.theta_low = x;
    else if (key == "theta_high") params.theta_high = x;
    else if (key == "sigma") params.sigma = x;
    else if (key == "delta") params.delta = x;
    else if (key == "alpha") params.alpha = x;
    else if (key == "gamma") params.gamma = x;
    else throw CliError("params file key '" + key + "' is not a model parameter");
  }
}

// Resolution order, later entries winning: struct defaults, preset, params
// file, explicit flags.  The result is validated before use.
ModelParams resolve_params(const CliOptions& opts) {
  ModelParams params;
  apply_preset_params(opts.preset, params);
  if (!opts.params_file.empty()) apply_params_file(opts.params_file, params);
  if (opts.r) params.r = *opts.r;
  if (opts.theta_low) params.theta_low = *opts.theta_low;
  if (opts.theta_high) params.theta_high = *opts.theta_high;
  if (opts.sigma) params.sigma = *opts.sigma;
  if (opts.delta) params.delta = *opts.delta;
  if (opts.alpha) params.alpha = *opts.alpha;
  if (opts.gamma) params.gamma = *opts.gamma;
  return validate_params(params);
}

ordered_json params_block(const ModelParams& params) {
  ordered_json j;
  j["r"] = params.r;
  j["theta_low"] = params.theta_low;
  j["theta_high"] = params.theta_high;
  j["sigma"] = params.sigma;
  j["delta"] = params.delta;
  j["alpha"] = params.alpha;
  j["gamma"] = params.gamma ? ordered_json(*params.gamma) : ordered_json(nullptr);
  return j;
}

ordered_json make_manifest(const std::string& subcommand, ordered_json params) {
  ordered_json m;
  m["tool"] = kToolName;
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["params"] = std::move(params);
  return m;
}

// JSON documents are written with the manifest embedded; -o/--out redirects
// the document to a file whose path the manifest records.
void finish_json(ordered_json& doc, const CliOptions& opts, std::ostream& out) {
  auto& manifest = doc.at("manifest");
  if (opts.out.empty()) {
    manifest["outputs"] = ordered_json::array();
    out << doc.dump(2) << '\n';
  } else {
    manifest["outputs"] = ordered_json::array({opts.out});
    std::ofstream file(opts.out);
    if (!file) throw CliError("cannot open output file: " + opts.out);
    file << doc.dump(2) << '\n';
  }
}

// CSV payloads cannot embed their manifest, so it accompanies them: as a
// sidecar file next to --out, or on standard error when writing to stdout.
void finish_csv(const std::string& csv, ordered_json manifest, const CliOptions& opts,
                std::ostream& out, std::ostream& err) {
  if (opts.out.empty()) {
    manifest["outputs"] = ordered_json::array();
    out << csv;
    err << manifest.dump(2) << '\n';
  } else {
    const std::string sidecar = opts.out + ".manifest.json";
    manifest["outputs"] = ordered_json::array({opts.out, sidecar});
    std::ofstream file(opts.out);
    if (!file) throw CliError("cannot open output file: " + opts.out);
    file << csv;
    std::ofstream mfile(sidecar);
    if (!mfile) throw CliError("cannot open output file: " + sidecar);
    mfile << manifest.dump(2) << '\n';
  }
}

ordered_json expert_block(const ExpertClosedForm& ecf) {
  ordered_json e;
  e["lambda1"] = ecf.lambda1;
  e["lambda2"] = ecf.lambda2;
  e["big_lambda"] = ecf.big_lambda;
  e["p_tilde"] = ecf.p_tilde;
  e["c1"] = ecf.c1 ? ordered_json(*ecf.c1) : ordered_json(nullptr);
  e["c2"] = ecf.c2 ? ordered_json(*ecf.c2) : ordered_json(nullptr);
  e["phi_sigma"] = ecf.phi_sigma;
  e["phi_gamma"] = ecf.phi_gamma;
  e["outside_derivation"] = ecf.outside_derivation;
  return e;
}

int cmd_cutoff(const CliOptions& opts, std::ostream& out, std::ostream&) {
  pick_format(opts, Format::kJson, /*csv_allowed=*/false);
  const ModelParams params = resolve_params(opts);
  const ClosedForm cf = derive_closed_form(params);

  ordered_json doc;
  doc["manifest"] = make_manifest("cutoff", params_block(params));
  doc["eta"] = cf.eta;
  doc["phi"] = cf.phi;
  doc["lambda"] = cf.lambda;
  doc["p_bar"] = cf.p_bar;
  doc["ambiguity_cost"] = cf.ambiguity_cost;
  doc["coeff"] = cf.coeff ? ordered_json(*cf.coeff) : ordered_json(nullptr);
  doc["never_explore"] = !cf.coeff.has_value();
  if (!cf.coeff) {
    doc["note"] = "never explore: eta >= 1, so the safe arm is optimal at every belief";
  }
  if (params.gamma) {
    doc["expert"] = expert_block(derive_expert_closed_form(params));
  }
  finish_json(doc, opts, out);
  return 0;
}

int cmd_value(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const Format format = pick_format(opts, Format::kCsv, /*csv_allowed=*/true);
  const ModelParams params = resolve_params(opts);
  const ClosedForm cf = derive_closed_form(params);
  std::optional<ExpertClosedForm> ecf;
  if (params.gamma) ecf = derive_expert_closed_form(params);

  std::vector<double> beliefs = opts.beliefs;
  ordered_json settings;
  if (beliefs.empty()) {
    const int n = opts.grid.value_or(1001);
    if (n < 2) throw CliError("--grid must be >= 2");
    beliefs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      beliefs.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
    }
    settings["grid"] = n;
  } else {
    settings["beliefs"] = beliefs;
  }
  settings["format"] = format == Format::kCsv ? "csv" : "json";
  for (const double p : beliefs) {
    if (!(p >= 0.0 && p <= 1.0)) throw CliError("belief out of range: " + fmt(p));
  }

  std::vector<std::string> columns{"p", "v"};
  if (ecf) {
    columns.emplace_back("v_expert");
    columns.emplace_back("surplus");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(beliefs.size());
  for (const double p : beliefs) {
    std::vector<double> row{p, value_function(params, cf, p)};
    if (ecf) {
      const double ve = expert_value_function(params, *ecf, p);
      row.push_back(ve);
      row.push_back(ve - row[1]);
    }
    rows.push_back(std::move(row));
  }

  ordered_json manifest = make_manifest("value", params_block(params));
  manifest["settings"] = std::move(settings);
  if (format == Format::kJson) {
    ordered_json doc;
    doc["manifest"] = std::move(manifest);
    doc["columns"] = columns;
    doc["rows"] = rows;
    finish_json(doc, opts, out);
  } else {
    std::string csv;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      csv += c == 0 ? "" : ",";
      csv += columns[c];
    }
    csv += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) csv += ',';
        csv += fmt(row[c]);
      }
      csv += '\n';
    }
    finish_csv(csv, std::move(manifest), opts, out, err);
  }
  return 0;
}

int cmd_sweep(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const Format format = pick_format(opts, Format::kCsv, /*csv_allowed=*/true);
  const std::string& var = opts.sweep_param;
  if (var.empty()) {
    throw CliError("--sweep-param is required (one of alpha, sigma, gamma, delta)");
  }
  if (var != "alpha" && var != "sigma" && var != "gamma" && var != "delta") {
    throw CliError("cannot sweep '" + var + "' (one of alpha, sigma, gamma, delta)");
  }
  if (!opts.from || !opts.to) throw CliError("sweep needs --from and --to");
  const double lo = *opts.from;
  const double hi = *opts.to;
  const int steps = opts.steps.value_or(100);
  if (steps < 2) throw CliError("--steps must be >= 2");
  if (!(std::isfinite(lo) && std::isfinite(hi) && std::min(lo, hi) > 0.0)) {
    throw CliError("sweep range leaves the validity domain: " + var + " must stay > 0");
  }

  const ModelParams base = resolve_params(opts);
  const bool with_tilde = base.gamma.has_value() || var == "gamma";

  std::vector<double> xs(static_cast<std::size_t>(steps));
  std::vector<std::vector<double>> rows;
  rows.reserve(xs.size());
  int clamped_rows = 0;
  for (int k = 0; k < steps; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    xs[static_cast<std::size_t>(k)] = x;
    ModelParams p = base;
    if (var == "alpha") p.alpha = x;
    else if (var == "sigma") p.sigma = x;
    else if (var == "gamma") p.gamma = x;
    else p.delta = x;
    const ClosedForm cf = derive_closed_form(p);
    const bool clamped = !cf.coeff.has_value();
    clamped_rows += clamped ? 1 : 0;
    std::vector<double> row{x, cf.eta, cf.lambda, cf.p_bar};
    if (with_tilde) row.push_back(derive_expert_closed_form(p).p_tilde);
    row.push_back(clamped ? 1.0 : 0.0);
    rows.push_back(std::move(row));
  }

  // The cutoff expands as ambiguity aversion weakens: along increasing alpha,
  // p_bar must never increase (up to rounding).
  bool monotone = true;
  if (var == "alpha") {
    const std::size_t pbar_col = 3;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
      const bool ascending = xs[k + 1] >= xs[k];
      const double prev = rows[k][pbar_col];
      const double next = rows[k + 1][pbar_col];
      if (ascending ? next > prev + 1e-12 : next < prev - 1e-12) monotone = false;
    }
  }

  std::vector<std::string> columns{var, "eta", "lambda", "p_bar"};
  if (with_tilde) columns.emplace_back("p_tilde");
  columns.emplace_back("clamped");

  ordered_json manifest = make_manifest("sweep", params_block(base));
  ordered_json settings;
  settings["sweep_param"] = var;
  settings["from"] = lo;
  settings["to"] = hi;
  settings["steps"] = steps;
  settings["format"] = format == Format::kCsv ? "csv" : "json";
  manifest["settings"] = std::move(settings);
  ordered_json checks;
  checks["clamped_rows"] = clamped_rows;
  if (var == "alpha") checks["p_bar_nonincreasing_in_alpha"] = monotone;
  manifest["checks"] = std::move(checks);

  if (format == Format::kJson) {
    ordered_json doc;
    doc["manifest"] = std::move(manifest);
    doc["columns"] = columns;
    doc["rows"] = rows;
    finish_json(doc, opts, out);
  } else {
    std::string csv;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      csv += c == 0 ? "" : ",";
      csv += columns[c];
    }
    csv += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) csv += ',';
        csv += fmt(row[c]);
      }
      csv += '\n';
    }
    finish_csv(csv, std::move(manifest), opts, out, err);
  }
  if (var == "alpha" && !monotone) {
    err << "check failed: p_bar is not nonincreasing along the alpha sweep\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const CliOptions& opts, std::ostream& out, std::ostream&) {
  pick_format(opts, Format::kJson, /*csv_allowed=*/false);
  const ModelParams params = resolve_params(opts);
  const int n = opts.grid.value_or(999);
  if (n < 3) throw CliError("--grid must be >= 3");
  if (!(opts.tol > 0.0)) throw CliError("--tol must be > 0");
  if (opts.max_iter < 1) throw CliError("--max-iter must be >= 1");
  const Grid grid{n};

  constexpr double kErrorTol = 5e-4;
  const double boundary_tol = grid.step() + 1e-12;

  const ClosedForm cf = derive_closed_form(params);
  std::optional<ExpertClosedForm> ecf;
  if (params.gamma) ecf = derive_expert_closed_form(params);

  bool all_passed = true;
  const auto report = [&](bool expert) {
    const GridSolution sol = expert ? solve_expert(params, grid, opts.tol, opts.max_iter)
                                    : solve_baseline(params, grid, opts.tol, opts.max_iter);
    double max_err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = grid.point(i);
      const double exact =
          expert ? expert_value_function(params, *ecf, p) : value_function(params, cf, p);
      max_err = std::max(max_err, std::abs(sol.values[static_cast<std::size_t>(i)] - exact));
    }
    const double cutoff = expert ? ecf->p_tilde : cf.p_bar;
    const double gap = std::abs(sol.free_boundary - cutoff);
    const bool passed = max_err <= kErrorTol && gap <= boundary_tol;
    all_passed = all_passed && passed;

    ordered_json v;
    v["n"] = n;
    v["step"] = grid.step();
    v["tol"] = opts.tol;
    v["iterations"] = sol.iterations;
    v["residual"] = sol.residual;
    v["max_abs_error"] = max_err;
    v["error_tolerance"] = kErrorTol;
    v["free_boundary"] = sol.free_boundary;
    v["closed_form_cutoff"] = cutoff;
    v["boundary_gap"] = gap;
    v["boundary_tolerance"] = boundary_tol;
    v["passed"] = passed;
    return v;
  };

  ordered_json doc;
  ordered_json manifest = make_manifest("verify", params_block(params));
  ordered_json settings;
  settings["grid"] = n;
  settings["tol"] = opts.tol;
  settings["max_iter"] = opts.max_iter;
  manifest["settings"] = std::move(settings);
  doc["manifest"] = std::move(manifest);
  doc["baseline"] = report(false);
  if (ecf) doc["expert"] = report(true);
  doc["passed"] = all_passed;
  finish_json(doc, opts, out);
  return all_passed ? 0 : 1;
}

int cmd_simulate(const CliOptions& opts, std::ostream& out, std::ostream&) {
  pick_format(opts, Format::kJson, /*csv_allowed=*/false);
  const ModelParams params = resolve_params(opts);
  const ClosedForm cf = derive_closed_form(params);

  SimConfig cfg;
  cfg.n_paths = opts.paths;
  cfg.dt = opts.dt;
  cfg.horizon = opts.horizon;
  cfg.seed = opts.seed;
  cfg.initial_belief = opts.initial_belief;

  const SimResult res = opts.forced_mu ? simulate_forced(params, cf, cfg, *opts.forced_mu)
                                       : simulate_equilibrium(params, cf, cfg);

  ordered_json manifest = make_manifest("simulate", params_block(params));
  ordered_json settings;
  settings["initial_belief"] = cfg.initial_belief;
  settings["paths"] = cfg.n_paths;
  settings["dt"] = cfg.dt;
  settings["horizon"] = cfg.horizon;
  settings["forced_mu"] =
      opts.forced_mu ? ordered_json(*opts.forced_mu) : ordered_json(nullptr);
  manifest["settings"] = std::move(settings);
  manifest["seed"] = cfg.seed;

  ordered_json doc;
  doc["manifest"] = std::move(manifest);
  doc["p_bar"] = cf.p_bar;
  if (!opts.forced_mu) {
    doc["v_closed_form"] = value_function(params, cf, cfg.initial_belief);
  }
  ordered_json r;
  r["payoff_mean"] = res.payoff_mean;
  r["payoff_se"] = res.payoff_se;
  r["entropy_mean"] = res.entropy_mean;
  r["entropy_se"] = res.entropy_se;
  r["terminal_belief_mean"] = res.terminal_belief_mean;
  r["absorption_frac"] = res.absorption_frac;
  r["truncation"] = res.truncation;
  doc["result"] = std::move(r);
  finish_json(doc, opts, out);
  return 0;
}

int cmd_two_period(const CliOptions& opts, std::ostream& out, std::ostream&) {
  pick_format(opts, Format::kJson, /*csv_allowed=*/false);
  TwoPeriodConfig cfg;
  cfg.p1 = opts.p1;
  cfg.discount = opts.delta.value_or(1.0);
  cfg.mu_grid = opts.mu_grid;
  cfg.quad_nodes = opts.quad_nodes;
  const TwoPeriodResult res = solve_two_period(cfg);

  ordered_json params;
  params["p1"] = cfg.p1;
  params["discount"] = cfg.discount;
  params["mu_grid"] = cfg.mu_grid;
  params["quad_nodes"] = cfg.quad_nodes;

  ordered_json doc;
  doc["manifest"] = make_manifest("two-period", std::move(params));
  doc["v1"] = res.v1;
  doc["mu1_star"] = res.mu1_star;
  doc["h_star"] = res.h_star;
  doc["minmax_v1"] = res.minmax_v1;
  doc["duality_gap"] = res.minmax_v1 - res.v1;
  finish_json(doc, opts, out);
  return 0;
}

void apply_preset_settings(CliOptions& opts) {
  if (opts.preset.empty()) return;
  if (opts.preset != "fig-cutoffs" && opts.preset != "fig-surplus") {
    throw CliError("unknown preset '" + opts.preset + "' (expected fig-cutoffs or fig-surplus)");
  }
  if (opts.preset == "fig-cutoffs" && opts.subcommand == "sweep") {
    if (opts.sweep_param.empty()) opts.sweep_param = "alpha";
    if (!opts.from) opts.from = 0.08;
    if (!opts.to) opts.to = 0.5;
    if (!opts.steps) opts.steps = 100;
  }
  if (opts.preset == "fig-surplus" && opts.subcommand == "value") {
    if (!opts.grid) opts.grid = 1001;
  }
}

}  // namespace

int run(const CliOptions& user_opts, std::ostream& out, std::ostream& err) {
  try {
    CliOptions opts = user_opts;
    apply_preset_settings(opts);
    if (opts.subcommand == "cutoff") return cmd_cutoff(opts, out, err);
    if (opts.subcommand == "value") return cmd_value(opts, out, err);
    if (opts.subcommand == "sweep") return cmd_sweep(opts, out, err);
    if (opts.subcommand == "verify") return cmd_verify(opts, out, err);
    if (opts.subcommand == "simulate") return cmd_simulate(opts, out, err);
    if (opts.subcommand == "two-period") return cmd_two_period(opts, out, err);
    throw CliError("unknown subcommand: " + opts.subcommand);
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ambandit::cli
