#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "tubeflow/pipeline.hpp"
#include "tubeflow/validation.hpp"

namespace {

using namespace tubeflow;

struct Options {
  std::string config;
  std::string output;
  std::string format;
  int threads = 0;
  double tolerance_scale = 1.0;
};

int env_threads() {
  const char* value = std::getenv("TUBEFLOW_THREADS");
  if (!value || !*value) return default_thread_count();
  try {
    const int n = std::stoi(value);
    if (n < 1) throw std::invalid_argument("");
    return n;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("TUBEFLOW_THREADS must be a positive integer (got '{}')", value));
  }
}

RunConfig resolve_config(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.output.empty()) {
    cfg.output_directory = o.output;
  } else if (const char* env = std::getenv("TUBEFLOW_OUTPUT_DIR"); env && *env) {
    cfg.output_directory = env;
  }
  if (o.format == "csv" || o.format == "both") cfg.write_csv = true;
  if (o.format == "vtk" || o.format == "both") cfg.write_vtk = true;
  if (o.format == "csv") cfg.write_vtk = false;
  if (o.format == "vtk") cfg.write_csv = false;
  return cfg;
}

int threads_of(const Options& o) { return o.threads > 0 ? o.threads : env_threads(); }

int run_solve(const Options& o) {
  const RunConfig cfg = resolve_config(o);
  const SolveResult r = cmd_solve(cfg, threads_of(o));
  fmt::print("G(s) in [{:.10g}, {:.10g}], max energy defect {:.3e}\n", r.rigidity.min(), r.rigidity.max(),
             r.rigidity.max_energy_defect());
  fmt::print("flux defect: closed form {:.3e}, finite difference {:.3e}; route defect {:.3e}\n",
             r.pressure.flux_defect(), r.pressure_fd.flux_defect(), r.route_defect);
  fmt::print("lambda {:.4g}, gamma {:.4g}, min beta {:.6g}\n", r.geometry.lambda, r.geometry.gamma,
             r.geometry.min_beta);
  for (const auto& w : r.geometry.warnings) fmt::print(stderr, "warning: {}\n", w);
  fmt::print("outputs written to {}\n", cfg.output_directory.string());
  return 0;
}

int run_converge(const Options& o) {
  const RunConfig cfg = resolve_config(o);
  const ConvergenceReport r = cmd_converge(cfg, threads_of(o));
  fmt::print("{:>6} {:>14} {:>14} {:>14}\n", "mesh", "G", "p route", "v3 flux");
  for (const auto& row : r.rows)
    fmt::print("{:>6} {:>14.6e} {:>14.6e} {:>14.6e}\n", row.mesh, row.g_defect, row.p_defect, row.flux_defect);
  fmt::print("orders: G {:.3f}, p route {:.3f}, v3 flux {:.3f}\n", r.order_g, r.order_p, r.order_flux);
  for (const auto& w : r.warnings) fmt::print(stderr, "warning: {}\n", w);
  return 0;
}

int run_compare(const Options& o) {
  const RunConfig cfg = resolve_config(o);
  const PerturbationReport r = cmd_compare_perturbation(cfg, threads_of(o));
  fmt::print("{:>8} {:>14} {:>14} {:>14} {:>14}\n", "h", "psi", "G", "p", "v3");
  for (const auto& row : r.rows)
    fmt::print("{:>8.4g} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}\n", row.h, row.psi, row.g, row.p, row.v);
  fmt::print("slopes: psi {:.3f}, G {:.3f}, p {:.3f}, v3 {:.3f}; max |G1|/G0 {:.3e}\n", r.slope_psi, r.slope_g,
             r.slope_p, r.slope_v, r.max_g1_ratio);
  return 0;
}

int run_validate(const Options& o) {
  if (!o.config.empty()) (void)load_config(o.config);
  const auto checks = run_validation(o.tolerance_scale, threads_of(o));
  int failures = 0;
  fmt::print("{:<26} {:>12} {:>3} {:>12}  {}\n", "check", "value", "", "threshold", "result");
  for (const auto& c : checks) {
    fmt::print("{:<26} {:>12.4e} {:>3} {:>12.4e}  {}\n", c.name, c.value, c.upper_bound ? "<=" : ">=", c.threshold,
               c.passed ? "PASS" : "FAIL");
    if (!c.passed) ++failures;
  }
  if (failures) {
    fmt::print("{} of {} checks failed:", failures, checks.size());
    for (const auto& c : checks)
      if (!c.passed) fmt::print(" {}", c.name);
    fmt::print("\n");
    return 2;
  }
  fmt::print("all {} checks passed\n", checks.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-order solver for low-Reynolds flow in thin curved pipes"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    if (config_required) c->required();
    sub->add_option("--threads", o.threads, "worker threads (default TUBEFLOW_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  };
  auto add_output = [&o](CLI::App* sub) {
    sub->add_option("--output", o.output, "output directory (overrides TUBEFLOW_OUTPUT_DIR and the config)");
  };

  auto* solve = app.add_subcommand("solve", "full pipeline: rigidity, pressure, transverse correction, fields");
  add_common(solve, true);
  add_output(solve);
  solve->add_option("--format", o.format, "field output format")->check(CLI::IsMember({"csv", "vtk", "both"}));

  auto* converge = app.add_subcommand("converge", "mesh refinement study over study.meshes");
  add_common(converge, true);
  add_output(converge);

  auto* compare = app.add_subcommand("compare-perturbation", "full versus two-term perturbative solution over study.h_values");
  add_common(compare, true);
  add_output(compare);

  auto* validate = app.add_subcommand("validate", "built-in oracle battery");
  add_common(validate, false);
  validate->add_option("--tol-scale", o.tolerance_scale, "multiply upper tolerances (divide lower bounds) by this")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return run_solve(o);
    if (converge->parsed()) return run_converge(o);
    if (compare->parsed()) return run_compare(o);
    return run_validate(o);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    fmt::print(stderr, "numerical error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}
