#include "tubeflow/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <limits>

#include <fmt/core.h>
#include <fmt/os.h>
#include <nlohmann/json.hpp>

#include "tubeflow/spline.hpp"

namespace tubeflow {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double roundoff_floor = 1e-13;

void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ConfigError(fmt::format("output directory '{}' is not writable", dir.string()));
}

fmt::ostream open_output(const fs::path& path) {
  try {
    return fmt::output_file(path.string());
  } catch (const std::system_error&) {
    throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  }
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << j.dump(2) << '\n';
}

// NaN and infinity are not representable in JSON.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json geometry_json(const GeometryReport& r) {
  return {{"lambda", r.lambda},
          {"lambda_star", r.lambda_star},
          {"gamma", r.gamma},
          {"gamma_star", r.gamma_star},
          {"max_curvature", r.max_curvature},
          {"min_beta", r.min_beta},
          {"min_beta_station", r.min_beta_station},
          {"min_radius", r.min_radius},
          {"slenderness", r.slenderness},
          {"curvature_identity_defect", r.curvature_identity_defect},
          {"curvature_bound_holds", r.curvature_bound_holds},
          {"lambda_h_small", r.lambda_h_small},
          {"valid", r.valid},
          {"centerline_rotated", r.centerline_rotated},
          {"frame_max_drift", r.frame.max_drift},
          {"frame_max_defect", r.frame.max_defect},
          {"warnings", r.warnings}};
}

double max_relative_section_flux(const RigidityProfile& rigidity, const PressureProfile& pressure) {
  double worst = 0.0;
  const double f = pressure.inlet_flux;
  for (std::size_t i = 0; i < rigidity.s.size(); ++i) {
    const Vector v3 = longitudinal_velocity(rigidity.solutions[i].psi, pressure.dp[i]);
    const double q = section_flux(rigidity.meshes[i], v3);
    worst = std::max(worst, f != 0.0 ? std::abs(q - f) / std::abs(f) : std::abs(q));
  }
  return worst;
}

double max_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

SolveResult solve_pipeline(const RunConfig& config, int threads) {
  const PipeGeometry geometry = config.build_geometry();
  geometry.certify();

  SolveResult r;
  r.geometry = geometry.report();
  r.rigidity = rigidity_profile(geometry, config.n_rho, threads);
  const PrandtlSDerivatives derivs = prandtl_s_derivatives(r.rigidity);
  r.pressure = solve_reynolds(r.rigidity.s, r.rigidity.g, config.flux, config.outlet_pressure, derivs.dg, derivs.d2g);
  r.pressure_fd = solve_reynolds_fd(r.rigidity.s, r.rigidity.g, config.flux, config.outlet_pressure);
  r.route_defect = max_difference(r.pressure.p, r.pressure_fd.p);
  r.flux_law_defect = max_relative_section_flux(r.rigidity, r.pressure);
  r.bounds = pressure_derivative_bounds(r.pressure, r.geometry, r.rigidity.min());

  if (config.transverse) {
    const LongitudinalProfile longitudinal = longitudinal_profile(r.rigidity, derivs, r.pressure);
    r.transverse = solve_transverse_profile(r.rigidity, longitudinal, threads);
    for (const auto& t : r.transverse) r.max_divergence_residual = std::max(r.max_divergence_residual, t.divergence_residual);
  }
  r.field = assemble(geometry, r.rigidity, r.pressure, r.transverse, {config.transverse, config.cutoff, threads});
  return r;
}

SolveResult cmd_solve(const RunConfig& config, int threads) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = config.output_directory;
  prepare_directory(dir);
  SolveResult r = solve_pipeline(config, threads);

  {
    auto out = open_output(dir / "rigidity.csv");
    out.print("s,G_bulk,G_energy,residual\n");
    for (std::size_t i = 0; i < r.rigidity.s.size(); ++i)
      out.print("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.rigidity.s[i], r.rigidity.g[i], r.rigidity.g_energy[i],
                r.rigidity.residual[i]);
  }
  {
    auto out = open_output(dir / "pressure.csv");
    out.print("s,p0,dp0_ds,flux\n");
    for (std::size_t i = 0; i < r.pressure.s.size(); ++i)
      out.print("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.pressure.s[i], r.pressure.p[i], r.pressure.dp[i],
                r.pressure.flux[i]);
  }
  if (config.write_csv) write_csv(r.field, dir / "field.csv");
  if (config.write_vtk) write_vtk(r.field, dir / "field.vtk");

  double max_residual = 0.0;
  for (double x : r.rigidity.residual) max_residual = std::max(max_residual, x);
  double field_flux_defect = 0.0;
  const double target = config.slenderness * config.flux;
  for (double q : r.field.flux) field_flux_defect = std::max(field_flux_defect, std::abs(q - target));

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json report = {
      {"command", "solve"},
      {"geometry", geometry_json(r.geometry)},
      {"rigidity",
       {{"min", r.rigidity.min()},
        {"max", r.rigidity.max()},
        {"max_energy_defect", r.rigidity.max_energy_defect()},
        {"max_solver_residual", max_residual}}},
      {"pressure",
       {{"flux_defect_closed_form", r.pressure.flux_defect()},
        {"flux_defect_finite_difference", r.pressure_fd.flux_defect()},
        {"route_defect", r.route_defect},
        {"inlet_pressure", r.pressure.p.front()},
        {"max_dp", r.bounds.max_dp},
        {"max_d2p", r.bounds.max_d2p},
        {"max_d3p", r.bounds.max_d3p},
        {"d2p_ratio", r.bounds.d2p_ratio},
        {"d3p_ratio", r.bounds.d3p_ratio}}},
      {"flux_law_defect", r.flux_law_defect},
      {"field_flux_defect", field_flux_defect},
      {"transverse",
       {{"enabled", config.transverse}, {"max_divergence_residual", r.max_divergence_residual}}},
      {"threads", threads},
      {"wall_time_seconds", wall}};
  write_json(report, dir / "report.json");
  return r;
}

double observed_order(const std::vector<int>& meshes, const std::vector<double>& defects) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < meshes.size() && i < defects.size(); ++i) {
    if (!(std::isfinite(defects[i]) && defects[i] > roundoff_floor)) continue;
    x.push_back(1.0 / meshes[i]);
    y.push_back(defects[i]);
  }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return log_log_slope(x, y);
}

bool is_non_monotone(const std::vector<double>& defects) {
  for (std::size_t i = 1; i < defects.size(); ++i) {
    const double prev = defects[i - 1], cur = defects[i];
    if (!std::isfinite(prev) || !std::isfinite(cur)) continue;
    if (prev <= roundoff_floor && cur <= roundoff_floor) continue;
    if (cur >= prev) return true;
  }
  return false;
}

ConvergenceReport cmd_converge(const RunConfig& config, int threads) {
  if (config.meshes.size() < 2) throw ConfigError("'study.meshes' needs at least two entries");
  std::vector<int> meshes = config.meshes;
  std::sort(meshes.begin(), meshes.end());
  const fs::path dir = config.output_directory;
  prepare_directory(dir);

  const RadiusLaw radius = config.build_radius();
  ConvergenceReport report;
  report.g_exact = config.geometry.preset == "straight" && radius.straight_rigidity().has_value();

  std::vector<RigidityProfile> profiles;
  for (int m : meshes) {
    const PipeGeometry geometry = config.build_geometry(config.slenderness, m, m);
    geometry.certify();
    RigidityProfile rigidity = rigidity_profile(geometry, m, threads);
    const PrandtlSDerivatives derivs = prandtl_s_derivatives(rigidity);
    const PressureProfile closed =
        solve_reynolds(rigidity.s, rigidity.g, config.flux, config.outlet_pressure, derivs.dg, derivs.d2g);
    const PressureProfile fd = solve_reynolds_fd(rigidity.s, rigidity.g, config.flux, config.outlet_pressure);

    ConvergenceRow row;
    row.mesh = m;
    row.p_defect = max_difference(closed.p, fd.p);
    row.flux_defect = max_relative_section_flux(rigidity, closed);
    if (report.g_exact) {
      for (std::size_t i = 0; i < rigidity.s.size(); ++i) {
        const double exact = *radius.straight_rigidity(rigidity.s[i]);
        row.g_defect = std::max(row.g_defect, std::abs(rigidity.g[i] - exact) / exact);
      }
    }
    report.rows.push_back(row);
    rigidity.meshes.clear();
    rigidity.solutions.clear();
    profiles.push_back(std::move(rigidity));
  }
  if (!report.g_exact) {
    // Successive differences: the coarse profile against the spline of the next finer one.
    for (std::size_t k = 0; k + 1 < profiles.size(); ++k) {
      const CubicSpline finer(profiles[k + 1].s, profiles[k + 1].g);
      double d = 0.0;
      for (std::size_t i = 0; i < profiles[k].s.size(); ++i)
        d = std::max(d, std::abs(profiles[k].g[i] - finer(profiles[k].s[i])) / std::abs(finer(profiles[k].s[i])));
      report.rows[k].g_defect = d;
    }
    report.rows.back().g_defect = std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<double> g, p, q;
  for (const auto& row : report.rows) {
    g.push_back(row.g_defect);
    p.push_back(row.p_defect);
    q.push_back(row.flux_defect);
  }
  report.order_g = observed_order(meshes, g);
  report.order_p = observed_order(meshes, p);
  report.order_flux = observed_order(meshes, q);
  report.non_monotone = is_non_monotone(g) || is_non_monotone(p) || is_non_monotone(q);
  if (report.non_monotone) report.warnings.push_back("non-monotone defect sequence under refinement");

  {
    auto out = open_output(dir / "convergence.csv");
    out.print("mesh,G_defect,p_route_defect,v3_flux_defect\n");
    for (const auto& row : report.rows)
      out.print("{},{:.17g},{:.17g},{:.17g}\n", row.mesh, row.g_defect, row.p_defect, row.flux_defect);
  }
  json j = {{"command", "converge"},
            {"meshes", meshes},
            {"g_reference", report.g_exact ? "closed form" : "next finer mesh"},
            {"order_G", number(report.order_g)},
            {"order_p_route", number(report.order_p)},
            {"order_v3_flux", number(report.order_flux)},
            {"non_monotone", report.non_monotone},
            {"warnings", report.warnings}};
  write_json(j, dir / "report.json");
  return report;
}

PerturbationReport cmd_compare_perturbation(const RunConfig& config, int threads) {
  const fs::path dir = config.output_directory;
  prepare_directory(dir);
  PerturbationStudy study;
  study.geometry = [&config](double h, int n_theta) { return config.build_geometry(h, config.n_s, n_theta); };
  study.h_values = config.h_values;
  study.n_theta = config.n_theta;
  study.n_rho = config.n_rho;
  study.inlet_flux = config.flux;
  study.outlet_pressure = config.outlet_pressure;
  study.threads = threads;
  const PerturbationReport report = compare_full_vs_perturbative(study);

  {
    auto out = open_output(dir / "perturbation.csv");
    out.print("h,psi_defect,G_defect,p_defect,v3_defect,G1_ratio\n");
    for (const auto& row : report.rows)
      out.print("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.h, row.psi, row.g, row.p, row.v,
                row.g1_ratio);
  }
  {
    auto out = open_output(dir / "perturbation_slopes.csv");
    out.print("quantity,slope\n");
    out.print("psi,{:.17g}\nG,{:.17g}\np,{:.17g}\nv3,{:.17g}\n", report.slope_psi, report.slope_g, report.slope_p,
              report.slope_v);
  }
  json j = {{"command", "compare-perturbation"},
            {"h_values", config.h_values},
            {"slope_psi", number(report.slope_psi)},
            {"slope_G", number(report.slope_g)},
            {"slope_p", number(report.slope_p)},
            {"slope_v3", number(report.slope_v)},
            {"max_G1_ratio", report.max_g1_ratio},
            {"n_theta", report.n_theta},
            {"n_rho", report.n_rho},
            {"refinements", report.refinements},
            {"refinement_converged", report.refinement_converged}};
  write_json(j, dir / "report.json");
  return report;
}

}  // namespace tubeflow
