#include "tubeflow/perturbation.hpp"

#include <limits>
#include <optional>

#include <fmt/core.h>

#include "tubeflow/spline.hpp"

namespace tubeflow {

Vector solve_psi0(const SectionMesh& mesh) { return solve_prandtl(mesh, Weighting::unit).psi; }

Vector solve_psi1(const SectionMesh& mesh, const Vector& psi0, Psi1Source source) {
  const EllipticSolver solver(mesh, Weighting::unit);
  const SectionData& d = mesh.data();
  if (source == Psi1Source::operator_derivative) {
    // beta = 1 - h eta (c'' . e1) is affine in h, so the h-derivative of the operator is the
    // energy operator with coefficient -eta (c'' . e1).
    Vector coefficient(mesh.nodes());
    for (int k = 0; k <= mesh.n_rho(); ++k)
      for (int j = 0; j < mesh.n_theta(); ++j) coefficient[mesh.index(k, j)] = -mesh.eta(k, j) * d.curv[j];
    const SparseMatrix k1 = assemble_energy_operator(mesh, coefficient, solver.dofs());
    return solver.solve_load(-(k1 * solver.dofs().restrict(psi0)));
  }
  const Vector gx = mesh.grad_x() * psi0;
  const Vector gy = mesh.grad_y() * psi0;
  Vector f(mesh.nodes());
  for (int k = 0; k <= mesh.n_rho(); ++k)
    for (int j = 0; j < mesh.n_theta(); ++j) {
      const int i = mesh.index(k, j);
      f[i] = 2.0 * mesh.eta(k, j) * d.curv[j] - (d.curvature.x() * gx[i] + d.curvature.y() * gy[i]);
    }
  return solver.solve(f);
}

PerturbationPressure solve_q01(std::span<const double> s, std::span<const double> g0, std::span<const double> g1,
                               double inlet_flux, double outlet_pressure) {
  const std::size_t n = s.size();
  if (g0.size() != n || g1.size() != n) throw NumericalError("perturbation", "profile lengths differ");
  std::vector<double> inv(n), ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g0[i] > 0.0))
      throw NumericalError("perturbation", fmt::format("G0={} is not positive", g0[i]), static_cast<int>(i));
    inv[i] = 1.0 / g0[i];
    ratio[i] = g1[i] / (g0[i] * g0[i]);
  }
  const CubicSpline inv_spline(s, inv), ratio_spline(s, ratio);
  const double f4 = 4.0 * inlet_flux;
  PerturbationPressure out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    out.q0.push_back(outlet_pressure + (last ? 0.0 : f4 * inv_spline.integral(s[i], s.back())));
    out.q1.push_back(last ? 0.0 : -f4 * ratio_spline.integral(s[i], s.back()));
    out.dq0.push_back(-f4 * inv[i]);
    out.dq1.push_back(f4 * ratio[i]);
  }
  return out;
}

PerturbationSolution solve_perturbation(const std::vector<SectionMesh>& meshes, std::span<const double> s,
                                        double inlet_flux, double outlet_pressure, int threads, Psi1Source source) {
  const int n = static_cast<int>(meshes.size());
  PerturbationSolution out;
  out.psi0.resize(n);
  out.psi1.resize(n);
  out.g0.resize(n);
  out.g1.resize(n);
  parallel_for(n, threads, [&](int i) {
    out.psi0[i] = solve_psi0(meshes[i]);
    out.psi1[i] = solve_psi1(meshes[i], out.psi0[i], source);
    out.g0[i] = 2.0 * meshes[i].integrate(out.psi0[i]);
    out.g1[i] = 2.0 * meshes[i].integrate(out.psi1[i]);
  });
  out.pressure = solve_q01(s, out.g0, out.g1, inlet_flux, outlet_pressure);
  return out;
}

namespace {

PerturbationRow compare_member(const PerturbationStudy& study, double h, int n_theta, int n_rho) {
  const PipeGeometry geometry = study.geometry(h, n_theta);
  geometry.certify();
  const RigidityProfile full = rigidity_profile(geometry, n_rho, study.threads);
  const PressureProfile p0 = solve_reynolds(full.s, full.g, study.inlet_flux, study.outlet_pressure);
  const PerturbationSolution pert =
      solve_perturbation(full.meshes, full.s, study.inlet_flux, study.outlet_pressure, study.threads, study.source);

  PerturbationRow row;
  row.h = h;
  for (std::size_t i = 0; i < full.s.size(); ++i) {
    const Vector& psi = full.solutions[i].psi;
    const Vector composite = pert.psi0[i] + h * pert.psi1[i];
    row.psi = std::max(row.psi, (psi - composite).cwiseAbs().maxCoeff());
    row.g = std::max(row.g, std::abs(full.g[i] - pert.g0[i] - h * pert.g1[i]));
    row.p = std::max(row.p, std::abs(p0.p[i] - pert.pressure.q0[i] - h * pert.pressure.q1[i]));
    const Vector v3 = longitudinal_velocity(psi, p0.dp[i]);
    const Vector u1 = -0.5 * pert.psi0[i] * pert.pressure.dq0[i];
    const Vector u2 = -0.5 * (pert.psi1[i] * pert.pressure.dq0[i] + pert.psi0[i] * pert.pressure.dq1[i]);
    row.v = std::max(row.v, (v3 - u1 - h * u2).cwiseAbs().maxCoeff());
    row.g1_ratio = std::max(row.g1_ratio, std::abs(pert.g1[i]) / pert.g0[i]);
  }
  return row;
}

double slope_or_nan(const std::vector<PerturbationRow>& rows, double PerturbationRow::*field) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (!(r.*field > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    x.push_back(r.h);
    y.push_back(r.*field);
  }
  return log_log_slope(x, y);
}

double relative_change(const PerturbationRow& a, const PerturbationRow& b) {
  double worst = 0.0;
  for (auto field : {&PerturbationRow::psi, &PerturbationRow::g, &PerturbationRow::p, &PerturbationRow::v}) {
    const double scale = std::max(std::abs(b.*field), 1e-300);
    if (b.*field == 0.0 && a.*field == 0.0) continue;
    worst = std::max(worst, std::abs(a.*field - b.*field) / scale);
  }
  return worst;
}

}  // namespace

PerturbationReport compare_full_vs_perturbative(const PerturbationStudy& study) {
  if (study.h_values.size() < 3) throw ConfigError("perturbation study needs at least 3 slenderness values");
  if (!study.geometry) throw ConfigError("perturbation study has no geometry family");
  std::vector<double> hs = study.h_values;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  const double smallest = hs.back();

  PerturbationReport report;
  int n_theta = study.n_theta, n_rho = study.n_rho;
  std::optional<PerturbationRow> previous;
  for (int level = 0;; ++level) {
    const PerturbationRow current = compare_member(study, smallest, n_theta, n_rho);
    report.refinements = level;
    if (previous && relative_change(*previous, current) < study.refinement_tolerance) {
      report.refinement_converged = true;
      break;
    }
    // A vanishing defect cannot be improved by refinement.
    if (current.psi == 0.0 && current.g == 0.0 && current.p == 0.0 && current.v == 0.0) {
      report.refinement_converged = true;
      break;
    }
    if (level >= study.max_refinements) break;
    previous = current;
    n_theta *= 2;
    n_rho *= 2;
  }
  report.n_theta = n_theta;
  report.n_rho = n_rho;
  for (double h : hs) report.rows.push_back(compare_member(study, h, n_theta, n_rho));
  report.slope_psi = slope_or_nan(report.rows, &PerturbationRow::psi);
  report.slope_g = slope_or_nan(report.rows, &PerturbationRow::g);
  report.slope_p = slope_or_nan(report.rows, &PerturbationRow::p);
  report.slope_v = slope_or_nan(report.rows, &PerturbationRow::v);
  for (const auto& r : report.rows) report.max_g1_ratio = std::max(report.max_g1_ratio, r.g1_ratio);
  return report;
}

}  // namespace tubeflow
