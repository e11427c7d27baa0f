#include "tubeflow/transverse.hpp"

#include <optional>

#include <Eigen/SparseLU>
#include <fmt/core.h>

namespace tubeflow {

namespace {

using Triplet = Eigen::Triplet<double>;

/// Nodes -> unknowns, summing the pole copies (turns nodal cell integrals into unknown loads).
SparseMatrix gather(const SectionMesh& mesh, const DofMap& dofs) {
  std::vector<Triplet> t;
  for (int k = 0; k <= mesh.n_rho(); ++k)
    for (int j = 0; j < mesh.n_theta(); ++j)
      if (const int d = dofs(k, j); d >= 0) t.emplace_back(d, mesh.index(k, j), 1.0);
  SparseMatrix m(dofs.size(), mesh.nodes());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

/// Unknowns -> nodes; eliminated boundary nodes get zero.
SparseMatrix scatter(const SectionMesh& mesh, const DofMap& dofs) {
  std::vector<Triplet> t;
  for (int k = 0; k <= mesh.n_rho(); ++k)
    for (int j = 0; j < mesh.n_theta(); ++j)
      if (const int d = dofs(k, j); d >= 0) t.emplace_back(mesh.index(k, j), d, 1.0);
  SparseMatrix m(mesh.nodes(), dofs.size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix diagonal(const Vector& v) {
  SparseMatrix m(v.size(), v.size());
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < v.size(); ++i) t.emplace_back(i, i, v[i]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void append_block(std::vector<Triplet>& t, const SparseMatrix& block, int row0, int col0, double scale = 1.0) {
  for (int c = 0; c < block.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(block, c); it; ++it)
      t.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
}

double weighted_norm(const SectionMesh& mesh, const Vector& f) {
  return std::sqrt(mesh.integrate(f.array().square().matrix()));
}

}  // namespace

TransverseSolution TransverseSolution::zero(const SectionMesh& mesh) {
  TransverseSolution sol;
  sol.station = mesh.station();
  sol.vx = Vector::Zero(mesh.nodes());
  sol.vy = Vector::Zero(mesh.nodes());
  sol.p = Vector::Zero(mesh.nodes());
  return sol;
}

TransverseSolution solve_modified_stokes(const SectionMesh& mesh, const StokesData& data,
                                         const StokesOptions& options) {
  const DofMap vel(mesh, false), pres(mesh, true);
  const int nv = vel.size(), np = pres.size();
  const Vector& beta = mesh.beta();
  const Vector& area = mesh.cell_areas();

  const SparseMatrix gv = gather(mesh, vel), gp = gather(mesh, pres);
  const SparseMatrix sv = scatter(mesh, vel), sp = scatter(mesh, pres);
  const SparseMatrix area_beta = diagonal(area.cwiseProduct(beta));
  const SparseMatrix area_diag = diagonal(area);
  const SparseMatrix beta_diag = diagonal(beta);

  const SparseMatrix K = assemble_energy_operator(mesh, beta, vel);
  const SparseMatrix bx = gv * area_beta * mesh.grad_x() * sp;
  const SparseMatrix by = gv * area_beta * mesh.grad_y() * sp;
  const SparseMatrix dx = gp * area_diag * mesh.grad_x() * beta_diag * sv;
  const SparseMatrix dy = gp * area_diag * mesh.grad_y() * beta_diag * sv;
  double mean_radius = 0.0;
  for (int j = 0; j < mesh.n_theta(); ++j) mean_radius += mesh.radius(j) / mesh.n_theta();
  const double delta = options.filter * std::pow(mesh.d_rho() * mean_radius, 2);
  const SparseMatrix C = delta * assemble_energy_operator(mesh, beta, pres) + options.penalty * (gp * area_diag * sp);

  std::vector<Triplet> t;
  append_block(t, K, 0, 0);
  append_block(t, K, nv, nv);
  append_block(t, bx, 0, 2 * nv);
  append_block(t, by, nv, 2 * nv);
  append_block(t, dx, 2 * nv, 0, -1.0);
  append_block(t, dy, 2 * nv, nv, -1.0);
  append_block(t, C, 2 * nv, 2 * nv, -1.0);
  const int n = 2 * nv + np;
  SparseMatrix system(n, n);
  system.setFromTriplets(t.begin(), t.end());

  Vector rhs(n);
  rhs.segment(0, nv) = gv * area_beta * data.fx;
  rhs.segment(nv, nv) = gv * area_beta * data.fy;
  rhs.segment(2 * nv, np) = gp * (area.cwiseProduct(data.g));

  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success)
    throw NumericalError("transverse", "sparse LU factorization of the Stokes system failed", mesh.station());
  const Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw NumericalError("transverse", "Stokes solve failed", mesh.station());

  TransverseSolution sol;
  sol.station = mesh.station();
  sol.vx = sv * x.segment(0, nv);
  sol.vy = sv * x.segment(nv, nv);
  sol.p = sp * x.segment(2 * nv, np);
  sol.p.array() -= mesh.integrate(sol.p) / mesh.area();

  const Vector residual =
      -mesh.divergence(beta.cwiseProduct(sol.vx), beta.cwiseProduct(sol.vy)) - data.g;
  const double g_norm = weighted_norm(mesh, data.g);
  sol.divergence_residual = weighted_norm(mesh, residual) / (g_norm > 0.0 ? g_norm : 1.0);
  return sol;
}

CompatibilityCheck check_compatibility(const SectionMesh& mesh, const Vector& g) {
  CompatibilityCheck c;
  c.integral = mesh.integrate(g);
  c.norm = weighted_norm(mesh, g);
  c.holds = std::abs(c.integral) <= 1e-6 * c.norm + 1e-14;
  return c;
}

StokesData transverse_data(const SectionMesh& mesh, const Vector& v3, const Vector& dv3) {
  const SectionData& d = mesh.data();
  const double h = d.slenderness;
  const Vector& beta = mesh.beta();
  const Vector& dbeta = mesh.beta_ds();
  StokesData out;
  out.fx.resize(mesh.nodes());
  out.fy.resize(mesh.nodes());
  for (int i = 0; i < mesh.nodes(); ++i) {
    const double b = beta[i];
    const double a = h * v3[i] / (b * b);
    const double c = h * (2.0 * b * dv3[i] - v3[i] * dbeta[i]) / (b * b * b);
    out.fx[i] = a * d.third.x() + c * d.curvature.x();
    out.fy[i] = a * d.third.y() + c * d.curvature.y();
  }
  out.g = dv3;
  return out;
}

TransverseSolution solve_transverse(const SectionMesh& mesh, const Vector& v3, const Vector& dv3,
                                    const StokesOptions& options) {
  const CompatibilityCheck compat = check_compatibility(mesh, dv3);
  if (!compat.holds)
    throw NumericalError("transverse",
                         fmt::format("incompatible data: integral of ds v3 is {:.3e} against norm {:.3e}",
                                     compat.integral, compat.norm),
                         mesh.station());
  // Data at round-off level relative to v3 (straight pipe of constant section) give exactly zero.
  const StokesData data = transverse_data(mesh, v3, dv3);
  const double noise = 1e-12 * v3.cwiseAbs().maxCoeff();
  const bool vanishing = data.fx.cwiseAbs().maxCoeff() <= noise && data.fy.cwiseAbs().maxCoeff() <= noise &&
                         data.g.cwiseAbs().maxCoeff() <= noise;
  TransverseSolution sol = vanishing ? TransverseSolution::zero(mesh) : solve_modified_stokes(mesh, data, options);
  sol.compatibility_residual = std::abs(compat.integral);
  return sol;
}

LongitudinalProfile longitudinal_profile(const RigidityProfile& rigidity, const PrandtlSDerivatives& derivatives,
                                         const PressureProfile& pressure) {
  LongitudinalProfile out;
  for (std::size_t i = 0; i < rigidity.solutions.size(); ++i) {
    const Vector& psi = rigidity.solutions[i].psi;
    out.v3.push_back(longitudinal_velocity(psi, pressure.dp[i]));
    out.dv3.push_back(-0.5 * (derivatives.dpsi[i] * pressure.dp[i] + psi * pressure.d2p[i]));
  }
  return out;
}

std::vector<TransverseSolution> solve_transverse_profile(const RigidityProfile& rigidity,
                                                         const LongitudinalProfile& longitudinal, int threads,
                                                         const StokesOptions& options) {
  const int n = static_cast<int>(rigidity.meshes.size());
  std::vector<std::optional<TransverseSolution>> out(n);
  parallel_for(n, threads, [&](int i) {
    out[i] = solve_transverse(rigidity.meshes[i], longitudinal.v3[i], longitudinal.dv3[i], options);
  });
  std::vector<TransverseSolution> result;
  for (auto& sol : out) result.push_back(std::move(*sol));
  return result;
}

TransverseDerivative transverse_s_derivative(const std::vector<SectionMesh>& meshes,
                                             const std::vector<TransverseSolution>& solutions, double ds) {
  if (solutions.size() < 3) throw NumericalError("transverse", "s-derivative needs at least 3 stations");
  std::vector<Vector> vx, vy;
  for (const auto& sol : solutions) {
    vx.push_back(sol.vx);
    vy.push_back(sol.vy);
  }
  return {s_derivative_fixed_eta(meshes, vx, ds), s_derivative_fixed_eta(meshes, vy, ds)};
}

DivergenceIdentityResidual check_divergence_identity(const SectionMesh& mesh, const DivergenceIdentityInput& in) {
  const Vector& beta = mesh.beta();
  const Vector& dbeta = mesh.beta_ds();
  const Vector div_du = mesh.divergence(dbeta.cwiseProduct(in.ux), dbeta.cwiseProduct(in.uy));
  const Vector div_u = mesh.divergence(beta.cwiseProduct(in.ux), beta.cwiseProduct(in.uy));
  const Vector integrand =
      beta.cwiseProduct(in.dg) + div_du - dbeta.cwiseProduct(div_u).cwiseQuotient(beta);
  DivergenceIdentityResidual r;
  r.area = mesh.integrate(integrand);
  const int k = mesh.n_rho();
  for (int j = 0; j < mesh.n_theta(); ++j) {
    const int i = mesh.index(k, j);
    const double c = std::cos(mesh.theta(j)), sn = std::sin(mesh.theta(j));
    const double d1 = c * in.dux[i] + sn * in.duy[i];
    const double d2 = -sn * in.dux[i] + c * in.duy[i];
    const RadiusJet& rj = mesh.data().radius[j];
    r.boundary += mesh.d_theta() * beta[i] * (d1 * rj.value - d2 * rj.dtheta);
  }
  return r;
}

}  // namespace tubeflow
