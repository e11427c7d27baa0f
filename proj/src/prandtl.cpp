#include "tubeflow/prandtl.hpp"

#include <optional>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <fmt/core.h>

namespace tubeflow {

struct SpdSolver::Impl {
  SparseMatrix matrix;
  std::string module;
  int station = -1;
  std::optional<Eigen::SimplicialLDLT<SparseMatrix>> ldlt;
  std::optional<Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper>> cg;
};

SpdSolver::SpdSolver(SparseMatrix matrix, std::string module, int station) : impl_(std::make_unique<Impl>()) {
  impl_->matrix = std::move(matrix);
  impl_->module = std::move(module);
  impl_->station = station;
  if (impl_->matrix.rows() <= direct_limit) {
    impl_->ldlt.emplace(impl_->matrix);
    if (impl_->ldlt->info() != Eigen::Success)
      throw NumericalError(impl_->module, "sparse LDL^T factorization failed; operator is not positive definite",
                           station);
    if ((impl_->ldlt->vectorD().array() <= 0.0).any())
      throw NumericalError(impl_->module, "operator is not positive definite", station);
  } else {
    impl_->cg.emplace();
    impl_->cg->setTolerance(tolerance);
    impl_->cg->setMaxIterations(20 * static_cast<int>(impl_->matrix.rows()));
    impl_->cg->compute(impl_->matrix);
  }
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

const SparseMatrix& SpdSolver::matrix() const { return impl_->matrix; }
bool SpdSolver::direct() const { return impl_->ldlt.has_value(); }

Vector SpdSolver::solve(const Vector& rhs) const {
  if (impl_->ldlt) return impl_->ldlt->solve(rhs);
  Vector x = impl_->cg->solve(rhs);
  if (impl_->cg->info() != Eigen::Success)
    throw NumericalError(impl_->module,
                         fmt::format("conjugate gradients stopped after {} iterations at relative residual {:.3e}",
                                     impl_->cg->iterations(), impl_->cg->error()),
                         impl_->station);
  return x;
}

// --- EllipticSolver -----------------------------------------------------------------

EllipticSolver::EllipticSolver(const SectionMesh& mesh, Weighting weighting)
    : mesh_(&mesh),
      dofs_(mesh, false),
      solver_(assemble_energy_operator(mesh, mesh.coefficient(weighting), dofs_), "prandtl", mesh.station()) {}

Vector EllipticSolver::load(const Vector& f) const {
  Vector b = Vector::Zero(dofs_.size());
  const Vector& area = mesh_->cell_areas();
  for (int k = 0; k <= mesh_->n_rho(); ++k)
    for (int j = 0; j < mesh_->n_theta(); ++j) {
      const int d = dofs_(k, j);
      const int i = mesh_->index(k, j);
      if (d >= 0) b[d] += area[i] * f[i];
    }
  return b;
}

Vector EllipticSolver::solve_load(const Vector& b) const { return dofs_.prolong(solver_.solve(b)); }

Vector EllipticSolver::solve(const Vector& f) const { return solve_load(load(f)); }

double EllipticSolver::residual(const Vector& u, const Vector& f) const {
  const Vector b = load(f);
  const double norm = b.norm();
  const Vector r = matrix() * dofs_.restrict(u) - b;
  return norm > 0.0 ? r.norm() / norm : r.norm();
}

// --- Prandtl ------------------------------------------------------------------------

Rigidity rigidity(const SectionMesh& mesh, const Vector& psi, Weighting weighting) {
  const Vector gx = mesh.grad_x() * psi;
  const Vector gy = mesh.grad_y() * psi;
  const Vector density = (gx.array().square() + gy.array().square()).matrix();
  return {2.0 * mesh.integrate(psi), mesh.integrate(density, weighting)};
}

PrandtlSolution solve_prandtl(const SectionMesh& mesh, Weighting weighting) {
  const EllipticSolver solver(mesh, weighting);
  const Vector f = Vector::Constant(mesh.nodes(), 2.0);
  PrandtlSolution sol;
  sol.station = mesh.station();
  sol.weighting = weighting;
  sol.psi = solver.solve(f);
  sol.residual = solver.residual(sol.psi, f);
  const Rigidity g = rigidity(mesh, sol.psi, weighting);
  sol.g_bulk = g.bulk;
  sol.g_energy = g.energy;
  if (!(sol.g_bulk > 0.0))
    throw NumericalError("prandtl", fmt::format("torsional rigidity {} is not positive", sol.g_bulk), mesh.station());
  return sol;
}

Vector solve_poisson(const SectionMesh& mesh, const Vector& f, Weighting weighting) {
  return EllipticSolver(mesh, weighting).solve(f);
}

double l2_norm(const SectionMesh& mesh, const Vector& f) {
  return std::sqrt(mesh.integrate(f.array().square().matrix()));
}

// --- profile ------------------------------------------------------------------------

double RigidityProfile::min() const { return *std::min_element(g.begin(), g.end()); }
double RigidityProfile::max() const { return *std::max_element(g.begin(), g.end()); }

double RigidityProfile::max_energy_defect() const {
  double worst = 0.0;
  for (const auto& sol : solutions) worst = std::max(worst, sol.energy_defect());
  return worst;
}

RigidityProfile rigidity_profile(const PipeGeometry& geometry, int n_rho, int threads, Weighting weighting) {
  const int n = geometry.stations();
  std::vector<std::optional<SectionMesh>> meshes(n);
  std::vector<PrandtlSolution> solutions(n);
  parallel_for(n, threads, [&](int i) {
    meshes[i].emplace(SectionMesh::build(geometry, i, n_rho));
    solutions[i] = solve_prandtl(*meshes[i], weighting);
  });
  RigidityProfile profile;
  for (int i = 0; i < n; ++i) {
    profile.s.push_back(geometry.s(i));
    profile.g.push_back(solutions[i].g_bulk);
    profile.g_energy.push_back(solutions[i].g_energy);
    profile.residual.push_back(solutions[i].residual);
    profile.meshes.push_back(std::move(*meshes[i]));
  }
  profile.solutions = std::move(solutions);
  return profile;
}

PrandtlSDerivatives prandtl_s_derivatives(const RigidityProfile& profile) {
  if (profile.s.size() < 3) throw NumericalError("prandtl", "s-derivatives need at least 3 stations");
  std::vector<Vector> psi;
  for (const auto& sol : profile.solutions) psi.push_back(sol.psi);
  PrandtlSDerivatives out;
  out.dpsi = s_derivative_fixed_eta(profile.meshes, psi, profile.ds());
  std::vector<Vector> dg;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    out.dg.push_back(2.0 * profile.meshes[i].integrate(out.dpsi[i]));
    dg.push_back(Vector::Constant(1, out.dg.back()));
  }
  for (const Vector& v : s_derivative_reference(dg, profile.ds())) out.d2g.push_back(v[0]);
  return out;
}

}  // namespace tubeflow
