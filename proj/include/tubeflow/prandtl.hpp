#pragma once

#include <memory>
#include <vector>

#include "tubeflow/section.hpp"

namespace tubeflow {

/// Solver for a sparse symmetric positive-definite system: sparse LDL^T up to
/// `direct_limit` unknowns, Jacobi-preconditioned conjugate gradients above.
class SpdSolver {
 public:
  static constexpr int direct_limit = 10000;
  static constexpr double tolerance = 1e-10;

  explicit SpdSolver(SparseMatrix matrix, std::string module = "prandtl", int station = -1);
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  /// Throws NumericalError when the factorization or the iteration fails.
  Vector solve(const Vector& rhs) const;
  const SparseMatrix& matrix() const;
  bool direct() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// -div'(a grad' u) = f with u = 0 on the section boundary, a = beta or 1.
/// The right-hand side is integrated over the dual cells, so the discrete system is
/// K u = |cell| f with K from assemble_energy_operator. The mesh must outlive the solver.
class EllipticSolver {
 public:
  EllipticSolver(const SectionMesh& mesh, Weighting weighting);

  /// Nodal solution for nodal data f.
  Vector solve(const Vector& f) const;
  /// Solution for a right-hand side already given per unknown (integrated load vector).
  Vector solve_load(const Vector& load) const;
  /// Load vector |cell| f per unknown.
  Vector load(const Vector& f) const;
  /// Relative algebraic residual |K u - b| / |b| of a nodal solution.
  double residual(const Vector& u, const Vector& f) const;

  const DofMap& dofs() const { return dofs_; }
  const SparseMatrix& matrix() const { return solver_.matrix(); }

 private:
  const SectionMesh* mesh_;
  DofMap dofs_;
  SpdSolver solver_;
};

struct Rigidity {
  double bulk = 0.0;    ///< 2 * integral of psi
  double energy = 0.0;  ///< integral of a |grad' psi|^2
};

struct PrandtlSolution {
  int station = 0;
  Weighting weighting = Weighting::scale_factor;
  Vector psi;
  double g_bulk = 0.0;
  double g_energy = 0.0;
  double residual = 0.0;

  double energy_defect() const { return std::abs(g_bulk - g_energy) / g_bulk; }
};

Rigidity rigidity(const SectionMesh& mesh, const Vector& psi, Weighting weighting = Weighting::scale_factor);

/// Generalized Prandtl function: -div'(beta grad' psi) = 2, psi = 0 on the boundary.
PrandtlSolution solve_prandtl(const SectionMesh& mesh, Weighting weighting = Weighting::scale_factor);

/// Same kernel with a general nodal right-hand side.
Vector solve_poisson(const SectionMesh& mesh, const Vector& f, Weighting weighting = Weighting::scale_factor);

double l2_norm(const SectionMesh& mesh, const Vector& f);

/// G(s_i) with the per-station meshes and Prandtl solutions.
struct RigidityProfile {
  std::vector<double> s;
  std::vector<double> g;  ///< G_bulk, the value used downstream
  std::vector<double> g_energy;
  std::vector<double> residual;
  std::vector<SectionMesh> meshes;
  std::vector<PrandtlSolution> solutions;

  double ds() const { return s[1] - s[0]; }
  double min() const;
  double max() const;
  double max_energy_defect() const;
};

/// Solves every station of the geometry; stations are distributed over `threads` workers.
RigidityProfile rigidity_profile(const PipeGeometry& geometry, int n_rho, int threads = 1,
                                 Weighting weighting = Weighting::scale_factor);

/// Per-station s-derivatives of psi at fixed (eta, theta) and of G.
struct PrandtlSDerivatives {
  std::vector<Vector> dpsi;
  std::vector<double> dg;   ///< 2 * integral of dpsi, equal to dG/ds since psi vanishes on the boundary
  std::vector<double> d2g;  ///< finite difference of dg
};

PrandtlSDerivatives prandtl_s_derivatives(const RigidityProfile& profile);

}  // namespace tubeflow
