#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "tubeflow/geometry.hpp"

namespace tubeflow {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Whether an operator carries the scale factor beta or is the plain (beta == 1) version.
enum class Weighting { scale_factor, unit };

/// Components of an in-plane vector field along (e1, e2) at every node.
struct VectorField2 {
  Vector first;
  Vector second;
};

/// Structured polar discretization of one cross-section.
///
/// Reference nodes (rho_k, theta_j) with rho_k = k / n_rho and theta_j = 2 pi j / n_theta
/// are mapped to eta = rho R(theta, s). Nodal vectors have (n_rho + 1) * n_theta entries,
/// node (k, j) at k * n_theta + j; the n_theta copies at k = 0 all describe the pole and
/// carry the same value. In-plane Cartesian components refer to E1 = e1(0, s), E2 = e2(0, s),
/// so that e1(theta) = cos(theta) E1 + sin(theta) E2.
class SectionMesh {
 public:
  SectionMesh(SectionData data, int n_rho);
  static SectionMesh build(const PipeGeometry& geometry, int station, int n_rho);

  const SectionData& data() const { return data_; }
  int station() const { return data_.station; }
  double s() const { return data_.s; }
  int n_rho() const { return n_rho_; }
  int n_theta() const { return n_theta_; }
  int nodes() const { return (n_rho_ + 1) * n_theta_; }
  int index(int k, int j) const { return k * n_theta_ + j; }
  double d_rho() const { return 1.0 / n_rho_; }
  double d_theta() const { return 2.0 * pi / n_theta_; }
  double rho(int k) const { return static_cast<double>(k) / n_rho_; }
  double theta(int j) const { return data_.theta(j); }
  double radius(int j) const { return data_.radius[j].value; }
  double eta(int k, int j) const { return rho(k) * radius(j); }
  /// Cartesian section coordinates (y1, y2) = eta (cos theta, sin theta).
  Vec2 point(int k, int j) const;

  const Vector& beta() const { return beta_; }
  const Vector& beta_ds() const { return beta_ds_; }
  const Vector& beta_dss() const { return beta_dss_; }
  const Vector& coefficient(Weighting w) const { return w == Weighting::unit ? ones_ : beta_; }

  /// Trapezoid weights of the area element (zero at the pole, halved on the boundary).
  const Vector& weights() const { return weights_; }
  /// Control-volume areas of the dual cells (pole disk, interior cells, boundary half cells).
  const Vector& cell_areas() const { return cell_areas_; }

  double integrate(const Vector& f, Weighting w = Weighting::unit) const;
  double area() const { return weights_.sum(); }

  /// Reference radial derivative d/drho at fixed theta.
  const SparseMatrix& d_rho_operator() const { return d_rho_; }
  /// Cartesian components of the physical section gradient.
  const SparseMatrix& grad_x() const { return grad_x_; }
  const SparseMatrix& grad_y() const { return grad_y_; }

  VectorField2 gradient(const Vector& f) const;
  /// Section divergence of a field given by Cartesian components.
  Vector divergence(const Vector& wx, const Vector& wy) const;
  Vector divergence(const VectorField2& w) const;

  std::pair<Vector, Vector> to_cartesian(const VectorField2& w) const;
  VectorField2 to_polar(const Vector& wx, const Vector& wy) const;

  /// Nodal samples of f(eta, theta).
  Vector sample(const std::function<double(double, double)>& f) const;
  /// Nodal samples of f(y1, y2) in Cartesian section coordinates.
  Vector sample_cartesian(const std::function<double(double, double)>& f) const;

  /// Replaces the pole copies by their mean.
  void unify_pole(Vector& f) const;

 private:
  void build_operators();

  SectionData data_;
  int n_rho_;
  int n_theta_;
  Vector beta_, beta_ds_, beta_dss_, ones_;
  Vector weights_, cell_areas_;
  SparseMatrix d_rho_, grad_x_, grad_y_;
};

/// Index map from nodes to unknowns: one unknown for the pole and one per ring node,
/// with the outer ring either eliminated (Dirichlet) or kept.
class DofMap {
 public:
  DofMap(const SectionMesh& mesh, bool include_boundary);
  int size() const { return size_; }
  /// Unknown index of node (k, j), or -1 for an eliminated boundary node.
  int operator()(int k, int j) const;
  bool includes_boundary() const { return include_boundary_; }

  Vector restrict(const Vector& nodal) const;
  /// Nodal vector from unknowns; eliminated nodes are set to zero.
  Vector prolong(const Vector& dofs) const;

 private:
  int n_rho_;
  int n_theta_;
  bool include_boundary_;
  int size_;
};

/// Symmetric operator K with u^T K u the discrete energy sum of a |grad' u|^2 over the section,
/// where a is the nodal coefficient. Each cell contributes one-sided edge differences through its
/// four corners with the coefficient and metric evaluated at the corner, so K is symmetric and
/// positive semi-definite for a > 0 and also handles the cross terms of a theta-dependent radius.
SparseMatrix assemble_energy_operator(const SectionMesh& mesh, const Vector& coefficient, const DofMap& dofs);

/// Derivative in s at fixed (eta, theta) from values on the reference grids of consecutive
/// stations: centered differences inside, second-order one-sided at the ends, then the
/// moving-boundary correction -(rho dR/ds / R) d/drho. Needs at least three stations.
std::vector<Vector> s_derivative_fixed_eta(const std::vector<SectionMesh>& meshes, const std::vector<Vector>& fields,
                                           double ds);

/// Plain reference-grid s-derivative (same stencils, no moving-boundary correction).
std::vector<Vector> s_derivative_reference(const std::vector<Vector>& fields, double ds);

}  // namespace tubeflow
