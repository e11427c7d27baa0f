#pragma once

#include <vector>

#include "tubeflow/prandtl.hpp"
#include "tubeflow/reynolds.hpp"

namespace tubeflow {

/// Data of the section Stokes system
///   -beta^{-1} div'(beta grad' v) + grad' p = f,   -div'(beta v) = g,   v = 0 on the boundary,
/// with f given by Cartesian components along (E1, E2).
struct StokesData {
  Vector fx;
  Vector fy;
  Vector g;
};

struct StokesOptions {
  /// Pressure regularization: -div'(beta v) - penalty p = g.
  double penalty = 1e-8;
  /// Pressure-Laplacian filter weight, in units of the squared radial node spacing.
  double filter = 0.5;
};

struct TransverseSolution {
  int station = 0;
  Vector vx;  ///< component along E1
  Vector vy;  ///< component along E2
  Vector p;   ///< mean-zero pressure
  /// L2 norm of -div'(beta v) - g relative to the L2 norm of g (absolute when g = 0).
  double divergence_residual = 0.0;
  /// |integral of g| of the data, see check_compatibility.
  double compatibility_residual = 0.0;

  VectorField2 polar(const SectionMesh& mesh) const { return mesh.to_polar(vx, vy); }
  static TransverseSolution zero(const SectionMesh& mesh);
};

/// Collocated finite differences on the section grid; velocity and pressure share the nodes
/// (pressure also on the boundary), the checkerboard mode is filtered by a pressure Laplacian,
/// and the coupled system is solved by sparse LU.
TransverseSolution solve_modified_stokes(const SectionMesh& mesh, const StokesData& data,
                                         const StokesOptions& options = {});

struct CompatibilityCheck {
  double integral = 0.0;  ///< integral of g over the section
  double norm = 0.0;      ///< L2 norm of g
  bool holds = true;      ///< |integral| <= 1e-6 norm + 1e-14
};

CompatibilityCheck check_compatibility(const SectionMesh& mesh, const Vector& g);

/// Right-hand side of the transverse correction at one station from v3 and its s-derivative
/// at fixed (eta, theta): f = h beta^{-2} c'''_section v3 + h beta^{-3} c'' (2 beta dv3 - v3 dbeta), g = dv3.
StokesData transverse_data(const SectionMesh& mesh, const Vector& v3, const Vector& dv3);

/// Checks compatibility of the data, then solves. Throws NumericalError if the data is incompatible.
TransverseSolution solve_transverse(const SectionMesh& mesh, const Vector& v3, const Vector& dv3,
                                    const StokesOptions& options = {});

/// Leading velocity v3 and its s-derivative at fixed eta at every station.
struct LongitudinalProfile {
  std::vector<Vector> v3;
  std::vector<Vector> dv3;
};

LongitudinalProfile longitudinal_profile(const RigidityProfile& rigidity, const PrandtlSDerivatives& derivatives,
                                         const PressureProfile& pressure);

std::vector<TransverseSolution> solve_transverse_profile(const RigidityProfile& rigidity,
                                                         const LongitudinalProfile& longitudinal, int threads = 1,
                                                         const StokesOptions& options = {});

/// Section-projected s-derivative of the transverse velocity (Cartesian components).
struct TransverseDerivative {
  std::vector<Vector> dvx;
  std::vector<Vector> dvy;
};

TransverseDerivative transverse_s_derivative(const std::vector<SectionMesh>& meshes,
                                             const std::vector<TransverseSolution>& solutions, double ds);

/// A triple (u, g, h) of the section Stokes system with s-derivatives at fixed (eta, theta);
/// the boundary term uses du on the outer ring, which equals dh/ds - (dR/ds) du/deta there.
struct DivergenceIdentityInput {
  Vector ux, uy;    ///< u, Cartesian components
  Vector dux, duy;  ///< s-derivative of u at fixed (eta, theta)
  Vector g;         ///< divergence data, -beta^{-1} div'(beta u) for a consistent triple
  Vector dg;        ///< s-derivative of g at fixed (eta, theta)
};

struct DivergenceIdentityResidual {
  double area = 0.0;
  double boundary = 0.0;
  double sum() const { return area + boundary; }
};

/// Area integral of beta dg + div'(dbeta u) - beta^{-1} dbeta div'(beta u) plus the boundary
/// integral of beta du . (R e1 - dR/dtheta e2) dtheta. Vanishes for consistent triples.
DivergenceIdentityResidual check_divergence_identity(const SectionMesh& mesh, const DivergenceIdentityInput& input);

}  // namespace tubeflow
