#pragma once

#include <functional>

#include "tubeflow/transverse.hpp"

namespace tubeflow {

/// Smooth function of the Cartesian section coordinates (y1, y2) and of s.
using SectionFunction = std::function<double(double y1, double y2, double s)>;

/// Fourth-order central differences of analytic functions; the step is fixed at 1e-3.
double partial_y1(const SectionFunction& f, double y1, double y2, double s);
double partial_y2(const SectionFunction& f, double y1, double y2, double s);
double partial_s(const SectionFunction& f, double y1, double y2, double s);

/// beta = 1 - h (k1(s) y1 + k2(s) y2).
struct LinearScaleFactor {
  double h = 0.0;
  std::function<Vec2(double)> curvature = [](double) { return Vec2(0.0, 0.0); };
  double operator()(double y1, double y2, double s) const {
    const Vec2 k = curvature(s);
    return 1.0 - h * (k.x() * y1 + k.y() * y2);
  }
};

/// Exact Prandtl-type problem -div'(a grad' psi) = f for a prescribed psi.
struct ManufacturedPoisson {
  Vector exact;
  Vector rhs;
};

/// a = beta or 1 depending on `weighting`; psi is sampled at the mesh station s.
ManufacturedPoisson manufactured_poisson(const SectionMesh& mesh, const SectionFunction& psi,
                                         const LinearScaleFactor& beta, Weighting weighting);

struct ManufacturedStokes {
  StokesData data;
  Vector vx, vy, p;  ///< exact fields, p mean-zero on the mesh
};

/// Data of the section Stokes system for prescribed (vx, vy, p); the velocity must vanish
/// on the section boundary.
ManufacturedStokes manufactured_stokes(const SectionMesh& mesh, const SectionFunction& vx, const SectionFunction& vy,
                                       const SectionFunction& p, const LinearScaleFactor& beta);

/// Consistent (u, g) triple with g = -beta^{-1} div'(beta u), sampled with s-derivatives
/// at the mesh station. `broken` adds a non-divergence term to g and dg (negative control).
DivergenceIdentityInput manufactured_divergence_triple(const SectionMesh& mesh, const SectionFunction& ux, const SectionFunction& uy,
                              const LinearScaleFactor& beta, double broken = 0.0);

}  // namespace tubeflow
