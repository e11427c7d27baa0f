#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tubeflow/prandtl.hpp"
#include "tubeflow/reynolds.hpp"

namespace tubeflow {

/// How the right-hand side of the first-order Prandtl correction is discretized.
enum class Psi1Source {
  /// 2 eta (c'' . e1) - c'' . grad' psi0 evaluated pointwise with the section gradient.
  pointwise,
  /// Minus the h-derivative of the discrete weighted operator applied to psi0; the same
  /// continuous right-hand side, but the discrete psi0 + h psi1 is then the exact first-order
  /// expansion of the discrete psi in h.
  operator_derivative,
};

/// -Laplacian(psi0) = 2 with psi0 = 0 on the boundary; the Prandtl kernel with beta = 1.
Vector solve_psi0(const SectionMesh& mesh);

/// -Laplacian(psi1) = 2 eta (c'' . e1) - c'' . grad' psi0 with psi1 = 0 on the boundary.
Vector solve_psi1(const SectionMesh& mesh, const Vector& psi0, Psi1Source source = Psi1Source::pointwise);

struct PerturbationPressure {
  std::vector<double> q0, dq0;
  std::vector<double> q1, dq1;
};

/// q0 = p_out + 4 F0 integral_s^1 1/G0,  q1 = -4 F0 integral_s^1 G1 / G0^2.
PerturbationPressure solve_q01(std::span<const double> s, std::span<const double> g0, std::span<const double> g1,
                               double inlet_flux, double outlet_pressure);

/// Per-station perturbation fields of one geometry.
struct PerturbationSolution {
  std::vector<Vector> psi0, psi1;
  std::vector<double> g0, g1;
  PerturbationPressure pressure;
};

PerturbationSolution solve_perturbation(const std::vector<SectionMesh>& meshes, std::span<const double> s,
                                        double inlet_flux, double outlet_pressure, int threads = 1,
                                        Psi1Source source = Psi1Source::pointwise);

struct PerturbationRow {
  double h = 0.0;
  double psi = 0.0;  ///< max |psi - psi0 - h psi1|
  double g = 0.0;    ///< max |G - G0 - h G1|
  double p = 0.0;    ///< max |p0 - q0 - h q1|
  double v = 0.0;    ///< max |v3 - u3^1 - h u3^2|
  double g1_ratio = 0.0;  ///< max |G1| / G0
};

struct PerturbationStudy {
  /// Geometry of the family member with slenderness h and n_theta section angles.
  std::function<PipeGeometry(double h, int n_theta)> geometry;
  std::vector<double> h_values;
  int n_theta = 32;
  int n_rho = 32;
  int max_refinements = 2;
  /// Refinement stops when the smallest-h defects change by less than this fraction.
  double refinement_tolerance = 0.05;
  double inlet_flux = 1.0;
  double outlet_pressure = 0.0;
  int threads = 1;
  Psi1Source source = Psi1Source::pointwise;
};

struct PerturbationReport {
  std::vector<PerturbationRow> rows;
  double slope_psi = 0.0, slope_g = 0.0, slope_p = 0.0, slope_v = 0.0;
  double max_g1_ratio = 0.0;
  int n_theta = 0;
  int n_rho = 0;
  int refinements = 0;
  bool refinement_converged = false;
};

/// Full versus two-term perturbative solution over the h-family, with log-log slopes of every
/// defect. Slopes of identically vanishing defects are reported as NaN.
PerturbationReport compare_full_vs_perturbative(const PerturbationStudy& study);

}  // namespace tubeflow
