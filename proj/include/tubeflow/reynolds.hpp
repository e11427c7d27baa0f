#pragma once

#include <span>
#include <vector>

#include "tubeflow/geometry.hpp"
#include "tubeflow/section.hpp"

namespace tubeflow {

/// Leading-order pressure p0(s) driven by the inlet flux F0 with p0(1) = outlet pressure.
struct PressureProfile {
  std::vector<double> s;
  std::vector<double> p;
  std::vector<double> dp;
  std::vector<double> d2p;
  std::vector<double> d3p;
  /// -G dp/ds / 4 per node (closed form) or per cell face (finite-difference route).
  std::vector<double> flux;
  double inlet_flux = 0.0;
  double outlet_pressure = 0.0;

  /// max |flux - F0|
  double flux_defect() const;
};

/// p0(s) = p_out + 4 F0 * integral_s^1 1/G, with 1/G interpolated by a cubic spline and
/// integrated exactly; dp0 = -4 F0 / G. `dg` and `d2g` (s-derivatives of G) feed the higher
/// pressure derivatives and may be empty, in which case they are taken as zero.
PressureProfile solve_reynolds(std::span<const double> s, std::span<const double> g, double inlet_flux,
                               double outlet_pressure, std::span<const double> dg = {},
                               std::span<const double> d2g = {});

/// Conservative three-point discretization of -(G p')' = 0 with -G p'/4 = F0 at s = 0 and
/// p = p_out at s = 1; face conductivities are arithmetic means. Independent cross-check route.
PressureProfile solve_reynolds_fd(std::span<const double> s, std::span<const double> g, double inlet_flux,
                                  double outlet_pressure);

/// v3 = -psi dp0/ds / 2 at one station.
Vector longitudinal_velocity(const Vector& psi, double dp);

/// Integral of v3 over the section.
double section_flux(const SectionMesh& mesh, const Vector& v3);

struct PressureBounds {
  double max_dp = 0.0;
  double max_d2p = 0.0;
  double max_d3p = 0.0;
  /// max|dp| against 4|F0| / min G
  double dp_bound = 0.0;
  double first_scale = 0.0;   ///< lambda + gamma
  double second_scale = 0.0;  ///< lambda* + gamma* + h^{-1/2} lambda^{3/2} + gamma^2
  double d2p_ratio = 0.0;     ///< max|d2p| / first_scale (0 when the scale vanishes)
  double d3p_ratio = 0.0;     ///< max|d3p| / second_scale
};

PressureBounds pressure_derivative_bounds(const PressureProfile& p, const GeometryReport& report, double min_g);

}  // namespace tubeflow
