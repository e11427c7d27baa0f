#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tubeflow/config.hpp"
#include "tubeflow/fields.hpp"
#include "tubeflow/perturbation.hpp"

namespace tubeflow {

struct SolveResult {
  GeometryReport geometry;
  RigidityProfile rigidity;
  PressureProfile pressure;     ///< closed-form route, used downstream
  PressureProfile pressure_fd;  ///< conservative finite-difference route
  std::vector<TransverseSolution> transverse;  ///< empty when the transverse toggle is off
  FlowField field;
  double route_defect = 0.0;     ///< max |p closed - p fd|
  double flux_law_defect = 0.0;  ///< max relative |integral of v3 - F0|
  double max_divergence_residual = 0.0;
  PressureBounds bounds;
};

/// Full pipeline without any file output. Certifies the geometry first so an invalid
/// scale factor is reported with its station before any section is solved.
SolveResult solve_pipeline(const RunConfig& config, int threads);

/// Runs solve_pipeline and writes rigidity.csv, pressure.csv, field.csv / field.vtk and
/// report.json into the configured output directory. Only report.json carries timing.
SolveResult cmd_solve(const RunConfig& config, int threads);

struct ConvergenceRow {
  int mesh = 0;            ///< n_s = n_theta = n_rho
  double g_defect = 0.0;   ///< against the closed form, or against the next finer mesh
  double p_defect = 0.0;   ///< max |p closed - p fd|
  double flux_defect = 0.0;  ///< max relative section-flux defect of v3
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool g_exact = false;  ///< g_defect measured against a closed form
  double order_g = 0.0, order_p = 0.0, order_flux = 0.0;
  bool non_monotone = false;  ///< some defect sequence fails to decrease under refinement
  std::vector<std::string> warnings;
};

/// Fitted log-log order of defects against mesh size. Defects at round-off level are left
/// out; NaN when fewer than two remain.
double observed_order(const std::vector<int>& meshes, const std::vector<double>& defects);

/// True when some defect above round-off level fails to decrease along the sequence.
bool is_non_monotone(const std::vector<double>& defects);

/// Mesh refinement over `config.meshes`; writes convergence.csv and report.json.
ConvergenceReport cmd_converge(const RunConfig& config, int threads);

/// Perturbation comparison over `config.h_values`; writes perturbation.csv,
/// perturbation_slopes.csv and report.json.
PerturbationReport cmd_compare_perturbation(const RunConfig& config, int threads);

}  // namespace tubeflow
