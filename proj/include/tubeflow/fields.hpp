#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tubeflow/transverse.hpp"

namespace tubeflow {

/// Smooth end cutoff: 0 on [0, h] and [1 - h, 1], 1 on [2h, 1 - 2h], cubic smoothstep between.
double cutoff(double s, double h);

struct FieldNode {
  double s, theta, rho, eta;
  double x, y, z;
  double v1, v2, v3;  ///< along e1, e2, c'
  double vx, vy, vz;  ///< Cartesian
  double p;
};

/// Composite velocity h^{-1} v3 c' + X(s) v_transverse and pressure h^{-3} p0 on the
/// (s_i, rho_k, theta_j) grid; node (i, k, j) at (i * (n_rho + 1) + k) * n_theta + j.
struct FlowField {
  double slenderness = 0.0;
  int n_s = 0;
  int n_rho = 0;
  int n_theta = 0;
  std::vector<FieldNode> nodes;
  /// Integral of the axial velocity over each physical cross-section, h F0 in theory.
  std::vector<double> flux;

  std::size_t index(int i, int k, int j) const {
    return (static_cast<std::size_t>(i) * (n_rho + 1) + k) * n_theta + j;
  }
};

struct AssemblyOptions {
  bool transverse = true;
  bool cutoff = true;
  int threads = 1;
};

/// `transverse` may be empty, in which case only the axial part is assembled.
FlowField assemble(const PipeGeometry& geometry, const RigidityProfile& rigidity, const PressureProfile& pressure,
                   const std::vector<TransverseSolution>& transverse, const AssemblyOptions& options = {});

struct NormReport {
  double velocity = 0.0;  ///< L2 norm of the velocity over the pipe
  double gradient = 0.0;  ///< L2 norm of its Cartesian gradient
  double pressure = 0.0;  ///< L2 norm of p minus its mean
  /// h |grad v| + |v| + h^2 |p - mean p|
  double combined = 0.0;
};

/// Norms over the pipe with volume element beta dsigma ds in physical cross-section units.
/// With a reference field the norms of the difference are returned. Needs at least 3 stations.
NormReport norms(const FlowField& field, const std::vector<SectionMesh>& meshes, const FlowField* reference = nullptr);

/// Columns s,theta,rho,eta,x,y,z,v1,v2,v3,vx,vy,vz,p with 17 significant digits.
void write_csv(const FlowField& field, const std::filesystem::path& path);
/// Reads a file written by write_csv; grid sizes are recovered from the distinct coordinates.
FlowField read_csv(const std::filesystem::path& path);

/// Legacy ASCII structured grid with point data VELOCITY and PRESSURE; the theta seam is closed.
void write_vtk(const FlowField& field, const std::filesystem::path& path);

}  // namespace tubeflow
