#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tubeflow/geometry.hpp"

namespace tubeflow {

struct CenterlineConfig {
  std::string preset = "straight";  ///< straight, arc (alias torus), helix, table
  double radius = 1.0;              ///< arc radius
  double curvature = 0.0;           ///< helix
  double torsion = 0.0;             ///< helix
  std::vector<Vec3> points;         ///< table
};

struct RadiusConfig {
  std::string law = "constant";  ///< constant, modal, ellipse, table
  double value = 1.0;
  ModalRadius modal;
  double a = 1.0, b = 1.0;
  int table_n_theta = 0, table_n_s = 0;
  std::vector<double> values;
};

struct RunConfig {
  CenterlineConfig geometry;
  RadiusConfig radius;
  int n_s = 32;
  int n_theta = 32;
  int n_rho = 32;
  double slenderness = 0.05;
  double flux = 1.0;
  double outlet_pressure = 0.0;
  bool transverse = true;
  bool cutoff = true;
  std::filesystem::path output_directory = "tubeflow-out";
  bool write_csv = true;
  bool write_vtk = false;
  std::vector<double> h_values;
  std::vector<int> meshes;

  Centerline build_centerline(int n_s) const;
  RadiusLaw build_radius() const;
  PipeGeometry build_geometry(double h, int n_s, int n_theta) const;
  PipeGeometry build_geometry() const { return build_geometry(slenderness, n_s, n_theta); }
};

/// Parses a JSON run configuration. Unknown keys and invalid values raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace tubeflow
