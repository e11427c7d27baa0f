#include "tubeflow/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

namespace tubeflow {

namespace {

using nlohmann::json;

void allow_keys(const json& block, const std::string& where, std::initializer_list<const char*> keys) {
  if (!block.is_object()) throw ConfigError(fmt::format("'{}' must be an object", where));
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : block.items())
    if (!allowed.count(item.key())) throw ConfigError(fmt::format("unknown key '{}' in '{}'", item.key(), where));
}

template <class T>
void read(const json& block, const char* key, T& target, const std::string& where) {
  if (!block.contains(key)) return;
  try {
    target = block.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(fmt::format("'{}.{}' has the wrong type", where, key));
  }
}

void require_count(int value, const char* name) {
  if (value < 4) throw ConfigError(fmt::format("{} must be at least 4 (got {})", name, value));
}

void parse_geometry(const json& g, CenterlineConfig& c) {
  allow_keys(g, "geometry", {"preset", "radius", "curvature", "torsion", "points"});
  read(g, "preset", c.preset, "geometry");
  read(g, "radius", c.radius, "geometry");
  read(g, "curvature", c.curvature, "geometry");
  read(g, "torsion", c.torsion, "geometry");
  if (g.contains("points")) {
    for (const auto& p : g.at("points")) {
      if (!p.is_array() || p.size() != 3) throw ConfigError("'geometry.points' entries must be [x, y, z]");
      c.points.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
  }
  if (c.preset == "torus") c.preset = "arc";
  if (c.preset != "straight" && c.preset != "arc" && c.preset != "helix" && c.preset != "table")
    throw ConfigError(fmt::format("unknown geometry preset '{}'", c.preset));
  if (c.preset == "arc" && !(c.radius > 0.0)) throw ConfigError("'geometry.radius' must be positive");
  if (c.preset == "table" && c.points.size() < 4) throw ConfigError("'geometry.points' needs at least 4 points");
}

void parse_radius(const json& r, RadiusConfig& c) {
  allow_keys(r, "radius", {"law", "value", "r0", "a", "k", "phase", "b", "c", "m", "n_theta", "n_s", "values"});
  read(r, "law", c.law, "radius");
  if (c.law == "constant") {
    read(r, "value", c.value, "radius");
    if (!(c.value > 0.0)) throw ConfigError("'radius.value' must be positive");
  } else if (c.law == "modal") {
    read(r, "r0", c.modal.r0, "radius");
    read(r, "a", c.modal.a, "radius");
    read(r, "k", c.modal.k, "radius");
    read(r, "phase", c.modal.phase, "radius");
    read(r, "b", c.modal.b, "radius");
    read(r, "c", c.modal.c, "radius");
    read(r, "m", c.modal.m, "radius");
  } else if (c.law == "ellipse") {
    read(r, "a", c.a, "radius");
    read(r, "b", c.b, "radius");
    if (!(c.a > 0.0 && c.b > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
  } else if (c.law == "table") {
    read(r, "n_theta", c.table_n_theta, "radius");
    read(r, "n_s", c.table_n_s, "radius");
    read(r, "values", c.values, "radius");
    if (c.values.size() != static_cast<std::size_t>(c.table_n_theta) * c.table_n_s)
      throw ConfigError("'radius.values' must hold n_s * n_theta entries");
  } else {
    throw ConfigError(fmt::format("unknown radius law '{}'", c.law));
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("configuration is not valid JSON: {}", e.what()));
  }
  if (!root.is_object() || root.empty()) throw ConfigError("configuration is empty");
  allow_keys(root, "configuration",
             {"geometry", "radius", "discretization", "physics", "toggles", "output", "study"});
  RunConfig cfg;
  if (root.contains("geometry")) parse_geometry(root.at("geometry"), cfg.geometry);
  if (root.contains("radius")) parse_radius(root.at("radius"), cfg.radius);
  if (root.contains("discretization")) {
    const json& d = root.at("discretization");
    allow_keys(d, "discretization", {"n_s", "n_theta", "n_rho"});
    read(d, "n_s", cfg.n_s, "discretization");
    read(d, "n_theta", cfg.n_theta, "discretization");
    read(d, "n_rho", cfg.n_rho, "discretization");
  }
  require_count(cfg.n_s, "n_s");
  require_count(cfg.n_theta, "n_theta");
  require_count(cfg.n_rho, "n_rho");
  if (root.contains("physics")) {
    const json& p = root.at("physics");
    allow_keys(p, "physics", {"slenderness", "flux", "outlet_pressure"});
    read(p, "slenderness", cfg.slenderness, "physics");
    read(p, "flux", cfg.flux, "physics");
    read(p, "outlet_pressure", cfg.outlet_pressure, "physics");
  }
  if (!(cfg.slenderness > 0.0)) throw ConfigError("'physics.slenderness' must be positive");
  if (root.contains("toggles")) {
    const json& t = root.at("toggles");
    allow_keys(t, "toggles", {"transverse", "cutoff"});
    read(t, "transverse", cfg.transverse, "toggles");
    read(t, "cutoff", cfg.cutoff, "toggles");
  }
  if (root.contains("output")) {
    const json& o = root.at("output");
    allow_keys(o, "output", {"directory", "formats"});
    std::string dir = cfg.output_directory.string();
    read(o, "directory", dir, "output");
    cfg.output_directory = dir;
    if (o.contains("formats")) {
      std::vector<std::string> formats;
      read(o, "formats", formats, "output");
      cfg.write_csv = cfg.write_vtk = false;
      for (const auto& f : formats) {
        if (f == "csv") cfg.write_csv = true;
        else if (f == "vtk") cfg.write_vtk = true;
        else throw ConfigError(fmt::format("unknown output format '{}'", f));
      }
    }
  }
  if (root.contains("study")) {
    const json& s = root.at("study");
    allow_keys(s, "study", {"h_values", "meshes"});
    read(s, "h_values", cfg.h_values, "study");
    read(s, "meshes", cfg.meshes, "study");
    for (double h : cfg.h_values)
      if (!(h > 0.0)) throw ConfigError("'study.h_values' must be positive");
    for (int m : cfg.meshes) require_count(m, "study.meshes entries");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read configuration '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

Centerline RunConfig::build_centerline(int intervals) const {
  if (geometry.preset == "straight") return Centerline::straight(intervals);
  if (geometry.preset == "arc") return Centerline::circular_arc(geometry.radius, intervals);
  if (geometry.preset == "helix") return Centerline::helix(geometry.curvature, geometry.torsion, intervals);
  return Centerline::tabulated(geometry.points, intervals);
}

RadiusLaw RunConfig::build_radius() const {
  if (radius.law == "constant") return RadiusLaw::constant(radius.value);
  if (radius.law == "modal") return RadiusLaw::modal(radius.modal);
  if (radius.law == "ellipse") return RadiusLaw::ellipse(radius.a, radius.b);
  return RadiusLaw::tabulated(radius.table_n_theta, radius.table_n_s, radius.values);
}

PipeGeometry RunConfig::build_geometry(double h, int intervals, int angles) const {
  return PipeGeometry(build_centerline(intervals), build_radius(), h, angles);
}

}  // namespace tubeflow
