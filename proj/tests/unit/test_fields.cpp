#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tubeflow/fields.hpp"

using namespace tubeflow;
namespace fs = std::filesystem;

namespace {

struct Solved {
  PipeGeometry geometry;
  RigidityProfile rigidity;
  PressureProfile pressure;
  std::vector<TransverseSolution> transverse;
};

Solved solve_torus(double h) {
  PipeGeometry g(Centerline::circular_arc(1.0, 8), RadiusLaw::constant(1.0), h, 12);
  RigidityProfile r = rigidity_profile(g, 8);
  const PrandtlSDerivatives d = prandtl_s_derivatives(r);
  PressureProfile p = solve_reynolds(r.s, r.g, 1.0, 0.0, d.dg, d.d2g);
  auto t = solve_transverse_profile(r, longitudinal_profile(r, d, p));
  return {std::move(g), std::move(r), std::move(p), std::move(t)};
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("cutoff profile") {
    CHECK(cutoff(0.05, 0.1) == 0.0);
    CHECK(cutoff(0.95, 0.1) == 0.0);
    CHECK(cutoff(0.5, 0.1) == 1.0);
    CHECK(cutoff(0.15, 0.1) == doctest::Approx(0.5));
    CHECK(cutoff(0.85, 0.1) == doctest::Approx(0.5));
  }

  TEST_CASE("assembled field carries flux h F0 through every section") {
    const Solved s = solve_torus(0.05);
    const FlowField f = assemble(s.geometry, s.rigidity, s.pressure, s.transverse);
    CHECK(f.n_s == 9);
    CHECK(f.nodes.size() == static_cast<std::size_t>(9 * 9 * 12));
    for (double q : f.flux) CHECK(q == doctest::Approx(0.05).epsilon(1e-10));
    // Pole nodes sit on the centerline and the wall nodes at distance h R from it.
    const FieldNode& pole = f.nodes[f.index(3, 0, 0)];
    const FieldNode& wall = f.nodes[f.index(3, 8, 5)];
    const Vec3 c = s.geometry.centerline()[3].position;
    CHECK((Vec3(pole.x, pole.y, pole.z) - c).norm() < 1e-14);
    CHECK((Vec3(wall.x, wall.y, wall.z) - c).norm() == doctest::Approx(0.05));
    CHECK(wall.v3 == 0.0);
  }

  TEST_CASE("cutoff switches the transverse part off near the ends") {
    const Solved s = solve_torus(0.2);
    const FlowField on = assemble(s.geometry, s.rigidity, s.pressure, s.transverse, {true, true, 1});
    for (int k = 0; k <= 8; ++k)
      for (int j = 0; j < 12; ++j) {
        CHECK(on.nodes[on.index(0, k, j)].v1 == 0.0);
        CHECK(on.nodes[on.index(8, k, j)].v2 == 0.0);
      }
  }

  TEST_CASE("norms of the difference of a field with itself vanish") {
    const Solved s = solve_torus(0.1);
    const FlowField f = assemble(s.geometry, s.rigidity, s.pressure, s.transverse);
    const NormReport self = norms(f, s.rigidity.meshes, &f);
    CHECK(self.combined == 0.0);
    const NormReport n = norms(f, s.rigidity.meshes);
    CHECK(n.velocity > 0.0);
    CHECK(n.combined == doctest::Approx(0.1 * n.gradient + n.velocity + 0.01 * n.pressure));
  }

  TEST_CASE("CSV round trip and VTK header") {
    const Solved s = solve_torus(0.05);
    const FlowField f = assemble(s.geometry, s.rigidity, s.pressure, s.transverse);
    const fs::path dir = fs::temp_directory_path() / "tubeflow-fields-test";
    fs::create_directories(dir);
    write_csv(f, dir / "f.csv");
    const FlowField back = read_csv(dir / "f.csv");
    CHECK(back.n_s == f.n_s);
    CHECK(back.n_rho == f.n_rho);
    CHECK(back.n_theta == f.n_theta);
    for (std::size_t i = 0; i < f.nodes.size(); i += 37) {
      CHECK(back.nodes[i].v3 == f.nodes[i].v3);
      CHECK(back.nodes[i].x == f.nodes[i].x);
      CHECK(back.nodes[i].p == f.nodes[i].p);
    }
    write_vtk(f, dir / "f.vtk");
    std::ifstream in(dir / "f.vtk");
    std::string line1, line2, line3, line4, line5;
    std::getline(in, line1);
    std::getline(in, line2);
    std::getline(in, line3);
    std::getline(in, line4);
    std::getline(in, line5);
    CHECK(line1 == "# vtk DataFile Version 3.0");
    CHECK(line3 == "ASCII");
    CHECK(line4 == "DATASET STRUCTURED_GRID");
    CHECK(line5 == "DIMENSIONS 13 9 9");
    fs::remove_all(dir);
  }

  TEST_CASE("unwritable output is a configuration error") {
    const Solved s = solve_torus(0.05);
    const FlowField f = assemble(s.geometry, s.rigidity, s.pressure, {}, {false, false, 1});
    CHECK_THROWS_AS(write_csv(f, "/nonexistent-dir/x/f.csv"), ConfigError);
    CHECK_THROWS_AS(write_vtk(f, "/nonexistent-dir/x/f.vtk"), ConfigError);
  }
}
