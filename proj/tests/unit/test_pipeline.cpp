#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tubeflow/pipeline.hpp"
#include "tubeflow/validation.hpp"

using namespace tubeflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / "tubeflow-pipeline-test" / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("straight pipe: no curvature, no transverse flow, exact flux") {
    RunConfig c = parse_config(R"({"discretization": {"n_s": 8, "n_theta": 16, "n_rho": 16}})");
    c.output_directory = scratch("straight");
    const SolveResult r = cmd_solve(c, 2);
    CHECK(r.geometry.lambda == 0.0);
    CHECK(r.geometry.gamma == 0.0);
    CHECK(r.pressure_fd.flux_defect() < 1e-10);
    CHECK(r.pressure.flux_defect() < 1e-12);
    for (const auto& t : r.transverse) CHECK(t.vx.cwiseAbs().maxCoeff() == 0.0);
    for (const char* f : {"rigidity.csv", "pressure.csv", "field.csv", "report.json"})
      CHECK(fs::exists(c.output_directory / f));
    CHECK_FALSE(fs::exists(c.output_directory / "field.vtk"));
  }

  TEST_CASE("torus with h = 0.05 keeps G within 1e-3 of pi/2") {
    RunConfig c = parse_config(R"({"geometry": {"preset": "torus", "radius": 1.0},
                                   "discretization": {"n_s": 8, "n_theta": 64, "n_rho": 64}})");
    const SolveResult r = solve_pipeline(c, 1);
    for (double g : r.rigidity.g) CHECK(std::abs(g - pi / 2) <= 1e-3);
  }

  TEST_CASE("invalid scale factor names the failing station") {
    RunConfig c = parse_config(R"({"geometry": {"preset": "torus", "radius": 0.4},
                                   "physics": {"slenderness": 0.5},
                                   "discretization": {"n_s": 16, "n_theta": 16, "n_rho": 8}})");
    try {
      solve_pipeline(c, 1);
      FAIL("expected a geometry error");
    } catch (const GeometryError& e) {
      CHECK(e.station() == 0);
      CHECK(std::string(e.what()).find("station 0") != std::string::npos);
    }
  }

  TEST_CASE("convergence study of the disk") {
    RunConfig c = parse_config(R"({"study": {"meshes": [8, 16, 32]}})");
    c.output_directory = scratch("converge");
    const ConvergenceReport r = cmd_converge(c, 1);
    CHECK(r.g_exact);
    CHECK(r.order_g >= 1.9);
    // Constant G: both pressure routes are exact.
    for (const auto& row : r.rows) CHECK(row.p_defect < 1e-12);
    CHECK_FALSE(r.non_monotone);
    CHECK(fs::exists(c.output_directory / "convergence.csv"));
  }

  TEST_CASE("order fitting and monotonicity guard") {
    CHECK(observed_order({8, 16, 32}, {1e-2, 2.5e-3, 6.25e-4}) == doctest::Approx(2.0));
    CHECK(std::isnan(observed_order({8, 16}, {1e-16, 1e-17})));
    CHECK_FALSE(is_non_monotone({1e-2, 1e-3, 1e-4}));
    CHECK(is_non_monotone({1e-2, 1e-3, 2e-3}));
    CHECK_FALSE(is_non_monotone({1e-15, 2e-15}));
  }

  TEST_CASE("converge needs two meshes") {
    RunConfig c = parse_config(R"({"study": {"meshes": [8]}})");
    c.output_directory = scratch("converge-one");
    CHECK_THROWS_AS(cmd_converge(c, 1), ConfigError);
  }

  TEST_CASE("validation battery passes and tightened tolerances name failures") {
    const auto checks = run_validation(1.0, 1);
    CHECK(checks.size() >= 10);
    for (const auto& c : checks) CHECK_MESSAGE(c.passed, c.name);
    int failed = 0;
    for (const auto& c : run_validation(1e-3, 1)) failed += !c.passed;
    CHECK(failed > 0);
  }
}
