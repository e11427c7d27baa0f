#include <doctest.h>

#include "tubeflow/manufactured.hpp"
#include "tubeflow/prandtl.hpp"

using namespace tubeflow;

namespace {

SectionMesh section(int n, const RadiusLaw& r, Vec2 curvature = Vec2::Zero(), double h = 0.05) {
  return SectionMesh(SectionData::planar(n, r, 0.0, h, curvature), n);
}

}  // namespace

TEST_SUITE("prandtl") {
  TEST_CASE("disk: psi = (1 - eta^2) / 2 and G = pi / 2") {
    const SectionMesh m = section(32, RadiusLaw::constant(1.0));
    const PrandtlSolution s = solve_prandtl(m);
    const Vector exact = m.sample([](double e, double) { return 0.5 * (1 - e * e); });
    CHECK((s.psi - exact).cwiseAbs().maxCoeff() < 1e-3);
    CHECK(s.g_bulk == doctest::Approx(pi / 2).epsilon(2e-3));
    CHECK(s.residual < 1e-10);
  }

  TEST_CASE("ellipse rigidity against pi a^3 b^3 / (a^2 + b^2)") {
    const RadiusLaw r = RadiusLaw::ellipse(1.0, 0.6);
    const double exact = *r.straight_rigidity();
    const double e32 = std::abs(solve_prandtl(section(32, r)).g_bulk - exact);
    const double e64 = std::abs(solve_prandtl(section(64, r)).g_bulk - exact);
    CHECK(e64 / exact < 1e-3);
    CHECK(e32 / e64 > 3.5);
  }

  TEST_CASE("manufactured weighted Poisson problem converges at second order") {
    const SectionFunction psi = [](double y1, double y2, double) {
      return (1 - y1 * y1 - y2 * y2) * (1 + 0.3 * y1 + 0.2 * y2 * y2);
    };
    const LinearScaleFactor beta{0.2, [](double) { return Vec2(0.6, -0.8); }};
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
      const SectionMesh m = section(n, RadiusLaw::constant(1.0), Vec2(0.6, -0.8), 0.2);
      const ManufacturedPoisson mp = manufactured_poisson(m, psi, beta, Weighting::scale_factor);
      err.push_back((solve_poisson(m, mp.rhs) - mp.exact).cwiseAbs().maxCoeff());
    }
    CHECK(err.back() < 1e-3);
    CHECK(log_log_slope(std::vector<double>{1 / 16.0, 1 / 32.0, 1 / 64.0}, err) > 1.8);
  }

  TEST_CASE("unit and scale-factor weightings agree when beta = 1") {
    const SectionMesh m = section(16, RadiusLaw::modal({1.0, 0.0, 1.0, 0.0, 0.2, 0.0, 1}));
    const PrandtlSolution a = solve_prandtl(m, Weighting::scale_factor);
    const PrandtlSolution b = solve_prandtl(m, Weighting::unit);
    CHECK((a.psi - b.psi).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("curvature lowers the rigidity only at second order") {
    const SectionMesh flat = section(32, RadiusLaw::constant(1.0));
    const double g0 = solve_prandtl(flat).g_bulk;
    for (double h : {0.1, 0.05}) {
      const double g = solve_prandtl(section(32, RadiusLaw::constant(1.0), Vec2(1.0, 0.0), h)).g_bulk;
      CHECK(std::abs(g - g0) / g0 < 2 * h * h);
    }
  }

  TEST_CASE("large sections switch to the iterative route and keep second-order accuracy") {
    const SectionMesh m = section(128, RadiusLaw::constant(1.0));
    const EllipticSolver e(m, Weighting::scale_factor);
    CHECK(e.dofs().size() > SpdSolver::direct_limit);
    CHECK_FALSE(SpdSolver(e.matrix()).direct());
    const PrandtlSolution s = solve_prandtl(m);
    CHECK(s.residual < 1e-8);
    CHECK(std::abs(s.g_bulk - pi / 2) / (pi / 2) < 1e-4);
  }

  TEST_CASE("threaded rigidity profile is bitwise identical to the serial one") {
    const PipeGeometry g(Centerline::circular_arc(1.0, 8), RadiusLaw::modal({1.0, 0.1, 1.0, 0.0, 0.1, 0.0, 2}), 0.1,
                         16);
    const RigidityProfile a = rigidity_profile(g, 16, 1);
    const RigidityProfile b = rigidity_profile(g, 16, 3);
    CHECK(a.g == b.g);
    CHECK(a.max_energy_defect() < 1e-2);
  }

  TEST_CASE("s-derivative of G from psi matches the finite difference of G") {
    const PipeGeometry g(Centerline::straight(32), RadiusLaw::modal({1.0, 0.2, 1.0, 0.0, 0.0, 0.0, 1}), 0.05, 32);
    const RigidityProfile p = rigidity_profile(g, 32);
    const PrandtlSDerivatives d = prandtl_s_derivatives(p);
    for (int i = 4; i < 28; ++i) {
      const double fd = (p.g[i + 1] - p.g[i - 1]) / (2 * p.ds());
      // Exact: G = pi R^4 / 2, dG = 2 pi R^3 R'.
      const double r = 1 + 0.2 * std::sin(2 * pi * p.s[i]);
      const double dr = 0.4 * pi * std::cos(2 * pi * p.s[i]);
      CHECK(d.dg[i] == doctest::Approx(fd).epsilon(2e-2));
      CHECK(d.dg[i] == doctest::Approx(2 * pi * r * r * r * dr).epsilon(1e-2).scale(1.0));
    }
  }
}
