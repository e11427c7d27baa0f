#include <doctest.h>

#include "tubeflow/manufactured.hpp"
#include "tubeflow/transverse.hpp"

using namespace tubeflow;

TEST_SUITE("transverse") {
  TEST_CASE("manufactured Stokes solution converges in velocity and pressure") {
    // Divergence-free-ish bubble velocities that vanish on the unit circle.
    const SectionFunction vx = [](double y1, double y2, double) { return (1 - y1 * y1 - y2 * y2) * y2; };
    const SectionFunction vy = [](double y1, double y2, double) { return -(1 - y1 * y1 - y2 * y2) * (y1 + 0.5); };
    const SectionFunction p = [](double y1, double y2, double) { return y1 * y1 - y2 + 0.3 * y1 * y2; };
    const LinearScaleFactor beta{0.1, [](double) { return Vec2(1.0, 0.0); }};
    std::vector<double> ev, ep;
    for (int n : {16, 32}) {
      const SectionMesh m(SectionData::planar(n, RadiusLaw::constant(1.0), 0.0, 0.1, Vec2(1.0, 0.0)), n);
      const ManufacturedStokes ms = manufactured_stokes(m, vx, vy, p, beta);
      const TransverseSolution s = solve_modified_stokes(m, ms.data);
      ev.push_back(std::max((s.vx - ms.vx).cwiseAbs().maxCoeff(), (s.vy - ms.vy).cwiseAbs().maxCoeff()));
      ep.push_back(l2_norm(m, s.p - ms.p));
      CHECK(s.divergence_residual < 0.1);
    }
    CHECK(ev[1] < 5e-3);
    CHECK(ev[0] / ev[1] > 3.0);
    CHECK(ep[0] / ep[1] > 2.5);
  }

  TEST_CASE("compatibility check") {
    const SectionMesh m(SectionData::planar(16, RadiusLaw::constant(1.0), 0.0, 0.05), 16);
    const Vector mean_free = m.sample([](double e, double t) { return e * std::cos(t); });
    CHECK(check_compatibility(m, mean_free).holds);
    CHECK_FALSE(check_compatibility(m, Vector::Ones(m.nodes())).holds);
    CHECK_THROWS_AS(solve_transverse(m, Vector::Zero(m.nodes()), Vector::Ones(m.nodes())), NumericalError);
  }

  TEST_CASE("vanishing data give an exactly zero correction") {
    const SectionMesh m(SectionData::planar(16, RadiusLaw::constant(1.0), 0.0, 0.05), 16);
    const Vector v3 = m.sample([](double e, double) { return 1 - e * e; });
    const TransverseSolution s = solve_transverse(m, v3, Vector::Zero(m.nodes()));
    CHECK(s.vx.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.vy.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("transverse correction on a torus is driven by curvature") {
    const PipeGeometry g(Centerline::circular_arc(1.0, 8), RadiusLaw::modal({1.0, 0.1, 1.0, 0.0, 0.0, 0.0, 1}), 0.1,
                         16);
    const RigidityProfile r = rigidity_profile(g, 16);
    const PrandtlSDerivatives d = prandtl_s_derivatives(r);
    const PressureProfile p = solve_reynolds(r.s, r.g, 1.0, 0.0, d.dg, d.d2g);
    const auto sols = solve_transverse_profile(r, longitudinal_profile(r, d, p), 2);
    REQUIRE(sols.size() == r.s.size());
    for (const auto& s : sols) {
      CHECK(s.vx.allFinite());
      CHECK(s.vx.cwiseAbs().maxCoeff() + s.vy.cwiseAbs().maxCoeff() > 0.0);
      CHECK(s.compatibility_residual < 1e-10);
    }
  }

  TEST_CASE("divergence identity holds for a consistent triple and fails for a broken one") {
    const LinearScaleFactor beta{0.1, [](double) { return Vec2(1.0, 0.0); }};
    const SectionFunction ux = [](double y1, double y2, double s) { return std::sin(y2 + s) + y1 * s; };
    const SectionFunction uy = [](double y1, double, double s) { return y1 * y1 * (1 + s); };
    const PipeGeometry g(Centerline::circular_arc(1.0, 20), RadiusLaw::modal({1.0, 0.0, 1.0, 0.0, 0.1, 0.05, 2}), 0.1,
                         32);
    const SectionMesh m = SectionMesh::build(g, 10, 32);
    const double good = std::abs(check_divergence_identity(m, manufactured_divergence_triple(m, ux, uy, beta)).sum());
    const double bad = std::abs(check_divergence_identity(m, manufactured_divergence_triple(m, ux, uy, beta, 1.0)).sum());
    CHECK(good < 2e-3);
    CHECK(bad > 100 * good);
  }
}
