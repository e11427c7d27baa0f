#include <doctest.h>

#include <Eigen/Geometry>

#include "tubeflow/geometry.hpp"

using namespace tubeflow;

TEST_SUITE("geometry") {
  TEST_CASE("straight centerline has zero curvature and unit speed") {
    const Centerline c = Centerline::straight(10);
    CHECK(c.size() == 11);
    CHECK(c.speed_defect() < 1e-14);
    for (int i = 0; i < c.size(); ++i) {
      CHECK(c[i].d2.norm() == 0.0);
      CHECK((c[i].position - Vec3(0, 0, c.s(i))).norm() < 1e-15);
    }
  }

  TEST_CASE("circular arc has curvature 1/radius and c''' = -c'/radius^2") {
    const double r = 0.7;
    const Centerline c = Centerline::circular_arc(r, 16);
    CHECK(c.speed_defect() < 1e-14);
    CHECK(c.normality_defect() < 1e-14);
    for (int i = 0; i < c.size(); ++i) {
      CHECK(c[i].d2.norm() == doctest::Approx(1.0 / r).epsilon(1e-13));
      CHECK((c[i].d3 + c[i].d1 / (r * r)).norm() < 1e-12);
    }
  }

  TEST_CASE("helix has the prescribed curvature and torsion") {
    const double k = 2.0, t = 1.0;
    const Centerline c = Centerline::helix(k, t, 20);
    for (int i = 0; i < c.size(); ++i) {
      CHECK(c[i].d2.norm() == doctest::Approx(k).epsilon(1e-12));
      // torsion = (c' x c'') . c''' / |c''|^2
      CHECK(c[i].d1.cross(c[i].d2).dot(c[i].d3) / (k * k) == doctest::Approx(t).epsilon(1e-12));
    }
  }

  TEST_CASE("analytic curves are rotated so that c'(0) = e_z") {
    const Centerline c = Centerline::from_function(
        [](double s) {
          CurveJet j;
          j.position = Vec3(s, 0, 0);
          j.d1 = Vec3(1, 0, 0);
          return j;
        },
        8);
    CHECK(c.rotated());
    CHECK((c[0].d1 - Vec3(0, 0, 1)).norm() < 1e-14);
    CHECK((c[8].position - Vec3(0, 0, 1)).norm() < 1e-14);
  }

  TEST_CASE("non unit-speed analytic curve is rejected") {
    auto jet = [](double s) {
      CurveJet j;
      j.position = Vec3(0, 0, 2 * s);
      j.d1 = Vec3(0, 0, 2);
      return j;
    };
    CHECK_THROWS_AS(Centerline::from_function(jet, 8), GeometryError);
  }

  TEST_CASE("tabulated points on a circle reproduce the arc") {
    std::vector<Vec3> pts;
    const double r = 1.0;
    for (int i = 0; i <= 40; ++i) {
      const double a = 1.0 * i / 40;  // one radian of arc
      pts.emplace_back(r * (1 - std::cos(a)), 0.0, r * std::sin(a));
    }
    const Centerline c = Centerline::tabulated(pts, 16);
    CHECK(c.input_length() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c.speed_defect() < 1e-6);
    for (int i = 2; i + 2 < c.size(); ++i) CHECK(c[i].d2.norm() == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("transported frame is orthonormal and satisfies d/ds e1 = -(c''.e1) c'") {
    const Centerline c = Centerline::helix(2.0, 1.0, 64);
    const FrameField f = FrameField::transport(c, 8);
    CHECK(f.stats().max_defect < 1e-12);
    const double ds = c.spacing();
    for (int i = 1; i + 1 < c.size(); ++i)
      for (int j = 0; j < 8; ++j) {
        const Vec3 de = (f.e1(j, i + 1) - f.e1(j, i - 1)) / (2 * ds);
        const Vec3 expected = -c[i].d2.dot(f.e1(j, i)) * c[i].d1;
        CHECK((de - expected).norm() < 5e-3);
        CHECK(f.e1(j, i).cross(f.e2(j, i)).dot(c[i].d1) == doctest::Approx(1.0));
      }
  }

  TEST_CASE("coarse transport of a tight curve reports drift") {
    CHECK_THROWS_AS(FrameField::transport(Centerline::circular_arc(0.1, 4), 8), GeometryError);
  }

  TEST_CASE("modal radius derivatives agree with finite differences") {
    const RadiusLaw r = RadiusLaw::modal({1.0, 0.2, 2.0, 0.3, 0.1, 0.05, 3});
    const double th = 0.7, s = 0.4, e = 1e-5;
    const RadiusJet j = r(th, s);
    CHECK(j.ds == doctest::Approx((r(th, s + e).value - r(th, s - e).value) / (2 * e)).epsilon(1e-7));
    CHECK(j.dtheta == doctest::Approx((r(th + e, s).value - r(th - e, s).value) / (2 * e)).epsilon(1e-7));
    CHECK(j.dss == doctest::Approx((r(th, s + e).ds - r(th, s - e).ds) / (2 * e)).epsilon(1e-6));
  }

  TEST_CASE("closed-form straight rigidities") {
    CHECK(*RadiusLaw::constant(2.0).straight_rigidity() == doctest::Approx(pi * 16 / 2));
    CHECK(*RadiusLaw::ellipse(1.0, 0.5).straight_rigidity() == doctest::Approx(pi * 0.125 / 1.25));
    CHECK_FALSE(RadiusLaw::modal({1.0, 0.0, 1.0, 0.0, 0.2, 0.0, 1}).straight_rigidity().has_value());
  }

  TEST_CASE("tabulated radius reproduces a smooth law") {
    const int nt = 32, ns = 33;
    std::vector<double> v;
    for (int k = 0; k < ns; ++k)
      for (int j = 0; j < nt; ++j) v.push_back(1.0 + 0.1 * std::cos(2 * pi * j / nt) * (1 + 0.5 * k / (ns - 1.0)));
    const RadiusLaw r = RadiusLaw::tabulated(nt, ns, v);
    const double th = 1.1, s = 0.37;
    CHECK(r(th, s).value == doctest::Approx(1.0 + 0.1 * std::cos(th) * (1 + 0.5 * s)).epsilon(1e-5));
    CHECK(r(th, s).ds == doctest::Approx(0.05 * std::cos(th)).epsilon(1e-3));
  }

  TEST_CASE("geometry report of a torus") {
    const PipeGeometry g(Centerline::circular_arc(2.0, 32), RadiusLaw::constant(1.0), 0.1, 16);
    const GeometryReport r = g.report();
    CHECK(r.lambda == doctest::Approx(0.1 / 4));
    CHECK(r.gamma == 0.0);
    CHECK(r.min_beta == doctest::Approx(1 - 0.1 * 1.0 / 2.0));
    CHECK(r.curvature_identity_defect < 1e-12);
    CHECK(r.valid);
  }

  TEST_CASE("certification rejects a pipe that curves into itself and names the station") {
    const PipeGeometry g(Centerline::circular_arc(0.4, 32), RadiusLaw::constant(1.0), 0.5, 16);
    CHECK_FALSE(g.report().valid);
    try {
      g.certify();
      FAIL("certify accepted beta <= 0");
    } catch (const GeometryError& e) {
      CHECK(e.station() == 0);
      CHECK(std::string(e.what()).find("curves into itself") != std::string::npos);
    }
    CHECK_THROWS_AS(g.scale_factor(1.0, 0, 3), GeometryError);
  }

  TEST_CASE("scale factor along the wall of a torus") {
    const PipeGeometry g(Centerline::circular_arc(1.0, 16), RadiusLaw::constant(1.0), 0.05, 4);
    // The arc bends towards +x at s = 0, where e1(theta = 0) = (1, 0, 0).
    CHECK(g.curvature_e1(0, 0) == doctest::Approx(1.0));
    CHECK(g.scale_factor(1.0, 0, 0).value == doctest::Approx(0.95));
    CHECK(g.scale_factor(1.0, 2, 0).value == doctest::Approx(1.05));
  }
}
