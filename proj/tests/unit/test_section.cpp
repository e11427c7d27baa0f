#include <doctest.h>

#include "tubeflow/section.hpp"

using namespace tubeflow;

namespace {

SectionMesh disk(int n, Vec2 curvature = Vec2::Zero(), double h = 0.05) {
  return SectionMesh(SectionData::planar(n, RadiusLaw::constant(1.0), 0.0, h, curvature), n);
}

}  // namespace

TEST_SUITE("section") {
  TEST_CASE("too coarse meshes are rejected") {
    CHECK_THROWS_AS(disk(3), NumericalError);
  }

  TEST_CASE("area is exact on the disk and moments converge at second order") {
    CHECK(disk(16).area() == doctest::Approx(pi).epsilon(1e-14));
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
      const SectionMesh m = disk(n);
      const Vector r4 = m.sample([](double e, double t) { return std::pow(e, 4) * (1 + std::cos(t)); });
      err.push_back(std::abs(m.integrate(r4) - pi / 3));
    }
    CHECK(err[2] < 1e-3);
    CHECK(log_log_slope(std::vector<double>{1 / 16.0, 1 / 32.0, 1 / 64.0}, err) > 1.9);
    CHECK(disk(64).cell_areas().sum() == doctest::Approx(pi).epsilon(1e-12));
  }

  TEST_CASE("gradient and divergence converge at second order on a non-circular section") {
    const RadiusLaw r = RadiusLaw::modal({1.0, 0.0, 1.0, 0.0, 0.2, 0.0, 2});
    std::vector<double> eg, ed;
    for (int n : {16, 32, 64}) {
      const SectionMesh m(SectionData::planar(n, r, 0.0, 0.05), n);
      const Vector q = m.sample_cartesian([](double y1, double y2) { return y1 * y1 + y1 * y2 - 3 * y2; });
      const Vector qx = m.sample_cartesian([](double y1, double y2) { return 2 * y1 + y2; });
      const Vector qy = m.sample_cartesian([](double y1, double) { return y1 - 3; });
      eg.push_back(std::max((m.grad_x() * q - qx).cwiseAbs().maxCoeff(), (m.grad_y() * q - qy).cwiseAbs().maxCoeff()));
      const Vector x = m.sample_cartesian([](double y1, double) { return y1; });
      const Vector y = m.sample_cartesian([](double, double y2) { return y2; });
      ed.push_back((m.divergence(x, y) - Vector::Constant(m.nodes(), 2.0)).cwiseAbs().maxCoeff());
    }
    const std::vector<double> h{1 / 16.0, 1 / 32.0, 1 / 64.0};
    CHECK(log_log_slope(h, eg) > 1.8);
    CHECK(log_log_slope(h, ed) > 1.8);
    CHECK(ed[2] < 1e-2);
  }

  TEST_CASE("pole gradient of a linear function is exact on the disk") {
    const SectionMesh m = disk(16);
    const Vector f = m.sample_cartesian([](double y1, double y2) { return 2 * y1 - 3 * y2 + 1; });
    CHECK((m.grad_x() * f)[0] == doctest::Approx(2.0).epsilon(1e-2));
    CHECK((m.grad_y() * f)[0] == doctest::Approx(-3.0).epsilon(1e-2));
  }

  TEST_CASE("polar and Cartesian components round trip") {
    const SectionMesh m = disk(16);
    const Vector x = m.sample_cartesian([](double y1, double y2) { return y1 * y2 + 1; });
    const Vector y = m.sample_cartesian([](double y1, double) { return y1 - 2; });
    const VectorField2 p = m.to_polar(x, y);
    const auto [bx, by] = m.to_cartesian(p);
    CHECK((bx - x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((by - y).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("scale factor on a curved section") {
    const SectionMesh m = disk(16, Vec2(1.0, 0.0), 0.1);
    for (int k = 0; k <= 16; ++k)
      for (int j = 0; j < 16; ++j)
        CHECK(m.beta()[m.index(k, j)] == doctest::Approx(1 - 0.1 * m.point(k, j).x()));
    CHECK_THROWS_AS(disk(16, Vec2(1.0, 0.0), 1.5), GeometryError);
  }

  TEST_CASE("dof maps") {
    const SectionMesh m = disk(8);
    const DofMap interior(m, false), full(m, true);
    CHECK(interior.size() == 1 + 7 * 8);
    CHECK(full.size() == 1 + 8 * 8);
    CHECK(interior(0, 5) == 0);
    CHECK(interior(8, 0) < 0);
    const Vector f = m.sample([](double e, double t) { return (1 - e * e) * std::cos(t) * e; });
    CHECK((interior.prolong(interior.restrict(f)) - f).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("energy operator is symmetric and annihilates constants") {
    const SectionMesh m = disk(12, Vec2(0.5, 0.5), 0.1);
    const DofMap full(m, true);
    const SparseMatrix k = assemble_energy_operator(m, m.beta(), full);
    CHECK((SparseMatrix(k.transpose()) - k).norm() < 1e-12 * k.norm());
    CHECK((k * Vector::Ones(full.size())).cwiseAbs().maxCoeff() < 1e-12);
  }
}
