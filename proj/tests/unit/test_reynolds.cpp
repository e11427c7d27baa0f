#include <doctest.h>

#include "tubeflow/reynolds.hpp"

using namespace tubeflow;

namespace {

std::vector<double> grid(int n) {
  std::vector<double> s;
  for (int i = 0; i <= n; ++i) s.push_back(static_cast<double>(i) / n);
  return s;
}

}  // namespace

TEST_SUITE("reynolds") {
  TEST_CASE("constant rigidity gives the exact linear pressure on both routes") {
    const auto s = grid(10);
    const std::vector<double> g(s.size(), 2.0);
    const PressureProfile c = solve_reynolds(s, g, 3.0, 1.5);
    const PressureProfile f = solve_reynolds_fd(s, g, 3.0, 1.5);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double exact = 1.5 + 4 * 3.0 * (1 - s[i]) / 2.0;
      CHECK(c.p[i] == doctest::Approx(exact).epsilon(1e-14));
      CHECK(f.p[i] == doctest::Approx(exact).epsilon(1e-13));
      CHECK(c.dp[i] == doctest::Approx(-6.0));
    }
    CHECK(c.flux_defect() < 1e-14);
    CHECK(f.flux_defect() < 1e-13);
  }

  TEST_CASE("closed form integrates 1/G to high order") {
    // G = 1 + s: p = 4 F ln(2 / (1 + s)).
    std::vector<double> err;
    for (int n : {8, 16, 32}) {
      const auto s = grid(n);
      std::vector<double> g;
      for (double x : s) g.push_back(1 + x);
      const PressureProfile c = solve_reynolds(s, g, 1.0, 0.0);
      double e = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(c.p[i] - 4 * std::log(2 / (1 + s[i]))));
      err.push_back(e);
    }
    CHECK(err[2] < 1e-5);
    CHECK(log_log_slope(std::vector<double>{1 / 8.0, 1 / 16.0, 1 / 32.0}, err) > 2.5);
  }

  TEST_CASE("finite-difference route is second order and conserves the face flux") {
    std::vector<double> err;
    for (int n : {16, 32, 64}) {
      const auto s = grid(n);
      std::vector<double> g;
      for (double x : s) g.push_back(1 + 0.5 * std::sin(3 * x));
      const PressureProfile c = solve_reynolds(s, g, 1.0, 0.0);
      const PressureProfile f = solve_reynolds_fd(s, g, 1.0, 0.0);
      double e = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(c.p[i] - f.p[i]));
      err.push_back(e);
      CHECK(f.flux.size() == s.size() - 1);
      CHECK(f.flux_defect() < 1e-12);
    }
    CHECK(log_log_slope(std::vector<double>{1 / 16.0, 1 / 32.0, 1 / 64.0}, err) > 1.9);
  }

  TEST_CASE("higher pressure derivatives follow from dG") {
    const auto s = grid(20);
    std::vector<double> g, dg, d2g;
    for (double x : s) {
      g.push_back(2 + x * x);
      dg.push_back(2 * x);
      d2g.push_back(2.0);
    }
    const PressureProfile c = solve_reynolds(s, g, 1.0, 0.0, dg, d2g);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(c.d2p[i] == doctest::Approx(4 * dg[i] / (g[i] * g[i])).epsilon(1e-12));
      const double d3 = 4 * (d2g[i] * g[i] - 2 * dg[i] * dg[i]) / (g[i] * g[i] * g[i]);
      CHECK(c.d3p[i] == doctest::Approx(d3).epsilon(1e-12));
    }
  }

  TEST_CASE("invalid inputs") {
    const auto s = grid(4);
    CHECK_THROWS(solve_reynolds(s, std::vector<double>{1, 1, 0, 1, 1}, 1.0, 0.0));
    CHECK_THROWS(solve_reynolds(s, std::vector<double>{1, 1, 1}, 1.0, 0.0));
  }

  TEST_CASE("longitudinal velocity carries the prescribed section flux") {
    const SectionMesh m(SectionData::planar(32, RadiusLaw::constant(1.0), 0.0, 0.05), 32);
    const Vector psi = m.sample([](double e, double) { return 0.5 * (1 - e * e); });
    const double g = 2 * m.integrate(psi);
    const double dp = -4 * 2.5 / g;
    CHECK(section_flux(m, longitudinal_velocity(psi, dp)) == doctest::Approx(2.5).epsilon(1e-13));
  }

  TEST_CASE("pressure-derivative bounds vanish for a straight uniform pipe") {
    const auto s = grid(8);
    const std::vector<double> g(s.size(), pi / 2);
    const PressureProfile c = solve_reynolds(s, g, 1.0, 0.0, std::vector<double>(s.size(), 0.0),
                                             std::vector<double>(s.size(), 0.0));
    GeometryReport r;
    const PressureBounds b = pressure_derivative_bounds(c, r, pi / 2);
    CHECK(b.max_d2p == 0.0);
    CHECK(b.d2p_ratio == 0.0);
    CHECK(b.max_dp == doctest::Approx(b.dp_bound));
  }
}
