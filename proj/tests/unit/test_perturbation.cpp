#include <doctest.h>

#include "tubeflow/perturbation.hpp"

using namespace tubeflow;

TEST_SUITE("perturbation") {
  TEST_CASE("psi1 on the unit disk with planar curvature") {
    for (Psi1Source source : {Psi1Source::pointwise, Psi1Source::operator_derivative}) {
      const SectionMesh m(SectionData::planar(32, RadiusLaw::constant(1.0), 0.0, 0.05, Vec2(1.0, 0.0)), 32);
      const Vector psi1 = solve_psi1(m, solve_psi0(m), source);
      const Vector exact = m.sample([](double e, double t) { return 0.375 * e * (1 - e * e) * std::cos(t); });
      CHECK((psi1 - exact).cwiseAbs().maxCoeff() < 2e-3);
      CHECK(std::abs(m.integrate(psi1)) < 1e-12);
    }
  }

  TEST_CASE("psi1 follows the curvature direction") {
    const SectionMesh m(SectionData::planar(32, RadiusLaw::constant(1.0), 0.0, 0.05, Vec2(0.0, 2.0)), 32);
    const Vector psi1 = solve_psi1(m, solve_psi0(m));
    const Vector exact = m.sample([](double e, double t) { return 0.75 * e * (1 - e * e) * std::sin(t); });
    CHECK((psi1 - exact).cwiseAbs().maxCoeff() < 2e-3);
  }

  TEST_CASE("q1 vanishes with G1 and q0 solves the unperturbed Reynolds problem") {
    std::vector<double> s, g0, g1;
    for (int i = 0; i <= 10; ++i) {
      s.push_back(i / 10.0);
      g0.push_back(pi / 2);
      g1.push_back(0.0);
    }
    const PerturbationPressure q = solve_q01(s, g0, g1, 1.0, 0.5);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(q.q1[i] == 0.0);
      CHECK(q.q0[i] == doctest::Approx(0.5 + 8 * (1 - s[i]) / pi));
    }
  }

  TEST_CASE("study needs three slenderness values") {
    PerturbationStudy study;
    study.geometry = [](double h, int n) {
      return PipeGeometry(Centerline::circular_arc(1.0, 4), RadiusLaw::constant(1.0), h, n);
    };
    study.h_values = {0.1, 0.05};
    CHECK_THROWS_AS(compare_full_vs_perturbative(study), ConfigError);
  }

  TEST_CASE("two-term expansion error is second order on a coarse torus family") {
    PerturbationStudy study;
    study.geometry = [](double h, int n) {
      return PipeGeometry(Centerline::circular_arc(1.0, 8), RadiusLaw::constant(1.0), h, n);
    };
    study.h_values = {0.2, 0.1, 0.05};
    study.n_theta = study.n_rho = 16;
    study.max_refinements = 0;
    const PerturbationReport r = compare_full_vs_perturbative(study);
    CHECK(r.rows.size() == 3);
    CHECK(r.slope_g == doctest::Approx(2.0).epsilon(0.1));
    CHECK(r.slope_psi == doctest::Approx(2.0).epsilon(0.1));
    CHECK(r.max_g1_ratio < 1e-10);
  }
}
