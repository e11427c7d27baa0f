#include "tubeflow/reynolds.hpp"

#include <fmt/core.h>

#include "tubeflow/spline.hpp"

namespace tubeflow {

namespace {

void check_profile(std::span<const double> s, std::span<const double> g) {
  if (s.size() != g.size()) throw NumericalError("reynolds", "s-grid and G profile differ in length");
  if (s.size() < 4) throw NumericalError("reynolds", "need at least 4 stations");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(g[i] > 0.0))
      throw NumericalError("reynolds", fmt::format("torsional rigidity G={} is not positive", g[i]),
                           static_cast<int>(i));
}

}  // namespace

double PressureProfile::flux_defect() const {
  double worst = 0.0;
  for (double f : flux) worst = std::max(worst, std::abs(f - inlet_flux));
  return worst;
}

PressureProfile solve_reynolds(std::span<const double> s, std::span<const double> g, double inlet_flux,
                               double outlet_pressure, std::span<const double> dg, std::span<const double> d2g) {
  check_profile(s, g);
  const std::size_t n = s.size();
  std::vector<double> inverse(n);
  for (std::size_t i = 0; i < n; ++i) inverse[i] = 1.0 / g[i];
  const CubicSpline spline(s, inverse);

  PressureProfile out;
  out.s.assign(s.begin(), s.end());
  out.inlet_flux = inlet_flux;
  out.outlet_pressure = outlet_pressure;
  const double f4 = 4.0 * inlet_flux;
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = g[i];
    const double gs = dg.empty() ? 0.0 : dg[i];
    const double gss = d2g.empty() ? 0.0 : d2g[i];
    out.p.push_back(i + 1 == n ? outlet_pressure : outlet_pressure + f4 * spline.integral(s[i], s.back()));
    out.dp.push_back(-f4 / gi);
    out.d2p.push_back(f4 * gs / (gi * gi));
    out.d3p.push_back(f4 * (gss / (gi * gi) - 2.0 * gs * gs / (gi * gi * gi)));
    out.flux.push_back(-0.25 * gi * out.dp.back());
  }
  return out;
}

PressureProfile solve_reynolds_fd(std::span<const double> s, std::span<const double> g, double inlet_flux,
                                  double outlet_pressure) {
  check_profile(s, g);
  const std::size_t n = s.size();
  std::vector<double> face(n - 1), ds(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    face[i] = 0.5 * (g[i] + g[i + 1]);
    ds[i] = s[i + 1] - s[i];
  }
  // Rows: 0 flux condition, 1..n-2 conservation, n-1 Dirichlet. Thomas algorithm.
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
  diag[0] = face[0] / ds[0];
  upper[0] = -face[0] / ds[0];
  rhs[0] = 4.0 * inlet_flux;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = face[i - 1] / ds[i - 1], b = face[i] / ds[i];
    lower[i] = -a;
    diag[i] = a + b;
    upper[i] = -b;
  }
  diag[n - 1] = 1.0;
  rhs[n - 1] = outlet_pressure;
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw NumericalError("reynolds", "singular tridiagonal system", static_cast<int>(i));
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> p(n);
  p[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) p[i] = (rhs[i] - upper[i] * p[i + 1]) / diag[i];

  PressureProfile out;
  out.s.assign(s.begin(), s.end());
  out.inlet_flux = inlet_flux;
  out.outlet_pressure = outlet_pressure;
  out.p = p;
  for (std::size_t i = 0; i + 1 < n; ++i) out.flux.push_back(-0.25 * face[i] * (p[i + 1] - p[i]) / ds[i]);
  for (std::size_t i = 0; i < n; ++i) {
    double d;
    if (i == 0)
      d = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (s[2] - s[0]);
    else if (i + 1 == n)
      d = (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (s[n - 1] - s[n - 3]);
    else
      d = (p[i + 1] - p[i - 1]) / (s[i + 1] - s[i - 1]);
    out.dp.push_back(d);
  }
  out.d2p.assign(n, 0.0);
  out.d3p.assign(n, 0.0);
  return out;
}

Vector longitudinal_velocity(const Vector& psi, double dp) { return -0.5 * dp * psi; }

double section_flux(const SectionMesh& mesh, const Vector& v3) { return mesh.integrate(v3); }

PressureBounds pressure_derivative_bounds(const PressureProfile& p, const GeometryReport& report, double min_g) {
  PressureBounds b;
  for (std::size_t i = 0; i < p.s.size(); ++i) {
    b.max_dp = std::max(b.max_dp, std::abs(p.dp[i]));
    b.max_d2p = std::max(b.max_d2p, std::abs(p.d2p[i]));
    b.max_d3p = std::max(b.max_d3p, std::abs(p.d3p[i]));
  }
  b.dp_bound = 4.0 * std::abs(p.inlet_flux) / min_g;
  b.first_scale = report.lambda + report.gamma;
  b.second_scale = report.lambda_star + report.gamma_star +
                   std::pow(report.lambda, 1.5) / std::sqrt(report.slenderness) + report.gamma * report.gamma;
  if (b.first_scale > 0.0) b.d2p_ratio = b.max_d2p / b.first_scale;
  if (b.second_scale > 0.0) b.d3p_ratio = b.max_d3p / b.second_scale;
  return b;
}

}  // namespace tubeflow
