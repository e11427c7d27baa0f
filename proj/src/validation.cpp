#include "tubeflow/validation.hpp"

#include "tubeflow/manufactured.hpp"
#include "tubeflow/perturbation.hpp"

namespace tubeflow {

namespace {

class Battery {
 public:
  explicit Battery(double scale) : scale_(scale) {}

  void at_most(std::string name, std::string description, double value, double tolerance) {
    add(std::move(name), std::move(description), value, tolerance * scale_, true);
  }
  void at_least(std::string name, std::string description, double value, double bound) {
    add(std::move(name), std::move(description), value, bound / scale_, false);
  }
  std::vector<ValidationCheck> take() { return std::move(checks_); }

 private:
  void add(std::string name, std::string description, double value, double threshold, bool upper) {
    ValidationCheck c{std::move(name), std::move(description), value, threshold, upper, false};
    c.passed = upper ? value <= threshold : value >= threshold;
    checks_.push_back(std::move(c));
  }

  double scale_;
  std::vector<ValidationCheck> checks_;
};

SectionMesh disk_mesh(int n, double h = 0.05, Vec2 curvature = Vec2::Zero()) {
  return SectionMesh(SectionData::planar(n, RadiusLaw::constant(1.0), 0.0, h, curvature), n);
}

}  // namespace

std::vector<ValidationCheck> run_validation(double tolerance_scale, int threads) {
  Battery battery(tolerance_scale);
  constexpr int n = 64;

  {
    const SectionMesh mesh = disk_mesh(n);
    const PrandtlSolution sol = solve_prandtl(mesh);
    battery.at_most("disk-rigidity", "relative error of G against pi/2 on the unit disk",
                    std::abs(sol.g_bulk - pi / 2) / (pi / 2), 1e-3);
    battery.at_most("disk-centre", "error of psi(0) against 1/2 on the unit disk", std::abs(sol.psi[0] - 0.5), 1e-3);
    battery.at_most("energy-disk", "relative gap between 2 int psi and int beta |grad psi|^2, disk",
                    sol.energy_defect(), 1e-3);
  }
  {
    const SectionMesh mesh(SectionData::planar(n, RadiusLaw::modal({1.0, 0.0, 1.0, 0.0, 0.2, 0.0, 1}), 0.0, 0.05), n);
    battery.at_most("energy-perturbed-radius", "energy identity on R = 1 + 0.2 cos(theta)",
                    solve_prandtl(mesh).energy_defect(), 1e-3);
  }
  {
    const SectionMesh mesh = disk_mesh(n, 0.05, Vec2(1.0, 0.0));
    battery.at_most("energy-torus", "energy identity on a torus section, h = 0.05", solve_prandtl(mesh).energy_defect(),
                    1e-3);
    const Vector psi0 = solve_psi0(mesh);
    const Vector psi1 = solve_psi1(mesh, psi0);
    const Vector exact = mesh.sample([](double e, double t) { return 0.375 * e * (1 - e * e) * std::cos(t); });
    battery.at_most("psi1-closed-form", "max error of psi1 against (3/8) eta (1 - eta^2) cos(theta)",
                    (psi1 - exact).cwiseAbs().maxCoeff(), 1e-3);
  }

  // Straight pipe with a breathing circular section: G varies with s, beta = 1.
  {
    const PipeGeometry geometry(Centerline::straight(32), RadiusLaw::modal({1.0, 0.3, 1.0, 0.0, 0.0, 0.0, 1}), 0.05,
                                32);
    const RigidityProfile rigidity = rigidity_profile(geometry, 32, threads);
    const PrandtlSDerivatives deriv = prandtl_s_derivatives(rigidity);
    const double flux = 1.0;
    const PressureProfile closed = solve_reynolds(rigidity.s, rigidity.g, flux, 0.0, deriv.dg, deriv.d2g);
    const PressureProfile fd = solve_reynolds_fd(rigidity.s, rigidity.g, flux, 0.0);
    battery.at_most("flux-constancy-fd", "max deviation of the face flux from F0, conservative route",
                    fd.flux_defect(), 1e-10);
    battery.at_most("flux-constancy-closed", "max deviation of -G p0'/4 from F0, closed-form route",
                    closed.flux_defect(), 1e-12);

    double flux_law = 0.0;
    for (std::size_t i = 0; i < rigidity.s.size(); ++i) {
      const Vector v3 = longitudinal_velocity(rigidity.solutions[i].psi, closed.dp[i]);
      flux_law = std::max(flux_law, std::abs(section_flux(rigidity.meshes[i], v3) - flux) / flux);
    }
    battery.at_most("flux-law", "max relative deviation of the section flux of v3 from F0", flux_law, 1e-6);

    const LongitudinalProfile lon = longitudinal_profile(rigidity, deriv, closed);
    double consistent = 0.0, wrong = 0.0;
    for (std::size_t i = 1; i + 1 < rigidity.s.size(); ++i) {
      const SectionMesh& mesh = rigidity.meshes[i];
      const CompatibilityCheck c = check_compatibility(mesh, lon.dv3[i]);
      consistent = std::max(consistent, std::abs(c.integral) / c.norm);
      // Pressure of a flux growing along the pipe: F(s) = F0 (1 + s / 2).
      const double s = rigidity.s[i];
      const double dp = closed.dp[i] * (1.0 + 0.5 * s);
      const double d2p = closed.d2p[i] * (1.0 + 0.5 * s) + 0.5 * closed.dp[i];
      const Vector dv3 = -0.5 * (deriv.dpsi[i] * dp + rigidity.solutions[i].psi * d2p);
      const CompatibilityCheck w = check_compatibility(mesh, dv3);
      wrong = std::max(wrong, std::abs(w.integral) / w.norm);
    }
    battery.at_most("compatibility", "max |int ds v3| / |ds v3| for consistent Reynolds data", consistent, 1e-6);
    battery.at_least("compatibility-wrong-flux", "same ratio for a pressure with non-constant flux", wrong, 1e-3);
  }

  // Divergence identity of the s-differentiated section problem on a varying-radius torus.
  {
    const ModalRadius radius{1.0, 0.0, 1.0, 0.0, 0.2, 0.06, 1};
    const LinearScaleFactor beta{0.1, [](double) { return Vec2(1.0, 0.0); }};
    const SectionFunction ux = [](double y1, double y2, double s) { return std::cos(y1 + s) * (1 + y2 * s); };
    const SectionFunction uy = [](double y1, double y2, double s) { return y1 * y2 + s * s * y2; };
    std::vector<DivergenceIdentityResidual> residuals;
    for (int m : {32, 64}) {
      const PipeGeometry geometry(Centerline::circular_arc(1.0, 40), RadiusLaw::modal(radius), 0.1, m);
      const SectionMesh mesh = SectionMesh::build(geometry, 20, m);
      residuals.push_back(check_divergence_identity(mesh, manufactured_divergence_triple(mesh, ux, uy, beta)));
      if (m == 32) {
        const DivergenceIdentityResidual broken = check_divergence_identity(mesh, manufactured_divergence_triple(mesh, ux, uy, beta, 1.0));
        battery.at_least("divergence-identity-control", "broken-triple residual over consistent residual",
                         std::abs(broken.sum()) / std::abs(residuals.front().sum()), 1e3);
      }
    }
    const double quadrature = std::abs(residuals[0].area - residuals[1].area);
    battery.at_most("divergence-identity", "identity residual over the quadrature error estimate",
                    std::abs(residuals[0].sum()) / quadrature, 10.0);
  }
  return battery.take();
}

}  // namespace tubeflow
