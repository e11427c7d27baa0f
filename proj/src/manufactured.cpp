#include "tubeflow/manufactured.hpp"

namespace tubeflow {

namespace {

constexpr double step = 1e-3;

template <class F>
double central(F&& f) {
  return (f(-2.0 * step) - 8.0 * f(-step) + 8.0 * f(step) - f(2.0 * step)) / (12.0 * step);
}

}  // namespace

double partial_y1(const SectionFunction& f, double y1, double y2, double s) {
  return central([&](double d) { return f(y1 + d, y2, s); });
}

double partial_y2(const SectionFunction& f, double y1, double y2, double s) {
  return central([&](double d) { return f(y1, y2 + d, s); });
}

double partial_s(const SectionFunction& f, double y1, double y2, double s) {
  return central([&](double d) { return f(y1, y2, s + d); });
}

ManufacturedPoisson manufactured_poisson(const SectionMesh& mesh, const SectionFunction& psi,
                                         const LinearScaleFactor& beta, Weighting weighting) {
  const double s = mesh.s();
  auto a = [&](double y1, double y2, double t) { return weighting == Weighting::unit ? 1.0 : beta(y1, y2, t); };
  const SectionFunction flux1 = [&](double y1, double y2, double t) { return a(y1, y2, t) * partial_y1(psi, y1, y2, t); };
  const SectionFunction flux2 = [&](double y1, double y2, double t) { return a(y1, y2, t) * partial_y2(psi, y1, y2, t); };
  ManufacturedPoisson out;
  out.exact = mesh.sample_cartesian([&](double y1, double y2) { return psi(y1, y2, s); });
  out.rhs = mesh.sample_cartesian(
      [&](double y1, double y2) { return -(partial_y1(flux1, y1, y2, s) + partial_y2(flux2, y1, y2, s)); });
  return out;
}

ManufacturedStokes manufactured_stokes(const SectionMesh& mesh, const SectionFunction& vx, const SectionFunction& vy,
                                       const SectionFunction& p, const LinearScaleFactor& beta) {
  const double s = mesh.s();
  // -beta^{-1} div'(beta grad' v_c) + d_c p for each Cartesian component c.
  auto momentum = [&](const SectionFunction& v, int c) {
    const SectionFunction f1 = [&](double y1, double y2, double t) { return beta(y1, y2, t) * partial_y1(v, y1, y2, t); };
    const SectionFunction f2 = [&](double y1, double y2, double t) { return beta(y1, y2, t) * partial_y2(v, y1, y2, t); };
    return mesh.sample_cartesian([&](double y1, double y2) {
      const double div = partial_y1(f1, y1, y2, s) + partial_y2(f2, y1, y2, s);
      const double dp = c == 0 ? partial_y1(p, y1, y2, s) : partial_y2(p, y1, y2, s);
      return -div / beta(y1, y2, s) + dp;
    });
  };
  const SectionFunction bx = [&](double y1, double y2, double t) { return beta(y1, y2, t) * vx(y1, y2, t); };
  const SectionFunction by = [&](double y1, double y2, double t) { return beta(y1, y2, t) * vy(y1, y2, t); };

  ManufacturedStokes out;
  out.data.fx = momentum(vx, 0);
  out.data.fy = momentum(vy, 1);
  out.data.g = mesh.sample_cartesian(
      [&](double y1, double y2) { return -(partial_y1(bx, y1, y2, s) + partial_y2(by, y1, y2, s)); });
  out.vx = mesh.sample_cartesian([&](double y1, double y2) { return vx(y1, y2, s); });
  out.vy = mesh.sample_cartesian([&](double y1, double y2) { return vy(y1, y2, s); });
  out.p = mesh.sample_cartesian([&](double y1, double y2) { return p(y1, y2, s); });
  out.p.array() -= mesh.integrate(out.p) / mesh.area();
  return out;
}

DivergenceIdentityInput manufactured_divergence_triple(const SectionMesh& mesh, const SectionFunction& ux, const SectionFunction& uy,
                              const LinearScaleFactor& beta, double broken) {
  const double s = mesh.s();
  const SectionFunction bx = [&](double y1, double y2, double t) { return beta(y1, y2, t) * ux(y1, y2, t); };
  const SectionFunction by = [&](double y1, double y2, double t) { return beta(y1, y2, t) * uy(y1, y2, t); };
  const SectionFunction g = [&](double y1, double y2, double t) {
    const double extra = broken * (1.0 + y1 * y1 + t);
    return -(partial_y1(bx, y1, y2, t) + partial_y2(by, y1, y2, t)) / beta(y1, y2, t) + extra;
  };
  DivergenceIdentityInput in;
  in.ux = mesh.sample_cartesian([&](double y1, double y2) { return ux(y1, y2, s); });
  in.uy = mesh.sample_cartesian([&](double y1, double y2) { return uy(y1, y2, s); });
  in.dux = mesh.sample_cartesian([&](double y1, double y2) { return partial_s(ux, y1, y2, s); });
  in.duy = mesh.sample_cartesian([&](double y1, double y2) { return partial_s(uy, y1, y2, s); });
  in.g = mesh.sample_cartesian([&](double y1, double y2) { return g(y1, y2, s); });
  in.dg = mesh.sample_cartesian([&](double y1, double y2) { return partial_s(g, y1, y2, s); });
  return in;
}

}  // namespace tubeflow
