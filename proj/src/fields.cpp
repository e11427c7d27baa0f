#include "tubeflow/fields.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>

namespace tubeflow {

double cutoff(double s, double h) {
  auto ramp = [h](double d) {
    if (d <= h) return 0.0;
    if (d >= 2.0 * h) return 1.0;
    const double t = (d - h) / h;
    return t * t * (3.0 - 2.0 * t);
  };
  return std::min(ramp(s), ramp(1.0 - s));
}

FlowField assemble(const PipeGeometry& geometry, const RigidityProfile& rigidity, const PressureProfile& pressure,
                   const std::vector<TransverseSolution>& transverse, const AssemblyOptions& options) {
  const int n_s = geometry.stations();
  if (static_cast<int>(rigidity.meshes.size()) != n_s || static_cast<int>(pressure.p.size()) != n_s)
    throw NumericalError("fields", "station counts of geometry, rigidity and pressure differ");
  const bool with_transverse = options.transverse && !transverse.empty();
  if (with_transverse && static_cast<int>(transverse.size()) != n_s)
    throw NumericalError("fields", "station count of the transverse profile differs");

  const SectionMesh& first = rigidity.meshes.front();
  const double h = geometry.slenderness();
  FlowField field;
  field.slenderness = h;
  field.n_s = n_s;
  field.n_rho = first.n_rho();
  field.n_theta = first.n_theta();
  field.nodes.resize(static_cast<std::size_t>(n_s) * first.nodes());
  field.flux.resize(n_s);

  parallel_for(n_s, options.threads, [&](int i) {
    const SectionMesh& mesh = rigidity.meshes[i];
    const CurveJet& c = geometry.centerline()[i];
    const Vec3& big_e1 = geometry.frame().e1(0, i);
    const Vec3& big_e2 = geometry.frame().e2(0, i);
    const Vector v3 = longitudinal_velocity(rigidity.solutions[i].psi, pressure.dp[i]);
    const double x_cut = options.cutoff ? cutoff(geometry.s(i), h) : 1.0;
    field.flux[i] = h * section_flux(mesh, v3);
    for (int k = 0; k <= mesh.n_rho(); ++k)
      for (int j = 0; j < mesh.n_theta(); ++j) {
        const int n = mesh.index(k, j);
        FieldNode& node = field.nodes[field.index(i, k, j)];
        node.s = geometry.s(i);
        node.theta = mesh.theta(j);
        node.rho = mesh.rho(k);
        node.eta = mesh.eta(k, j);
        const Vec3 x = geometry.position(node.eta, j, i);
        node.x = x.x();
        node.y = x.y();
        node.z = x.z();
        double tx = 0.0, ty = 0.0;
        if (with_transverse) {
          tx = x_cut * transverse[i].vx[n];
          ty = x_cut * transverse[i].vy[n];
        }
        const double ct = std::cos(node.theta), st = std::sin(node.theta);
        node.v1 = ct * tx + st * ty;
        node.v2 = -st * tx + ct * ty;
        node.v3 = v3[n] / h;
        const Vec3 v = node.v3 * c.d1 + tx * big_e1 + ty * big_e2;
        node.vx = v.x();
        node.vy = v.y();
        node.vz = v.z();
        node.p = pressure.p[i] / (h * h * h);
      }
  });
  return field;
}

NormReport norms(const FlowField& field, const std::vector<SectionMesh>& meshes, const FlowField* reference) {
  if (static_cast<int>(meshes.size()) != field.n_s) throw NumericalError("fields", "mesh count differs from field");
  if (reference && (reference->n_s != field.n_s || reference->n_rho != field.n_rho ||
                    reference->n_theta != field.n_theta))
    throw NumericalError("fields", "reference field grid differs");
  const int n_s = field.n_s;
  const double h = field.slenderness;
  const double ds = 1.0 / (n_s - 1);
  const int per = meshes.front().nodes();

  std::array<std::vector<Vector>, 3> comp;
  std::vector<double> pressure(n_s);
  for (auto& c : comp) c.assign(n_s, Vector(per));
  for (int i = 0; i < n_s; ++i) {
    for (int n = 0; n < per; ++n) {
      const FieldNode& a = field.nodes[static_cast<std::size_t>(i) * per + n];
      const FieldNode* b = reference ? &reference->nodes[static_cast<std::size_t>(i) * per + n] : nullptr;
      comp[0][i][n] = a.vx - (b ? b->vx : 0.0);
      comp[1][i][n] = a.vy - (b ? b->vy : 0.0);
      comp[2][i][n] = a.vz - (b ? b->vz : 0.0);
    }
    const std::size_t first = static_cast<std::size_t>(i) * per;
    pressure[i] = field.nodes[first].p - (reference ? reference->nodes[first].p : 0.0);
  }
  std::array<std::vector<Vector>, 3> dcomp;
  for (int c = 0; c < 3; ++c) dcomp[c] = s_derivative_fixed_eta(meshes, comp[c], ds);

  double v2 = 0.0, g2 = 0.0, volume = 0.0, pmean = 0.0;
  std::vector<double> section_volume(n_s);
  for (int i = 0; i < n_s; ++i) {
    const SectionMesh& m = meshes[i];
    const double ws = (i == 0 || i == n_s - 1) ? 0.5 * ds : ds;
    const Vector& beta = m.beta();
    Vector vel = Vector::Zero(per), grad = Vector::Zero(per);
    for (int c = 0; c < 3; ++c) {
      const Vector& f = comp[c][i];
      const Vector gx = m.grad_x() * f, gy = m.grad_y() * f;
      vel += f.cwiseAbs2();
      grad += (gx.cwiseAbs2() + gy.cwiseAbs2()) / (h * h) +
              dcomp[c][i].cwiseAbs2().cwiseQuotient(beta.cwiseAbs2());
    }
    const double area = h * h;  // physical cross-section scale
    v2 += ws * area * m.integrate(vel, Weighting::scale_factor);
    g2 += ws * area * m.integrate(grad, Weighting::scale_factor);
    section_volume[i] = ws * area * m.integrate(Vector::Ones(per), Weighting::scale_factor);
    volume += section_volume[i];
    pmean += section_volume[i] * pressure[i];
  }
  pmean /= volume;
  double p2 = 0.0;
  for (int i = 0; i < n_s; ++i) p2 += section_volume[i] * (pressure[i] - pmean) * (pressure[i] - pmean);

  NormReport r;
  r.velocity = std::sqrt(v2);
  r.gradient = std::sqrt(g2);
  r.pressure = std::sqrt(p2);
  r.combined = h * r.gradient + r.velocity + h * h * r.pressure;
  return r;
}

namespace {

constexpr const char* csv_header = "s,theta,rho,eta,x,y,z,v1,v2,v3,vx,vy,vz,p";

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

void write_csv(const FlowField& field, const std::filesystem::path& path) {
  std::ofstream out = open_for_writing(path);
  out << csv_header << '\n';
  for (const FieldNode& n : field.nodes)
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                       "{:.17g},{:.17g},{:.17g}\n",
                       n.s, n.theta, n.rho, n.eta, n.x, n.y, n.z, n.v1, n.v2, n.v3, n.vx, n.vy, n.vz, n.p);
  if (!out) throw ConfigError(fmt::format("failed writing '{}'", path.string()));
}

FlowField read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line) || line != csv_header)
    throw ConfigError(fmt::format("'{}' is not a field CSV file", path.string()));
  FlowField field;
  std::set<double> s_values, rho_values, theta_values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 14> v{};
    std::istringstream row(line);
    std::string cell;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (!std::getline(row, cell, ',')) throw ConfigError("field CSV row has too few columns");
      v[c] = std::stod(cell);
    }
    field.nodes.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12], v[13]});
    s_values.insert(v[0]);
    theta_values.insert(v[1]);
    rho_values.insert(v[2]);
  }
  field.n_s = static_cast<int>(s_values.size());
  field.n_theta = static_cast<int>(theta_values.size());
  field.n_rho = static_cast<int>(rho_values.size()) - 1;
  if (static_cast<std::size_t>(field.n_s) * (field.n_rho + 1) * field.n_theta != field.nodes.size())
    throw ConfigError("field CSV does not describe a complete grid");
  return field;
}

void write_vtk(const FlowField& field, const std::filesystem::path& path) {
  std::ofstream out = open_for_writing(path);
  const int nt = field.n_theta + 1, nr = field.n_rho + 1, ns = field.n_s;
  const std::size_t count = static_cast<std::size_t>(nt) * nr * ns;
  out << "# vtk DataFile Version 3.0\n";
  out << "tubeflow field, slenderness " << fmt::format("{:.17g}", field.slenderness) << '\n';
  out << "ASCII\nDATASET STRUCTURED_GRID\n";
  out << fmt::format("DIMENSIONS {} {} {}\n", nt, nr, ns);
  out << fmt::format("POINTS {} double\n", count);
  auto for_each = [&](auto&& emit) {
    for (int i = 0; i < ns; ++i)
      for (int k = 0; k < nr; ++k)
        for (int j = 0; j < nt; ++j) emit(field.nodes[field.index(i, k, j % field.n_theta)]);
  };
  for_each([&](const FieldNode& n) { out << fmt::format("{:.17g} {:.17g} {:.17g}\n", n.x, n.y, n.z); });
  out << fmt::format("POINT_DATA {}\n", count);
  out << "VECTORS VELOCITY double\n";
  for_each([&](const FieldNode& n) { out << fmt::format("{:.17g} {:.17g} {:.17g}\n", n.vx, n.vy, n.vz); });
  out << "SCALARS PRESSURE double 1\nLOOKUP_TABLE default\n";
  for_each([&](const FieldNode& n) { out << fmt::format("{:.17g}\n", n.p); });
  if (!out) throw ConfigError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace tubeflow
