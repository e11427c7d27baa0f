#include "tubeflow/section.hpp"

#include <array>

#include <fmt/core.h>

namespace tubeflow {

namespace {

using Triplet = Eigen::Triplet<double>;

struct Stencil {
  std::array<int, 3> node{};
  std::array<double, 3> coeff{};
  int size = 0;
  void add(int n, double c) {
    node[size] = n;
    coeff[size] = c;
    ++size;
  }
};

}  // namespace

SectionMesh::SectionMesh(SectionData data, int n_rho) : data_(std::move(data)), n_rho_(n_rho) {
  n_theta_ = data_.n_theta();
  if (n_rho_ < 4) throw NumericalError("cross_section", fmt::format("n_rho={} is below the minimum of 4", n_rho_));
  if (n_theta_ < 4)
    throw NumericalError("cross_section", fmt::format("n_theta={} is below the minimum of 4", n_theta_));
  const int n = nodes();
  beta_.resize(n);
  beta_ds_.resize(n);
  beta_dss_.resize(n);
  ones_ = Vector::Ones(n);
  weights_ = Vector::Zero(n);
  cell_areas_ = Vector::Zero(n);
  const double h = data_.slenderness;
  const double dr = d_rho(), dt = d_theta();
  for (int j = 0; j < n_theta_; ++j) {
    const double r = radius(j);
    if (!(r > 0.0)) throw GeometryError(fmt::format("radius {} at theta={} is not positive", r, theta(j)), station());
    for (int k = 0; k <= n_rho_; ++k) {
      const int i = index(k, j);
      const double e = eta(k, j);
      beta_[i] = 1.0 - h * e * data_.curv[j];
      beta_ds_[i] = -h * e * data_.curv_ds[j];
      beta_dss_[i] = -h * e * data_.curv_dss[j];
      if (beta_[i] <= 0.0)
        throw GeometryError(
            fmt::format("scale factor beta={:.6g} <= 0 at eta={:.6g}, theta={:.6g}", beta_[i], e, theta(j)),
            station());
      const double r2 = r * r;
      if (k == 0) {
        cell_areas_[i] = 0.125 * dr * dr * r2 * dt;
      } else if (k == n_rho_) {
        weights_[i] = 0.5 * dr * dt * rho(k) * r2;
        cell_areas_[i] = (0.5 * dr - 0.125 * dr * dr) * r2 * dt;
      } else {
        weights_[i] = dr * dt * rho(k) * r2;
        cell_areas_[i] = weights_[i];
      }
    }
  }
  build_operators();
}

SectionMesh SectionMesh::build(const PipeGeometry& geometry, int station, int n_rho) {
  return SectionMesh(geometry.section(station), n_rho);
}

Vec2 SectionMesh::point(int k, int j) const {
  const double e = eta(k, j), th = theta(j);
  return {e * std::cos(th), e * std::sin(th)};
}

double SectionMesh::integrate(const Vector& f, Weighting w) const {
  if (w == Weighting::unit) return weights_.dot(f);
  return weights_.dot(beta_.cwiseProduct(f));
}

void SectionMesh::build_operators() {
  const int n = nodes();
  const double dr = d_rho(), dt = d_theta();

  auto rho_stencil = [&](int k, int j) {
    Stencil st;
    if (k == 0) {
      st.add(index(0, j), -1.5 / dr);
      st.add(index(1, j), 2.0 / dr);
      st.add(index(2, j), -0.5 / dr);
    } else if (k == n_rho_) {
      st.add(index(k, j), 1.5 / dr);
      st.add(index(k - 1, j), -2.0 / dr);
      st.add(index(k - 2, j), 0.5 / dr);
    } else {
      st.add(index(k + 1, j), 0.5 / dr);
      st.add(index(k - 1, j), -0.5 / dr);
    }
    return st;
  };

  std::vector<Triplet> drho, gx, gy;
  for (int k = 0; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const Stencil st = rho_stencil(k, j);
      for (int q = 0; q < st.size; ++q) drho.emplace_back(index(k, j), st.node[q], st.coeff[q]);
    }

  // Pole: first-order Cartesian fits on rings 1 and 2 combined by Richardson extrapolation.
  std::vector<std::pair<int, Vec2>> pole_row;
  for (int ring = 1; ring <= 2; ++ring) {
    const double factor = ring == 1 ? 2.0 : -1.0;
    for (int j = 0; j < n_theta_; ++j) {
      const Vec2 dir(std::cos(theta(j)), std::sin(theta(j)));
      const Vec2 c = factor * (2.0 / n_theta_) * dir / eta(ring, j);
      pole_row.emplace_back(index(ring, j), c);
      for (int jj = 0; jj < n_theta_; ++jj) pole_row.emplace_back(index(0, jj), -c / n_theta_);
    }
  }
  for (int j = 0; j < n_theta_; ++j)
    for (const auto& [col, c] : pole_row) {
      gx.emplace_back(index(0, j), col, c.x());
      gy.emplace_back(index(0, j), col, c.y());
    }

  for (int k = 1; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const int row = index(k, j);
      const double r = radius(j), rp = data_.radius[j].dtheta, rh = rho(k);
      const double c = std::cos(theta(j)), sn = std::sin(theta(j));
      // g1 = u_rho / R, g2 = (u_theta - rho R' / R u_rho) / (rho R)
      const Stencil st = rho_stencil(k, j);
      for (int q = 0; q < st.size; ++q) {
        const double g1 = st.coeff[q] / r;
        const double g2 = -(rp / r) * st.coeff[q] / r;
        gx.emplace_back(row, st.node[q], c * g1 - sn * g2);
        gy.emplace_back(row, st.node[q], sn * g1 + c * g2);
      }
      const int jp = (j + 1) % n_theta_, jm = (j + n_theta_ - 1) % n_theta_;
      const double g2 = 0.5 / (dt * rh * r);
      gx.emplace_back(row, index(k, jp), -sn * g2);
      gx.emplace_back(row, index(k, jm), sn * g2);
      gy.emplace_back(row, index(k, jp), c * g2);
      gy.emplace_back(row, index(k, jm), -c * g2);
    }

  d_rho_.resize(n, n);
  d_rho_.setFromTriplets(drho.begin(), drho.end());
  grad_x_.resize(n, n);
  grad_x_.setFromTriplets(gx.begin(), gx.end());
  grad_y_.resize(n, n);
  grad_y_.setFromTriplets(gy.begin(), gy.end());
}

VectorField2 SectionMesh::gradient(const Vector& f) const {
  const Vector gx = grad_x_ * f;
  const Vector gy = grad_y_ * f;
  return to_polar(gx, gy);
}

Vector SectionMesh::divergence(const Vector& wx, const Vector& wy) const {
  Vector out = grad_x_ * wx + grad_y_ * wy;
  unify_pole(out);
  return out;
}

Vector SectionMesh::divergence(const VectorField2& w) const {
  const auto [wx, wy] = to_cartesian(w);
  return divergence(wx, wy);
}

std::pair<Vector, Vector> SectionMesh::to_cartesian(const VectorField2& w) const {
  Vector wx(nodes()), wy(nodes());
  for (int k = 0; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const int i = index(k, j);
      const double c = std::cos(theta(j)), sn = std::sin(theta(j));
      wx[i] = c * w.first[i] - sn * w.second[i];
      wy[i] = sn * w.first[i] + c * w.second[i];
    }
  unify_pole(wx);
  unify_pole(wy);
  return {std::move(wx), std::move(wy)};
}

VectorField2 SectionMesh::to_polar(const Vector& wx, const Vector& wy) const {
  VectorField2 w{Vector(nodes()), Vector(nodes())};
  for (int k = 0; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const int i = index(k, j);
      const double c = std::cos(theta(j)), sn = std::sin(theta(j));
      w.first[i] = c * wx[i] + sn * wy[i];
      w.second[i] = -sn * wx[i] + c * wy[i];
    }
  return w;
}

Vector SectionMesh::sample(const std::function<double(double, double)>& f) const {
  Vector out(nodes());
  for (int k = 0; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) out[index(k, j)] = f(eta(k, j), theta(j));
  return out;
}

Vector SectionMesh::sample_cartesian(const std::function<double(double, double)>& f) const {
  Vector out(nodes());
  for (int k = 0; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const Vec2 y = point(k, j);
      out[index(k, j)] = f(y.x(), y.y());
    }
  return out;
}

void SectionMesh::unify_pole(Vector& f) const {
  const double mean = f.head(n_theta_).mean();
  f.head(n_theta_).setConstant(mean);
}

// --- DofMap -----------------------------------------------------------------------

DofMap::DofMap(const SectionMesh& mesh, bool include_boundary)
    : n_rho_(mesh.n_rho()), n_theta_(mesh.n_theta()), include_boundary_(include_boundary) {
  size_ = 1 + (n_rho_ - 1) * n_theta_ + (include_boundary ? n_theta_ : 0);
}

int DofMap::operator()(int k, int j) const {
  if (k == 0) return 0;
  if (k == n_rho_ && !include_boundary_) return -1;
  return 1 + (k - 1) * n_theta_ + j;
}

Vector DofMap::restrict(const Vector& nodal) const {
  Vector out(size_);
  out[0] = nodal.head(n_theta_).mean();
  for (int k = 1; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const int d = (*this)(k, j);
      if (d >= 0) out[d] = nodal[k * n_theta_ + j];
    }
  return out;
}

Vector DofMap::prolong(const Vector& dofs) const {
  Vector out = Vector::Zero((n_rho_ + 1) * n_theta_);
  for (int k = 0; k <= n_rho_; ++k)
    for (int j = 0; j < n_theta_; ++j) {
      const int d = (*this)(k, j);
      if (d >= 0) out[k * n_theta_ + j] = dofs[d];
    }
  return out;
}

// --- energy operator -------------------------------------------------------------------

SparseMatrix assemble_energy_operator(const SectionMesh& mesh, const Vector& coefficient, const DofMap& dofs) {
  const int nr = mesh.n_rho(), nt = mesh.n_theta();
  const double dr = mesh.d_rho(), dt = mesh.d_theta();
  const double w = 0.25 * dr * dt;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(nr) * nt * 16);

  for (int k = 0; k < nr; ++k)
    for (int j = 0; j < nt; ++j) {
      const int jp = (j + 1) % nt;
      // Local nodes: 0 = (k, j), 1 = (k+1, j), 2 = (k, jp), 3 = (k+1, jp).
      const std::array<int, 4> dof = {dofs(k, j), dofs(k + 1, j), dofs(k, jp), dofs(k + 1, jp)};
      Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const int jc = b == 0 ? j : jp;
          const double rho = mesh.rho(k + a);
          const double r = mesh.radius(jc), rp = mesh.data().radius[jc].dtheta / r;
          const double c = coefficient[mesh.index(k + a, jc)];
          Eigen::Vector4d dr_vec = Eigen::Vector4d::Zero(), dt_vec = Eigen::Vector4d::Zero();
          dr_vec[b == 0 ? 1 : 3] = 1.0 / dr;
          dr_vec[b == 0 ? 0 : 2] = -1.0 / dr;
          dt_vec[a == 0 ? 2 : 3] = 1.0 / dt;
          dt_vec[a == 0 ? 0 : 1] = -1.0 / dt;
          const double a11 = c * rho * (1.0 + rp * rp);
          local += w * a11 * dr_vec * dr_vec.transpose();
          if (rho > 0.0) {
            const double a12 = -c * rp, a22 = c / rho;
            local += w * a12 * (dr_vec * dt_vec.transpose() + dt_vec * dr_vec.transpose());
            local += w * a22 * dt_vec * dt_vec.transpose();
          }
        }
      for (int p = 0; p < 4; ++p) {
        if (dof[p] < 0) continue;
        for (int q = 0; q < 4; ++q)
          if (dof[q] >= 0 && local(p, q) != 0.0) triplets.emplace_back(dof[p], dof[q], local(p, q));
      }
    }
  SparseMatrix K(dofs.size(), dofs.size());
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

// --- s-derivatives ---------------------------------------------------------------------

std::vector<Vector> s_derivative_reference(const std::vector<Vector>& fields, double ds) {
  const int n = static_cast<int>(fields.size());
  if (n < 3) throw NumericalError("cross_section", "s-derivative needs at least 3 stations");
  std::vector<Vector> out(n);
  for (int i = 0; i < n; ++i) {
    if (i == 0)
      out[i] = (-3.0 * fields[0] + 4.0 * fields[1] - fields[2]) / (2.0 * ds);
    else if (i == n - 1)
      out[i] = (3.0 * fields[n - 1] - 4.0 * fields[n - 2] + fields[n - 3]) / (2.0 * ds);
    else
      out[i] = (fields[i + 1] - fields[i - 1]) / (2.0 * ds);
  }
  return out;
}

std::vector<Vector> s_derivative_fixed_eta(const std::vector<SectionMesh>& meshes, const std::vector<Vector>& fields,
                                           double ds) {
  if (meshes.size() != fields.size()) throw NumericalError("cross_section", "station count mismatch");
  std::vector<Vector> out = s_derivative_reference(fields, ds);
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const SectionMesh& m = meshes[i];
    const Vector dr = m.d_rho_operator() * fields[i];
    for (int k = 0; k <= m.n_rho(); ++k)
      for (int j = 0; j < m.n_theta(); ++j) {
        const int idx = m.index(k, j);
        out[i][idx] -= m.rho(k) * m.data().radius[j].ds / m.radius(j) * dr[idx];
      }
  }
  return out;
}

}  // namespace tubeflow
