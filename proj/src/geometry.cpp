#include "tubeflow/geometry.hpp"

#include <array>

#include <Eigen/Geometry>
#include <fmt/core.h>

#include "tubeflow/spline.hpp"

namespace tubeflow {

namespace {

constexpr double analytic_speed_tolerance = 1e-10;
constexpr double tabulated_speed_tolerance = 1e-6;

CurveJet transform(const CurveJet& jet, const Eigen::Matrix3d& rotation, const Vec3& origin) {
  CurveJet out;
  out.position = rotation * (jet.position - origin);
  out.d1 = rotation * jet.d1;
  out.d2 = rotation * jet.d2;
  out.d3 = rotation * jet.d3;
  out.d4 = rotation * jet.d4;
  return out;
}

Eigen::Matrix3d rotation_to_z(const Vec3& tangent) {
  return Eigen::Quaterniond::FromTwoVectors(tangent.normalized(), Vec3::UnitZ()).toRotationMatrix();
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 8> gl_nodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                            0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> gl_weights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t q = 0; q < gl_nodes.size(); ++q) sum += gl_weights[q] * f(mid + half * gl_nodes[q]);
  return half * sum;
}

// Spline reconstruction of a tabulated curve x(t), t the chord-length parameter.
struct TabulatedCurve {
  std::vector<double> knots;
  std::array<CubicSpline, 3> xyz;
  std::vector<double> cumulative;  // arc length at knots
  double length = 0.0;

  TabulatedCurve(std::vector<double> t, const std::array<std::vector<double>, 3>& coords)
      : knots(std::move(t)),
        xyz{CubicSpline(knots, coords[0]), CubicSpline(knots, coords[1]), CubicSpline(knots, coords[2])} {
    cumulative.assign(knots.size(), 0.0);
    for (std::size_t k = 1; k < knots.size(); ++k)
      cumulative[k] = cumulative[k - 1] + gauss_legendre([&](double t) { return d1(t).norm(); }, knots[k - 1], knots[k]);
    length = cumulative.back();
  }

  Vec3 x(double t) const { return {xyz[0](t), xyz[1](t), xyz[2](t)}; }
  Vec3 d1(double t) const { return {xyz[0].derivative(t), xyz[1].derivative(t), xyz[2].derivative(t)}; }
  Vec3 d2(double t) const {
    return {xyz[0].second_derivative(t), xyz[1].second_derivative(t), xyz[2].second_derivative(t)};
  }

  // Parameter t at which the arc length from the start equals `ell`.
  double invert(double ell) const {
    ell = std::clamp(ell, 0.0, length);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), ell);
    std::size_t k = it == cumulative.begin() ? 0 : static_cast<std::size_t>(it - cumulative.begin()) - 1;
    k = std::min(k, knots.size() - 2);
    double lo = knots[k], hi = knots[k + 1];
    double t = lo + (hi - lo) * (ell - cumulative[k]) / std::max(cumulative[k + 1] - cumulative[k], 1e-300);
    for (int iter = 0; iter < 60; ++iter) {
      const double f = cumulative[k] + gauss_legendre([&](double u) { return d1(u).norm(); }, knots[k], t) - ell;
      if (f > 0) hi = t; else lo = t;
      const double speed = d1(t).norm();
      double next = t - f / speed;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) < 1e-15 * std::max(1.0, std::abs(t))) return next;
      t = next;
    }
    return t;
  }

  // Unit-length arc-length jet; c''' and c'''' by central differences of c''.
  CurveJet jet(double s) const {
    auto second = [&](double sigma, Vec3* position, Vec3* tangent) {
      const double t = invert(sigma * length);
      const Vec3 xp = d1(t), xpp = d2(t);
      const double speed = xp.norm();
      const Vec3 tan = xp / speed;
      if (position) *position = x(t) / length;
      if (tangent) *tangent = tan;
      return Vec3(length * (xpp - xpp.dot(tan) * tan) / (speed * speed));
    };
    CurveJet out;
    out.d2 = second(s, &out.position, &out.d1);
    const double step = 1e-3;
    const double centre = std::clamp(s, 2.0 * step, 1.0 - 2.0 * step);
    const Vec3 m2 = second(centre - 2 * step, nullptr, nullptr);
    const Vec3 m1 = second(centre - step, nullptr, nullptr);
    const Vec3 z0 = second(centre, nullptr, nullptr);
    const Vec3 p1 = second(centre + step, nullptr, nullptr);
    const Vec3 p2 = second(centre + 2 * step, nullptr, nullptr);
    out.d3 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * step);
    out.d4 = (m1 - 2.0 * z0 + p1) / (step * step);
    return out;
  }
};

}  // namespace

// --- Centerline -----------------------------------------------------------------

void Centerline::sample(int intervals) {
  if (intervals < 4) throw GeometryError("centerline needs at least 4 s-intervals");
  samples_.resize(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) samples_[i] = jet_(static_cast<double>(i) / intervals);
}

CurveJet Centerline::evaluate(double s) const { return jet_(s); }

double Centerline::speed_defect() const {
  double worst = 0.0;
  for (const auto& j : samples_) worst = std::max(worst, std::abs(j.d1.norm() - 1.0));
  return worst;
}

double Centerline::normality_defect() const {
  double worst = 0.0;
  for (const auto& j : samples_) worst = std::max(worst, std::abs(j.d2.dot(j.d1)));
  return worst;
}

Centerline Centerline::straight(int intervals) {
  return from_function(
      [](double s) {
        CurveJet j;
        j.position = {0.0, 0.0, s};
        j.d1 = Vec3::UnitZ();
        return j;
      },
      intervals, "straight");
}

Centerline Centerline::circular_arc(double radius, int intervals) {
  if (!(radius > 0.0)) throw GeometryError("arc radius must be positive");
  return from_function(
      [radius](double s) {
        const double a = s / radius, c = std::cos(a), sn = std::sin(a);
        CurveJet j;
        j.position = {radius * (1.0 - c), 0.0, radius * sn};
        j.d1 = {sn, 0.0, c};
        j.d2 = Vec3(c, 0.0, -sn) / radius;
        j.d3 = Vec3(-sn, 0.0, -c) / (radius * radius);
        j.d4 = Vec3(-c, 0.0, sn) / (radius * radius * radius);
        return j;
      },
      intervals, fmt::format("arc(radius={})", radius));
}

Centerline Centerline::helix(double curvature, double torsion, int intervals) {
  const double w2 = curvature * curvature + torsion * torsion;
  if (w2 == 0.0 || curvature == 0.0) {
    Centerline line = straight(intervals);
    line.name_ = fmt::format("helix(curvature={}, torsion={})", curvature, torsion);
    return line;
  }
  const double a = curvature / w2, b = torsion / w2, w = std::sqrt(w2);
  return from_function(
      [a, b, w](double s) {
        const double c = std::cos(w * s), sn = std::sin(w * s);
        CurveJet j;
        j.position = {a * c, a * sn, b * w * s};
        j.d1 = {-a * w * sn, a * w * c, b * w};
        j.d2 = {-a * w * w * c, -a * w * w * sn, 0.0};
        j.d3 = {a * w * w * w * sn, -a * w * w * w * c, 0.0};
        j.d4 = {a * w * w * w * w * c, a * w * w * w * w * sn, 0.0};
        return j;
      },
      intervals, fmt::format("helix(curvature={}, torsion={})", curvature, torsion));
}

Centerline Centerline::from_function(Evaluator jet, int intervals, std::string name) {
  Centerline curve;
  curve.name_ = std::move(name);
  const CurveJet start = jet(0.0);
  if (std::abs(start.d1.norm() - 1.0) > analytic_speed_tolerance)
    throw GeometryError(fmt::format("centerline '{}' is not unit speed at s=0 (|c'|={})", curve.name_, start.d1.norm()));
  const Eigen::Matrix3d rotation = rotation_to_z(start.d1);
  curve.rotated_ = !rotation.isIdentity(1e-14);
  const Vec3 origin = start.position;
  curve.jet_ = [jet = std::move(jet), rotation, origin](double s) { return transform(jet(s), rotation, origin); };
  curve.sample(intervals);
  if (curve.speed_defect() > analytic_speed_tolerance)
    throw GeometryError(fmt::format("centerline '{}' is not arc-length parameterized (speed defect {:.3e})",
                                    curve.name_, curve.speed_defect()));
  return curve;
}

Centerline Centerline::tabulated(std::span<const Vec3> points, int intervals) {
  if (points.size() < 4) throw GeometryError("tabulated centerline needs at least 4 points");
  std::vector<double> t(points.size(), 0.0);
  std::array<std::vector<double>, 3> coords;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k > 0) {
      const double chord = (points[k] - points[k - 1]).norm();
      if (chord <= 0.0) throw GeometryError("tabulated centerline has repeated points");
      t[k] = t[k - 1] + chord;
    }
    for (int d = 0; d < 3; ++d) coords[d].push_back(points[k][d]);
  }
  auto spline = std::make_shared<const TabulatedCurve>(std::move(t), coords);

  Centerline curve;
  curve.analytic_ = false;
  curve.name_ = "tabulated";
  curve.input_length_ = spline->length;
  const CurveJet start = spline->jet(0.0);
  const Eigen::Matrix3d rotation = rotation_to_z(start.d1);
  curve.rotated_ = !rotation.isIdentity(1e-14);
  const Vec3 origin = start.position;
  curve.jet_ = [spline, rotation, origin](double s) { return transform(spline->jet(s), rotation, origin); };
  curve.sample(intervals);
  if (curve.speed_defect() > tabulated_speed_tolerance)
    throw GeometryError("tabulated centerline reparameterization failed to reach unit speed");
  if (std::abs(spline->length - 1.0) > 1e-12)
    curve.warnings_.push_back(fmt::format("tabulated centerline of length {} scaled to unit length", spline->length));
  if (curve.rotated_) curve.warnings_.push_back("tabulated centerline rotated so that c'(0) = (0,0,1)");
  curve.warnings_.push_back("c'''' of a tabulated centerline comes from a cubic spline and is low accuracy");
  return curve;
}

// --- FrameField -----------------------------------------------------------------

namespace {

double frame_defect(const Vec3& e1, const Vec3& e2, const Vec3& t) {
  return std::max({std::abs(e1.squaredNorm() - 1.0), std::abs(e2.squaredNorm() - 1.0), std::abs(e1.dot(e2)),
                   std::abs(e1.dot(t)), std::abs(e2.dot(t))});
}

}  // namespace

FrameField FrameField::transport(const Centerline& curve, int n_theta, double drift_tolerance) {
  if (n_theta < 4) throw GeometryError("need at least 4 theta samples");
  FrameField frame;
  frame.n_theta_ = n_theta;
  frame.n_s_ = curve.size();
  frame.e1_.resize(static_cast<std::size_t>(n_theta) * curve.size());
  frame.e2_.resize(frame.e1_.size());

  const int n = curve.intervals();
  const double h = curve.spacing();
  std::vector<CurveJet> mid(n);
  for (int i = 0; i < n; ++i) mid[i] = curve.evaluate(curve.s(i) + 0.5 * h);

  auto rhs = [](const CurveJet& c, const Vec3& e) -> Vec3 { return -c.d2.dot(e) * c.d1; };

  for (int j = 0; j < n_theta; ++j) {
    const double th = frame.theta(j);
    Vec3 e1(std::cos(th), std::sin(th), 0.0);
    Vec3 e2(-std::sin(th), std::cos(th), 0.0);
    frame.e1_[frame.index(j, 0)] = e1;
    frame.e2_[frame.index(j, 0)] = e2;
    for (int i = 0; i < n; ++i) {
      const CurveJet& a = curve[i];
      const CurveJet& m = mid[i];
      const CurveJet& b = curve[i + 1];
      auto step = [&](const Vec3& e) {
        const Vec3 k1 = rhs(a, e);
        const Vec3 k2 = rhs(m, e + 0.5 * h * k1);
        const Vec3 k3 = rhs(m, e + 0.5 * h * k2);
        const Vec3 k4 = rhs(b, e + h * k3);
        return Vec3(e + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      };
      e1 = step(e1);
      e2 = step(e2);
      const Vec3& t = b.d1;
      const double drift = frame_defect(e1, e2, t);
      frame.stats_.max_drift = std::max(frame.stats_.max_drift, drift);
      if (drift > drift_tolerance)
        throw GeometryError(fmt::format("frame transport drift {:.3e} exceeds {:.1e}; refine the s-grid", drift,
                                        drift_tolerance),
                            i + 1);
      e1 -= e1.dot(t) * t;
      e1.normalize();
      e2 -= e2.dot(t) * t + e2.dot(e1) * e1;
      e2.normalize();
      frame.stats_.max_defect = std::max(frame.stats_.max_defect, frame_defect(e1, e2, t));
      if (e1.cross(e2).dot(t) <= 0.0) throw GeometryError("transported frame lost right-handedness", i + 1);
      frame.e1_[frame.index(j, i + 1)] = e1;
      frame.e2_[frame.index(j, i + 1)] = e2;
    }
  }
  return frame;
}

// --- RadiusLaw ------------------------------------------------------------------

RadiusLaw RadiusLaw::constant(double r0) {
  if (!(r0 > 0.0)) throw GeometryError("radius must be positive");
  RadiusLaw law;
  law.name_ = fmt::format("constant({})", r0);
  law.eval_ = [r0](double, double) { return RadiusJet{r0, 0.0, 0.0, 0.0}; };
  law.rigidity_ = [r0](double) -> std::optional<double> { return 0.5 * pi * std::pow(r0, 4); };
  return law;
}

RadiusLaw RadiusLaw::modal(const ModalRadius& p) {
  RadiusLaw law;
  law.name_ = fmt::format("modal(r0={}, a={}, k={}, phase={}, b={}, c={}, m={})", p.r0, p.a, p.k, p.phase, p.b, p.c,
                          p.m);
  law.eval_ = [p](double theta, double s) {
    const double w = 2.0 * pi * p.k;
    const double arg = w * s + p.phase;
    const double amp = p.b + p.c * s;
    RadiusJet r;
    r.value = p.r0 + p.a * std::sin(arg) + amp * std::cos(p.m * theta);
    r.ds = w * p.a * std::cos(arg) + p.c * std::cos(p.m * theta);
    r.dss = -w * w * p.a * std::sin(arg);
    r.dtheta = -p.m * amp * std::sin(p.m * theta);
    return r;
  };
  if (p.b == 0.0 && p.c == 0.0) {
    law.rigidity_ = [p](double s) -> std::optional<double> {
      return 0.5 * pi * std::pow(p.r0 + p.a * std::sin(2.0 * pi * p.k * s + p.phase), 4);
    };
  }
  return law;
}

RadiusLaw RadiusLaw::ellipse(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
  RadiusLaw law;
  law.name_ = fmt::format("ellipse(a={}, b={})", a, b);
  law.eval_ = [a, b](double theta, double) {
    const double c = std::cos(theta), sn = std::sin(theta);
    const double d = b * b * c * c + a * a * sn * sn;
    RadiusJet r;
    r.value = a * b / std::sqrt(d);
    r.dtheta = -a * b * (a * a - b * b) * sn * c / (d * std::sqrt(d));
    return r;
  };
  law.rigidity_ = [a, b](double) -> std::optional<double> {
    return pi * std::pow(a, 3) * std::pow(b, 3) / (a * a + b * b);
  };
  return law;
}

RadiusLaw RadiusLaw::tabulated(int n_theta, int n_s, std::vector<double> values) {
  if (n_theta < 4 || n_s < 4) throw GeometryError("radius table needs at least 4x4 samples");
  if (values.size() != static_cast<std::size_t>(n_theta) * n_s)
    throw GeometryError("radius table size does not match its dimensions");
  for (double v : values)
    if (!(v > 0.0)) throw GeometryError("radius table contains non-positive values");

  std::vector<double> s_knots(n_s);
  for (int k = 0; k < n_s; ++k) s_knots[k] = static_cast<double>(k) / (n_s - 1);
  auto rows = std::make_shared<std::vector<CubicSpline>>();
  for (int j = 0; j < n_theta; ++j) {
    std::vector<double> column(n_s);
    for (int k = 0; k < n_s; ++k) column[k] = values[static_cast<std::size_t>(k) * n_theta + j];
    rows->emplace_back(s_knots, column);
  }
  RadiusLaw law;
  law.name_ = fmt::format("table({}x{})", n_s, n_theta);
  law.eval_ = [rows, n_theta](double theta, double s) {
    std::vector<double> th(n_theta + 1), r(n_theta + 1), rs(n_theta + 1), rss(n_theta + 1);
    for (int j = 0; j <= n_theta; ++j) {
      const CubicSpline& row = (*rows)[j % n_theta];
      th[j] = 2.0 * pi * j / n_theta;
      r[j] = row(s);
      rs[j] = row.derivative(s);
      rss[j] = row.second_derivative(s);
    }
    const double t = theta - 2.0 * pi * std::floor(theta / (2.0 * pi));
    const CubicSpline pr(th, r, CubicSpline::Ends::periodic);
    const CubicSpline ps(th, rs, CubicSpline::Ends::periodic);
    const CubicSpline pss(th, rss, CubicSpline::Ends::periodic);
    return RadiusJet{pr(t), ps(t), pss(t), pr.derivative(t)};
  };
  return law;
}

RadiusLaw RadiusLaw::from_function(Evaluator f, std::string name) {
  RadiusLaw law;
  law.eval_ = std::move(f);
  law.name_ = std::move(name);
  return law;
}

std::optional<double> RadiusLaw::straight_rigidity(double s) const {
  if (!rigidity_) return std::nullopt;
  return rigidity_(s);
}

// --- SectionData ----------------------------------------------------------------

SectionData SectionData::planar(int n_theta, const RadiusLaw& radius, double s, double slenderness, Vec2 curvature) {
  SectionData d;
  d.s = s;
  d.slenderness = slenderness;
  d.curvature = curvature;
  d.radius.resize(n_theta);
  d.curv.resize(n_theta);
  d.curv_ds.assign(n_theta, 0.0);
  d.curv_dss.assign(n_theta, 0.0);
  for (int j = 0; j < n_theta; ++j) {
    const double th = d.theta(j);
    d.radius[j] = radius(th, s);
    d.curv[j] = curvature.x() * std::cos(th) + curvature.y() * std::sin(th);
  }
  return d;
}

// --- PipeGeometry ---------------------------------------------------------------

PipeGeometry::PipeGeometry(Centerline curve, RadiusLaw radius, double slenderness, int n_theta)
    : curve_(std::make_shared<const Centerline>(std::move(curve))),
      radius_(std::make_shared<const RadiusLaw>(std::move(radius))),
      h_(slenderness),
      n_theta_(n_theta) {
  if (!(h_ > 0.0)) throw GeometryError("slenderness h must be positive");
  frame_ = std::make_shared<const FrameField>(FrameField::transport(*curve_, n_theta));
  radii_.resize(static_cast<std::size_t>(n_theta) * stations());
  for (int i = 0; i < stations(); ++i)
    for (int j = 0; j < n_theta; ++j) {
      const RadiusJet r = (*radius_)(theta(j), s(i));
      if (!(r.value > 0.0)) throw GeometryError(fmt::format("radius R={} is not positive", r.value), i);
      radii_[static_cast<std::size_t>(i) * n_theta + j] = r;
    }
}

double PipeGeometry::curvature_e1(int j, int i) const { return centerline()[i].d2.dot(frame_->e1(j, i)); }

ScaleFactor PipeGeometry::scale_factor(double eta, int j, int i) const {
  const double r = radius(j, i).value;
  if (eta < 0.0 || eta > r * (1.0 + 1e-12))
    throw GeometryError(fmt::format("eta={} outside [0, R={}]", eta, r), i);
  const CurveJet& c = centerline()[i];
  const Vec3& e1 = frame_->e1(j, i);
  const double k = c.d2.dot(e1);
  ScaleFactor beta;
  beta.value = 1.0 - h_ * eta * k;
  beta.ds = -h_ * eta * c.d3.dot(e1);
  beta.dss = -h_ * eta * (c.d4.dot(e1) + k * c.d2.squaredNorm());
  if (beta.value <= 0.0)
    throw GeometryError(fmt::format("scale factor beta={} <= 0 at theta={}: the pipe curves into itself", beta.value,
                                    theta(j)),
                        i);
  return beta;
}

Vec3 PipeGeometry::position(double eta, int j, int i) const {
  return centerline()[i].position + h_ * eta * frame_->e1(j, i);
}

SectionData PipeGeometry::section(int i) const {
  const CurveJet& c = centerline()[i];
  SectionData d;
  d.station = i;
  d.s = s(i);
  d.slenderness = h_;
  d.radius.resize(n_theta_);
  d.curv.resize(n_theta_);
  d.curv_ds.resize(n_theta_);
  d.curv_dss.resize(n_theta_);
  const double k2 = c.d2.squaredNorm();
  for (int j = 0; j < n_theta_; ++j) {
    const Vec3& e1 = frame_->e1(j, i);
    d.radius[j] = radius(j, i);
    d.curv[j] = c.d2.dot(e1);
    d.curv_ds[j] = c.d3.dot(e1);
    d.curv_dss[j] = c.d4.dot(e1) + d.curv[j] * k2;
  }
  d.curvature = {c.d2.dot(frame_->e1(0, i)), c.d2.dot(frame_->e2(0, i))};
  d.third = {c.d3.dot(frame_->e1(0, i)), c.d3.dot(frame_->e2(0, i))};
  return d;
}

GeometryReport PipeGeometry::report() const {
  GeometryReport rep;
  rep.slenderness = h_;
  rep.frame = frame_->stats();
  rep.centerline_rotated = curve_->rotated();
  rep.warnings = curve_->warnings();
  rep.min_radius = radii_.front().value;
  rep.min_beta = 1.0;
  for (int i = 0; i < stations(); ++i) {
    const CurveJet& c = centerline()[i];
    rep.lambda = std::max(rep.lambda, h_ * c.d3.norm());
    rep.lambda_star = std::max(rep.lambda_star, h_ * c.d4.norm());
    rep.max_curvature = std::max(rep.max_curvature, c.d2.norm());
    rep.curvature_identity_defect =
        std::max(rep.curvature_identity_defect, std::abs(c.d2.norm() - std::sqrt(std::abs(c.d3.dot(c.d1)))));
    for (int j = 0; j < n_theta_; ++j) {
      const RadiusJet& r = radius(j, i);
      rep.gamma = std::max(rep.gamma, std::abs(r.ds));
      rep.gamma_star = std::max(rep.gamma_star, std::abs(r.dss));
      rep.min_radius = std::min(rep.min_radius, r.value);
      const double beta = 1.0 - h_ * r.value * curvature_e1(j, i);
      if (beta < rep.min_beta) {
        rep.min_beta = beta;
        rep.min_beta_station = i;
      }
    }
  }
  for (int i = 0; i < stations(); ++i) {
    const CurveJet& c = centerline()[i];
    const double bound = std::sqrt(rep.lambda / h_);
    if (c.d2.norm() > bound * (1.0 + 1e-8) + 1e-12) rep.curvature_bound_holds = false;
  }
  rep.lambda_h_small = rep.lambda * h_ <= 0.1;
  rep.valid = rep.min_beta > 0.0 && rep.min_radius > 0.0;
  return rep;
}

void PipeGeometry::certify() const {
  for (int i = 0; i < stations(); ++i)
    for (int j = 0; j < n_theta_; ++j) {
      const double beta = 1.0 - h_ * radius(j, i).value * curvature_e1(j, i);
      if (beta <= 0.0)
        throw GeometryError(fmt::format("scale factor beta={:.6g} <= 0 on the wall at theta={:.6g}, s={:.6g}: "
                                        "the pipe curves into itself",
                                        beta, theta(j), s(i)),
                            i);
    }
}

}  // namespace tubeflow
