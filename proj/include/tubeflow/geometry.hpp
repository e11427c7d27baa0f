#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tubeflow/common.hpp"

namespace tubeflow {

/// Position and the first four arc-length derivatives of the centerline at one s.
struct CurveJet {
  Vec3 position = Vec3::Zero();
  Vec3 d1 = Vec3::Zero();
  Vec3 d2 = Vec3::Zero();
  Vec3 d3 = Vec3::Zero();
  Vec3 d4 = Vec3::Zero();
};

/// Arc-length parameterized centre curve c(s), s in [0, 1], sampled on a uniform grid.
///
/// Every constructor rigidly rotates the curve so that c'(0) = (0, 0, 1) and
/// translates it so that c(0) = 0. Analytic curves must already be unit speed;
/// tabulated curves are reparameterized to arc length and scaled to unit length.
class Centerline {
 public:
  using Evaluator = std::function<CurveJet(double)>;

  static Centerline straight(int intervals);
  /// Planar circular arc of the given radius, bending in the x-z plane.
  static Centerline circular_arc(double radius, int intervals);
  /// Circular helix with constant curvature and torsion.
  static Centerline helix(double curvature, double torsion, int intervals);
  static Centerline from_function(Evaluator jet, int intervals, std::string name = "analytic");
  /// Cubic-spline reconstruction through at least four distinct points.
  static Centerline tabulated(std::span<const Vec3> points, int intervals);

  int intervals() const { return static_cast<int>(samples_.size()) - 1; }
  int size() const { return static_cast<int>(samples_.size()); }
  double spacing() const { return 1.0 / intervals(); }
  double s(int i) const { return i * spacing(); }
  const CurveJet& operator[](int i) const { return samples_[i]; }
  /// Jet at arbitrary s (analytic or spline); used for Runge-Kutta midpoints.
  CurveJet evaluate(double s) const;

  bool analytic() const { return analytic_; }
  bool rotated() const { return rotated_; }
  /// Length of the tabulated input before scaling to unit length (1 for analytic curves).
  double input_length() const { return input_length_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// max_i | |c'(s_i)| - 1 |
  double speed_defect() const;
  /// max_i |c''(s_i) . c'(s_i)|
  double normality_defect() const;

 private:
  Centerline() = default;
  void sample(int intervals);

  Evaluator jet_;
  std::vector<CurveJet> samples_;
  bool analytic_ = true;
  bool rotated_ = false;
  double input_length_ = 1.0;
  std::string name_;
  std::vector<std::string> warnings_;
};

struct FrameTransportStats {
  /// Largest orthonormality defect produced by a single RK4 step before projection.
  double max_drift = 0.0;
  /// Largest orthonormality defect of the stored frames.
  double max_defect = 0.0;
};

/// The frame {e1(theta, s), e2(theta, s), c'(s)} obtained by transporting
/// e1(theta, 0) = (cos, sin, 0), e2(theta, 0) = (-sin, cos, 0) with
/// d/ds e = -(c'' . e) c'.
class FrameField {
 public:
  /// Classical RK4 per theta ray with Gram-Schmidt projection after each step.
  /// Throws GeometryError when a step drifts by more than `drift_tolerance`.
  static FrameField transport(const Centerline& curve, int n_theta, double drift_tolerance = 1e-6);

  int n_theta() const { return n_theta_; }
  int n_s() const { return n_s_; }
  double theta(int j) const { return 2.0 * pi * j / n_theta_; }
  const Vec3& e1(int j, int i) const { return e1_[index(j, i)]; }
  const Vec3& e2(int j, int i) const { return e2_[index(j, i)]; }
  const FrameTransportStats& stats() const { return stats_; }

 private:
  std::size_t index(int j, int i) const { return static_cast<std::size_t>(i) * n_theta_ + j; }

  int n_theta_ = 0;
  int n_s_ = 0;
  std::vector<Vec3> e1_;
  std::vector<Vec3> e2_;
  FrameTransportStats stats_;
};

/// R and its derivatives at one (theta, s).
struct RadiusJet {
  double value = 1.0;
  double ds = 0.0;
  double dss = 0.0;
  double dtheta = 0.0;
};

/// Parameters of R = r0 + a sin(2 pi k s + phase) + (b + c s) cos(m theta).
struct ModalRadius {
  double r0 = 1.0;
  double a = 0.0;
  double k = 1.0;
  double phase = 0.0;
  double b = 0.0;
  double c = 0.0;
  int m = 1;
};

/// Cross-section radius law R(theta, s) > 0.
class RadiusLaw {
 public:
  using Evaluator = std::function<RadiusJet(double theta, double s)>;

  static RadiusLaw constant(double r0);
  static RadiusLaw modal(const ModalRadius& p);
  /// Ellipse with semi-axes a (along theta = 0) and b.
  static RadiusLaw ellipse(double a, double b);
  /// Values on a uniform (s, theta) table: `values[k * n_theta + j]` at s = k / (n_s - 1),
  /// theta = 2 pi j / n_theta. Periodic cubic spline in theta, natural cubic spline in s.
  static RadiusLaw tabulated(int n_theta, int n_s, std::vector<double> values);
  static RadiusLaw from_function(Evaluator f, std::string name = "analytic");

  RadiusJet operator()(double theta, double s) const { return eval_(theta, s); }
  const std::string& name() const { return name_; }
  /// Torsional rigidity of the section when beta == 1 and the closed form is known.
  std::optional<double> straight_rigidity(double s = 0.0) const;

 private:
  Evaluator eval_;
  std::string name_;
  std::function<std::optional<double>(double)> rigidity_;
};

/// Scale factor beta = 1 - h eta (c'' . e1) and its s-derivatives at fixed (eta, theta).
struct ScaleFactor {
  double value = 1.0;
  double ds = 0.0;
  double dss = 0.0;
};

/// Everything a cross-section needs from the 3D geometry at one station.
struct SectionData {
  int station = 0;
  double s = 0.0;
  double slenderness = 0.0;
  std::vector<RadiusJet> radius;  ///< per theta_j
  std::vector<double> curv;       ///< c'' . e1(theta_j)
  std::vector<double> curv_ds;    ///< c''' . e1(theta_j)
  std::vector<double> curv_dss;   ///< c'''' . e1 + (c'' . e1)|c''|^2
  Vec2 curvature = Vec2::Zero();  ///< (c'' . E1, c'' . E2), E_i = e_i(theta = 0)
  Vec2 third = Vec2::Zero();      ///< (c''' . E1, c''' . E2), the cross-sectional part of c'''

  int n_theta() const { return static_cast<int>(radius.size()); }
  double theta(int j) const { return 2.0 * pi * j / n_theta(); }

  /// Section with constant in-plane curvature vector (k1, k2) and the given radius law
  /// evaluated at s; curvature derivatives default to zero (planar circle: c''' has no
  /// cross-sectional part).
  static SectionData planar(int n_theta, const RadiusLaw& radius, double s, double slenderness,
                            Vec2 curvature = Vec2::Zero());
};

struct GeometryReport {
  double lambda = 0.0;       ///< max |h c'''|
  double lambda_star = 0.0;  ///< max |h c''''|
  double gamma = 0.0;        ///< max |dR/ds|
  double gamma_star = 0.0;   ///< max |d2R/ds2|
  double max_curvature = 0.0;
  double min_beta = 1.0;
  int min_beta_station = 0;
  double min_radius = 0.0;
  double slenderness = 0.0;
  /// max over s of |c''| - sqrt(|c''' . c'|), should vanish
  double curvature_identity_defect = 0.0;
  /// |c''| <= h^{-1/2} lambda^{1/2} at every sample
  bool curvature_bound_holds = true;
  /// lambda * h <= 0.1: the curvature-derivative size is small against 1/h
  bool lambda_h_small = true;
  bool valid = true;  ///< min_beta > 0 and min_radius > 0
  bool centerline_rotated = false;
  FrameTransportStats frame;
  std::vector<std::string> warnings;
};

/// Pipe geometry: centerline, transported frame, radius law and slenderness h,
/// sampled on the uniform (theta_j, s_i) grid. Immutable after construction.
class PipeGeometry {
 public:
  PipeGeometry(Centerline curve, RadiusLaw radius, double slenderness, int n_theta);

  const Centerline& centerline() const { return *curve_; }
  const FrameField& frame() const { return *frame_; }
  const RadiusLaw& radius_law() const { return *radius_; }
  double slenderness() const { return h_; }
  int n_theta() const { return n_theta_; }
  int stations() const { return curve_->size(); }
  double s(int i) const { return curve_->s(i); }
  double ds() const { return curve_->spacing(); }
  double theta(int j) const { return 2.0 * pi * j / n_theta_; }

  const RadiusJet& radius(int j, int i) const { return radii_[static_cast<std::size_t>(i) * n_theta_ + j]; }
  /// c''(s_i) . e1(theta_j, s_i)
  double curvature_e1(int j, int i) const;
  /// Throws GeometryError if eta is outside [0, R] or beta <= 0.
  ScaleFactor scale_factor(double eta, int j, int i) const;
  /// x = c(s) + h eta e1(theta, s)
  Vec3 position(double eta, int j, int i) const;

  SectionData section(int i) const;
  GeometryReport report() const;
  /// Throws GeometryError naming the first station where beta <= 0 or R <= 0.
  void certify() const;

 private:
  std::shared_ptr<const Centerline> curve_;
  std::shared_ptr<const FrameField> frame_;
  std::shared_ptr<const RadiusLaw> radius_;
  double h_;
  int n_theta_;
  std::vector<RadiusJet> radii_;
};

}  // namespace tubeflow
