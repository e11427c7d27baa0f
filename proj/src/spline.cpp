#include "tubeflow/spline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include "tubeflow/common.hpp"

namespace tubeflow {

struct CubicSpline::Impl {
  gsl_interp* interp = nullptr;
  ~Impl() { gsl_interp_free(interp); }
};

namespace {

// GSL's default handler aborts; errors here are reported through return codes.
const bool gsl_handler_off = [] {
  gsl_set_error_handler_off();
  return true;
}();

}  // namespace

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y, Ends ends)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), impl_(std::make_unique<Impl>()) {
  (void)gsl_handler_off;
  if (x_.size() != y_.size()) throw Error("spline: knot and value counts differ");
  const auto type = ends == Ends::periodic ? gsl_interp_cspline_periodic : gsl_interp_cspline;
  if (x_.size() < gsl_interp_type_min_size(type)) throw Error("spline: too few knots");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw Error("spline: knots must be strictly increasing");
  impl_->interp = gsl_interp_alloc(type, x_.size());
  if (gsl_interp_init(impl_->interp, x_.data(), y_.data(), x_.size()) != GSL_SUCCESS)
    throw Error("spline: initialisation failed");
}

CubicSpline::~CubicSpline() = default;
CubicSpline::CubicSpline(CubicSpline&&) noexcept = default;
CubicSpline& CubicSpline::operator=(CubicSpline&&) noexcept = default;

double CubicSpline::clamp(double x) const { return std::clamp(x, x_.front(), x_.back()); }

double CubicSpline::operator()(double x) const {
  return gsl_interp_eval(impl_->interp, x_.data(), y_.data(), clamp(x), nullptr);
}

double CubicSpline::derivative(double x) const {
  return gsl_interp_eval_deriv(impl_->interp, x_.data(), y_.data(), clamp(x), nullptr);
}

double CubicSpline::second_derivative(double x) const {
  return gsl_interp_eval_deriv2(impl_->interp, x_.data(), y_.data(), clamp(x), nullptr);
}

double CubicSpline::integral(double a, double b) const {
  if (b <= a) return 0.0;
  return gsl_interp_eval_integ(impl_->interp, x_.data(), y_.data(), clamp(a), clamp(b), nullptr);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("fit_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error("log_log_slope: non-positive sample");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly).slope;
}

}  // namespace tubeflow
