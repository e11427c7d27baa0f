#pragma once

#include <memory>
#include <span>
#include <vector>

namespace tubeflow {

/// Interpolating cubic spline over strictly increasing knots (GSL backed).
/// Periodic splines require the first and last sample values to coincide.
class CubicSpline {
 public:
  enum class Ends { natural, periodic };

  CubicSpline(std::span<const double> x, std::span<const double> y, Ends ends = Ends::natural);
  ~CubicSpline();
  CubicSpline(CubicSpline&&) noexcept;
  CubicSpline& operator=(CubicSpline&&) noexcept;
  CubicSpline(const CubicSpline&) = delete;
  CubicSpline& operator=(const CubicSpline&) = delete;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  /// Exact integral of the interpolant over [a, b] (a <= b, both inside the knot span).
  double integral(double a, double b) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  double clamp(double x) const;

  struct Impl;
  std::vector<double> x_;
  std::vector<double> y_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tubeflow
