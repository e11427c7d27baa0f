#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace tubeflow {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure attributed to a module and, where known, an s-station.
class NumericalError : public Error {
 public:
  NumericalError(std::string module, std::string what, int station = -1)
      : Error(format(module, what, station)), module_(std::move(module)), station_(station) {}

  const std::string& module() const { return module_; }
  int station() const { return station_; }

 private:
  static std::string format(const std::string& module, const std::string& what, int station) {
    std::string msg = module + ": " + what;
    if (station >= 0) msg += " (station " + std::to_string(station) + ")";
    return msg;
  }

  std::string module_;
  int station_;
};

/// Geometry that violates a validity condition (beta <= 0, bad centerline, ...).
class GeometryError : public NumericalError {
 public:
  explicit GeometryError(std::string what, int station = -1)
      : NumericalError("geometry", std::move(what), station) {}
};

/// Runs f(i) for i in [0, n) on up to `threads` workers with a static partition.
/// The exception thrown for the lowest index is rethrown after all workers join.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  if (n <= 0) return;
  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::mutex guard;
  int failed_index = n;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      const int begin = n * t / threads;
      const int end = n * (t + 1) / threads;
      workers.emplace_back([&, begin, end] {
        for (int i = begin; i < end; ++i) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(guard);
            if (i < failed_index) {
              failed_index = i;
              failure = std::current_exception();
            }
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline int default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log(y) against log(x); the observed convergence order.
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace tubeflow
