#pragma once

#include <string>
#include <vector>

namespace tubeflow {

struct ValidationCheck {
  std::string name;
  std::string description;
  double value = 0.0;
  double threshold = 0.0;
  bool upper_bound = true;  ///< pass when value <= threshold, otherwise when value >= threshold
  bool passed = false;
};

/// Built-in oracle battery: disk closed forms, flux constancy, the rigidity energy identity,
/// the flux law, the transverse compatibility condition with a wrong-flux control, the
/// divergence identity of the differentiated section problem with a broken control, and the
/// first-order curvature correction. Upper-bound tolerances are multiplied by
/// `tolerance_scale`, lower bounds divided by it.
std::vector<ValidationCheck> run_validation(double tolerance_scale = 1.0, int threads = 1);

}  // namespace tubeflow
