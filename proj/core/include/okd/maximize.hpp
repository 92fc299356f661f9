#pragma once

#include <cstddef>

#include "okd/function_ref.hpp"

namespace okd {

struct ScalarMaximum {
  double argmax = 0.0;
  double max = 0.0;
  /// Set when the coarse scan saw a spread below the flatness threshold;
  /// argmax is then lo and max is 0.
  bool flat = false;
  std::size_t evaluations = 0;
};

struct MaximizeOptions {
  /// Target accuracy of the argmax.
  double tol = 1e-6;
  std::size_t coarse_points = 64;
  /// max - min over the coarse scan below this marks f as flat.
  double flat_threshold = 1e-9;
};

/// Two-stage maximization on [lo, hi]: a coarse scan (log-spaced when
/// lo > 0, linear otherwise) picks the best cell, then golden-section search
/// refines inside the neighbouring cells. The returned max is never below
/// the best coarse value. Throws DomainError unless lo < hi.
ScalarMaximum maximize_scalar(FunctionRef<double(double)> f, double lo,
                              double hi, const MaximizeOptions& opts = {});

}  // namespace okd
