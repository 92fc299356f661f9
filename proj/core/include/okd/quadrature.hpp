#pragma once

// Integration of smooth integrands weighted by mixtures of unit-variance
// Gaussians. The infinite line is truncated to the union of
// [c - T, c + T] over the mixture centres c, which is where every
// integrand in this library carries its mass.

#include <cstddef>
#include <span>
#include <vector>

#include "okd/function_ref.hpp"

namespace okd {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Half-width of each truncated window in standard deviations.
  double truncation_sigmas = 10.0;
  /// Integrand evaluations allowed per 1-D integral.
  std::size_t max_nodes_1d = 2048;
  /// Gauss-Legendre order per panel and axis for 2-D integrals.
  std::size_t nodes_2d_per_axis = 201;

  /// Throws DomainError if any field is non-positive or truncation < 6.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct Interval {
  double lo;
  double hi;
};

/// Union of [c - half_width, c + half_width] over all centres, sorted and
/// with overlapping windows merged.
std::vector<Interval> truncated_support(std::span<const double> centers,
                                        double half_width);

/// Adaptive 15-point Gauss-Kronrod integration over the truncated support.
/// Converged when the summed error estimate is at most
/// max(abs_tol, rel_tol * |value|).
///
/// Throws ConvergenceError when max_nodes_1d evaluations are exhausted and
/// NumericError as soon as f returns a non-finite value.
QuadratureResult integrate_1d(FunctionRef<double(double)> f,
                              std::span<const double> centers,
                              const QuadratureConfig& cfg = {});

/// Tensor-product Gauss-Legendre integration over the product of the two
/// truncated supports. The error estimate compares orders n and (n+1)/2;
/// panels per window are doubled (up to 8) until it meets tolerance.
QuadratureResult integrate_2d(FunctionRef<double(double, double)> f,
                              std::span<const double> centers_x,
                              std::span<const double> centers_y,
                              const QuadratureConfig& cfg = {});

/// log(cosh(x)) without overflow: |x| + log1p(exp(-2|x|)) - log 2.
double log_cosh(double x) noexcept;

/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b) noexcept;

/// 1 / (1 + exp(-x)), evaluated without overflow for either sign.
double logistic(double x) noexcept;

/// Standard normal density.
double normal_pdf(double x) noexcept;

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(std::size_t order);

}  // namespace okd
