#include "okd/maximize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "okd/errors.hpp"

namespace okd {

ScalarMaximum maximize_scalar(FunctionRef<double(double)> f, double lo,
                              double hi, const MaximizeOptions& opts) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw DomainError("maximize_scalar: require finite lo < hi");
  }
  if (!(opts.tol > 0.0)) throw DomainError("maximize_scalar: tol must be > 0");
  const std::size_t n = std::max<std::size_t>(opts.coarse_points, 3);

  std::vector<double> xs(n);
  const bool log_spaced = lo > 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    xs[i] = log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
  }
  xs.front() = lo;
  xs.back() = hi;

  ScalarMaximum out;
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = f(xs[i]);
  out.evaluations = n;

  const auto [min_it, max_it] = std::minmax_element(ys.begin(), ys.end());
  if (*max_it - *min_it < opts.flat_threshold) {
    out.argmax = lo;
    out.max = 0.0;
    out.flat = true;
    return out;
  }
  const auto best = static_cast<std::size_t>(max_it - ys.begin());
  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[std::min(best + 1, n - 1)];
  out.argmax = xs[best];
  out.max = ys[best];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  out.evaluations += 2;
  constexpr int kMaxIterations = 200;
  for (int it = 0; it < kMaxIterations && 0.5 * (b - a) > opts.tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
  }
  const double x_ref = fc >= fd ? c : d;
  const double f_ref = std::max(fc, fd);
  if (f_ref >= out.max) {
    out.argmax = x_ref;
    out.max = f_ref;
  }
  return out;
}

}  // namespace okd
