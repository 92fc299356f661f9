#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <cmath>
#include <cstdint>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace okd::test {

using HighPrecision = boost::multiprecision::cpp_bin_float_50;

inline HighPrecision hp_binary_entropy(const HighPrecision& x) {
  using boost::multiprecision::log;
  if (x == 0 || x == 1) return 0;
  const HighPrecision ln2 = log(HighPrecision(2));
  return -(x * log(x) + (1 - x) * log(1 - x)) / ln2;
}

/// Entropy of p|a><a| + (1-p)|b><b| with real overlap <a|b> = sqrt(q), from
/// the eigenvalues of the 2x2 weighted Gram matrix
///   [[p, sqrt(p(1-p) q)], [sqrt(p(1-p) q), 1-p]].
inline HighPrecision hp_gram_mixture_entropy(const HighPrecision& p,
                                             const HighPrecision& q) {
  using boost::multiprecision::sqrt;
  const HighPrecision off = sqrt(p * (1 - p) * q);
  const HighPrecision trace = 1;
  const HighPrecision det = p * (1 - p) - off * off;
  const HighPrecision disc = sqrt(trace * trace - 4 * det);
  const HighPrecision small = (trace - disc) / 2;
  return hp_binary_entropy(small);
}

struct McMean {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error of draw(engine) over n independent draws.
template <class Draw>
McMean mc_mean(std::uint64_t n, std::uint64_t seed, Draw&& draw) {
  std::mt19937_64 engine(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double x = draw(engine);
    const double delta = x - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

inline double gauss_density(double x, double mu) {
  return std::exp(-0.5 * (x - mu) * (x - mu)) / std::sqrt(2.0 * M_PI);
}

}  // namespace okd::test
