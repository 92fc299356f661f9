// Sampling oracles for the quadrature pipeline. Every estimate below is built
// from closed-form densities written out here; none of it calls the library's
// integrands or samplers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "okd/rates.hpp"
#include "oracles.hpp"

using namespace okd;
using okd::test::gauss_density;
using okd::test::mc_mean;

namespace {

constexpr std::uint64_t kDraws = 100'000'000;

// -log2 p(y_b | y_e) for the direct-detection joint law.
double dd_surprise(double yb, double ye, double db, double de) {
  const double w_plus = 1.0 / (1.0 + std::exp(-2.0 * de * ye));
  const double p = w_plus * gauss_density(yb, db) + (1.0 - w_plus) * gauss_density(yb, -db);
  return -std::log2(p);
}

double dd_conditional_entropy_mc(double db, double de, std::uint64_t seed, double& se) {
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin;
  const auto m = mc_mean(kDraws, seed, [&](std::mt19937_64& g) {
    const double s = coin(g) ? 1.0 : -1.0;
    const double yb = s * db + normal(g);
    const double ye = s * de + normal(g);
    return dd_surprise(yb, ye, db, de);
  });
  se = m.std_error;
  return m.mean;
}

}  // namespace

TEST_CASE("alice-bob information integrand at depth 1") {
  const double d = 1.0;
  std::normal_distribution<double> normal(d, 1.0);
  const auto m = mc_mean(kDraws, 101, [&](std::mt19937_64& g) {
    const double t = normal(g);
    return d * d * std::numbers::log2e - std::log2(std::cosh(d * t));
  });
  const double q = mutual_info_ab(d).value;
  CAPTURE(m.mean);
  CAPTURE(m.std_error);
  CHECK(std::abs(q - m.mean) <= 3.0 * m.std_error);
}

TEST_CASE("alice-bob information from a fine histogram at depth 1") {
  const double d = 1.0;
  const int bins = 2000;
  const double half = 9.0;
  std::vector<std::uint64_t> counts(2 * bins, 0);
  std::mt19937_64 g(102);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    const int a = coin(g) ? 1 : 0;
    const double y = (a ? d : -d) + normal(g);
    int b = static_cast<int>(std::floor((y + half) / (2 * half) * bins));
    b = std::clamp(b, 0, bins - 1);
    ++counts[a * bins + b];
  }
  const double n = static_cast<double>(kDraws);
  double mi = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double pb = static_cast<double>(counts[b] + counts[bins + b]) / n;
    for (int a = 0; a < 2; ++a) {
      const double pab = static_cast<double>(counts[a * bins + b]) / n;
      if (pab > 0) mi += pab * std::log2(pab / (0.5 * pb));
    }
  }
  CHECK(std::abs(mi - mutual_info_ab(d).value) <= 1e-3);
}

TEST_CASE("differential entropy of a standard normal from 10^7 samples") {
  const std::uint64_t n = 10'000'000;
  const int bins = 800;
  const double half = 8.0;
  const double width = 2 * half / bins;
  std::vector<std::uint64_t> counts(bins, 0);
  std::mt19937_64 g(103);
  std::normal_distribution<double> normal;
  for (std::uint64_t i = 0; i < n; ++i) {
    int b = static_cast<int>(std::floor((normal(g) + half) / width));
    ++counts[std::clamp(b, 0, bins - 1)];
  }
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  h += std::log2(width);
  CHECK(std::abs(h - h_b_given_a()) <= 1e-2);
}

TEST_CASE("direct-detection conditional entropy at depths 0.3, 0.95") {
  double se = 0.0;
  const double mc = dd_conditional_entropy_mc(0.3, 0.95, 104, se);
  const double q = h_b_given_e_dd(0.3, 0.95).value;
  CAPTURE(mc);
  CAPTURE(se);
  CHECK(std::abs(q - mc) <= 3.0 * se);
}

TEST_CASE("direct-detection conditional entropy at depths 0.2, 2.0") {
  double se = 0.0;
  const double mc = dd_conditional_entropy_mc(0.2, 2.0, 105, se);
  const double q = h_b_given_e_dd(0.2, 2.0).value;
  CAPTURE(mc);
  CAPTURE(se);
  CHECK(std::abs(q - mc) <= 3.0 * se);
}

TEST_CASE("helstrom conditional entropy at depths 0.3, 1.0") {
  const double db = 0.3;
  const double p_err = 0.5 * (1.0 - std::sqrt(1.0 - std::exp(-1.0)));
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin;
  std::bernoulli_distribution flip(p_err);
  const auto m = mc_mean(kDraws, 106, [&](std::mt19937_64& g) {
    const int a = coin(g) ? 1 : 0;
    const int me = flip(g) ? 1 - a : a;
    const double yb = (a ? db : -db) + normal(g);
    const double s = me ? 1.0 : -1.0;
    const double p = (1 - p_err) * gauss_density(yb, s * db) + p_err * gauss_density(yb, -s * db);
    return -std::log2(p);
  });
  const double q = h_b_given_e_helstrom(db, 1.0).value;
  CAPTURE(m.mean);
  CAPTURE(m.std_error);
  CHECK(std::abs(q - m.mean) <= 3.0 * m.std_error);
}
