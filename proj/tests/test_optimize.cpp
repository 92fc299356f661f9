#include <cmath>
#include <array>
#include <cstring>
#include <utility>
#include <vector>

#include <doctest.h>

#include "okd/errors.hpp"
#include "okd/maximize.hpp"
#include "okd/optimize.hpp"

using namespace okd;

TEST_CASE("maximize a smooth unimodal function") {
  const auto m = maximize_scalar([](double d) { return d * d * std::exp(-d * d); }, 1e-3, 10.0);
  CHECK_FALSE(m.flat);
  CHECK(std::abs(m.argmax - 1.0) <= 1e-6);
  CHECK(m.max == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(m.evaluations > 64);
}

TEST_CASE("constant function is flagged flat") {
  const auto m = maximize_scalar([](double) { return 0.25; }, 1e-3, 10.0);
  CHECK(m.flat);
  CHECK(m.argmax == 1e-3);
  CHECK(m.max == 0.0);
}

TEST_CASE("maximizer argument checks") {
  CHECK_THROWS_AS(maximize_scalar([](double x) { return x; }, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(maximize_scalar([](double x) { return x; }, 2.0, 1.0), DomainError);
}

TEST_CASE("maximum at the bracket edge and linear brackets") {
  const auto m = maximize_scalar([](double x) { return x; }, 0.0, 2.0);
  CHECK(m.argmax == doctest::Approx(2.0).epsilon(1e-6));
  const auto n = maximize_scalar([](double x) { return -(x + 1) * (x + 1); }, -3.0, 2.0);
  CHECK(std::abs(n.argmax + 1.0) <= 1e-6);
}

TEST_CASE("refined maximum never falls below the coarse grid") {
  // Sharp narrow peak between coarse nodes plus a broad hump elsewhere.
  auto f = [](double x) {
    return std::exp(-0.5 * (x - 3.0) * (x - 3.0)) + 1.5 * std::exp(-1e6 * (x - 0.11) * (x - 0.11));
  };
  const auto m = maximize_scalar(f, 1e-3, 10.0);
  double best = -INFINITY;
  for (int i = 0; i < 64; ++i) {
    const double x = std::exp(std::log(1e-3) + (std::log(10.0) - std::log(1e-3)) * i / 63.0);
    best = std::max(best, f(x));
  }
  CHECK(m.max >= best);
}

TEST_CASE("direct-detection optimum agrees with a brute-force scan at E = 50") {
  const double e = 50.0;
  const auto r = optimal_rate(Scenario::DirectDetection, e);
  // 10^4 log-spaced points over the default bracket, refined by a second
  // 10^4-point pass around the best node.
  auto scan = [e](double lo, double hi, int n, bool log_spaced) {
    double best_x = lo;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      const double x = log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
      const double k = key_rate_dd(x, e).key_rate;
      if (k > best) {
        best = k;
        best_x = x;
      }
    }
    return std::pair{best_x, best};
  };
  const auto [coarse_x, coarse_k] = scan(1e-3, 12.0, 10000, true);
  const double step = coarse_x * (std::pow(12.0 / 1e-3, 1.0 / 9999.0) - 1.0);
  const auto [fine_x, fine_k] = scan(coarse_x - step, coarse_x + step, 401, false);
  CHECK(std::abs(r.delta_b - fine_x) <= 2 * 1e-6 + 2 * step / 400);
  CHECK(r.key_rate >= fine_k - 1e-12);
  CHECK(r.key_rate >= coarse_k);
}

TEST_CASE("optimizer is deterministic") {
  for (auto s : kAllScenarios) {
    const auto a = optimal_rate(s, 7.0);
    const auto b = optimal_rate(s, 7.0);
    CHECK(std::memcmp(&a.key_rate, &b.key_rate, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.delta_b, &b.delta_b, sizeof(double)) == 0);
  }
}

TEST_CASE("tiny advantage leaves most of Bob's information secret") {
  for (auto s : kAllScenarios) {
    const auto r = optimal_rate(s, 1e-3);
    CHECK(r.key_rate > 0.5 * r.i_ab);
  }
}

TEST_CASE("helstrom optimum at E = 1000") {
  const auto r = optimal_rate(Scenario::Helstrom, 1000.0);
  REQUIRE(r.delta_e_coh.has_value());
  CHECK(std::abs(*r.delta_e_coh - 1.0) <= 0.05);
  CHECK(std::abs(r.key_rate / (std::exp(-1.0) * kLog2E / 2000.0) - 1.0) <= 0.02);
}

TEST_CASE("sweep grid") {
  SweepGrid g;
  CHECK_NOTHROW(g.validate());
  const auto v = g.values();
  REQUIRE(v.size() == 25);
  CHECK(v.front() == 1.0);
  CHECK(v.back() == 1000.0);
  CHECK(v[12] == doctest::Approx(std::sqrt(1000.0)).epsilon(1e-14));
  g.log_spaced = false;
  CHECK(g.values()[1] == doctest::Approx(1.0 + 999.0 / 24.0));
  g.points = 1;
  g.max = 1.0;
  CHECK_NOTHROW(g.validate());
  CHECK(g.values() == std::vector<double>{1.0});
  g = {};
  g.min = 0.0;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = {};
  g.max = 0.5;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = {};
  g.points = 0;
  CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("sweep ordering, monotonicity and layout") {
  SweepGrid g;
  g.min = 1.0;
  g.max = 1000.0;
  g.points = 7;
  const auto table = sweep(kAllScenarios, g);
  REQUIRE(table.rows.size() == 28);
  for (std::size_t i = 0; i < g.points; ++i) {
    const auto* row = &table.rows[4 * i];
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(row[k].scenario == kAllScenarios[k]);
      CHECK(row[k].advantage == table.rows[4 * i].advantage);
      CHECK(row[k].error.empty());
      CHECK(row[k].key_rate >= 0.0);
    }
    CHECK(row[0].key_rate == row[1].key_rate);
    CHECK(row[0].key_rate >= row[2].key_rate);
    CHECK(row[2].key_rate >= row[3].key_rate);
    if (i > 0) {
      CHECK(table.rows[4 * i].advantage > table.rows[4 * (i - 1)].advantage);
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(row[k].key_rate < table.rows[4 * (i - 1) + k].key_rate);
      }
    }
  }
}

TEST_CASE("sweep output does not depend on thread count") {
  SweepGrid g;
  g.points = 4;
  g.max = 20.0;
  const std::array<Scenario, 2> s{Scenario::Helstrom, Scenario::Holevo};
  const auto one = sweep(s, g, {}, {}, 1);
  const auto three = sweep(s, g, {}, {}, 3);
  REQUIRE(one.rows.size() == three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(std::memcmp(&one.rows[i].key_rate, &three.rows[i].key_rate, sizeof(double)) == 0);
    CHECK(one.rows[i].scenario == three.rows[i].scenario);
  }
}

TEST_CASE("sweep annotates failing rows without aborting") {
  SweepGrid g;
  g.points = 3;
  g.max = 10.0;
  QuadratureConfig cfg;
  cfg.max_nodes_1d = 30;
  cfg.abs_tol = 1e-16;
  cfg.rel_tol = 1e-16;
  const std::array<Scenario, 1> s{Scenario::Helstrom};
  const auto t = sweep(s, g, cfg);
  REQUIRE(t.rows.size() == 3);
  for (const auto& row : t.rows) {
    CHECK_FALSE(row.error.empty());
    CHECK(std::isnan(row.key_rate));
  }
}
