#include <cmath>
#include <numbers>
#include <utility>

#include <boost/math/constants/constants.hpp>

#include <doctest.h>

#include "okd/errors.hpp"
#include "okd/optimize.hpp"
#include "okd/rates.hpp"
#include "oracles.hpp"

using namespace okd;

namespace {

// Independent 30-digit reference evaluations (direct conditional-density
// form, arbitrary-precision quadrature).
constexpr double kHbeDd_03_095 = 2.07739401820222;
constexpr double kHbeDd_02_20 = 2.04905189686482;
constexpr double kBobEntropy_1 = 2.53303973931357642;
constexpr double kIab_1 = 0.485944154132935320;
constexpr double kIab_03 = 0.0621583449870188464;
constexpr double kHbeHelstrom_03_10 = 2.07056415477078862;
constexpr double kChi_03_095 = 0.0435572720469419303;

constexpr double kFrozenTol = 1e-9;

double hba() { return h_b_given_a(); }

}  // namespace

TEST_CASE("conditional entropy of Bob given Alice") {
  using boost::multiprecision::log;
  using okd::test::HighPrecision;
  const HighPrecision two_pi_e = 2 * boost::math::constants::pi<HighPrecision>() *
                                 boost::math::constants::e<HighPrecision>();
  const double expected = static_cast<double>(log(two_pi_e) / (2 * log(HighPrecision(2))));
  CHECK(hba() == doctest::Approx(expected).epsilon(1e-15));
  CHECK(std::abs(hba() - 2.0470955) < 1e-7);
}

TEST_CASE("reference values") {
  CHECK(std::abs(h_b_given_e_dd(0.3, 0.95).value - kHbeDd_03_095) < kFrozenTol);
  CHECK(std::abs(h_b_given_e_dd(0.2, 2.0).value - kHbeDd_02_20) < kFrozenTol);
  CHECK(std::abs(bob_entropy(1.0).value - kBobEntropy_1) < kFrozenTol);
  CHECK(std::abs(mutual_info_ab(1.0).value - kIab_1) < kFrozenTol);
  CHECK(std::abs(mutual_info_ab(0.3).value - kIab_03) < kFrozenTol);
  CHECK(std::abs(h_b_given_e_helstrom(0.3, 1.0).value - kHbeHelstrom_03_10) < kFrozenTol);
  CHECK(std::abs(holevo_chi(0.3, 0.95).value - kChi_03_095) < kFrozenTol);
}

TEST_CASE("direct-detection conditional entropy limits") {
  for (double de : {0.0, 0.5, 3.0, 10.0}) {
    CHECK(std::abs(h_b_given_e_dd(0.0, de).value - hba()) < 1e-10);
  }
  // Eve with zero depth learns nothing: H(B|E) = H(B).
  CHECK(std::abs(h_b_given_e_dd(1.0, 0.0).value - kBobEntropy_1) < 1e-9);
  CHECK(std::abs(h_b_given_e_dd(1.0, 0.0).value - bob_entropy(1.0).value) < 1e-9);
  // Eve with huge depth knows a.
  CHECK(std::abs(h_b_given_e_dd(0.7, 12.0).value - hba()) < 1e-9);
}

TEST_CASE("helstrom conditional entropy limits") {
  for (double db : {0.2, 1.0, 2.5}) {
    CHECK(std::abs(h_b_given_e_helstrom(db, 0.0).value - h_b_given_e_dd(db, 0.0).value) < 1e-9);
    CHECK(std::abs(h_b_given_e_helstrom(db, 40.0).value - hba()) < 1e-10);
  }
}

TEST_CASE("mutual information between Alice and Bob") {
  CHECK(std::abs(mutual_info_ab(0.0).value) < 1e-12);
  CHECK(mutual_info_ab(8.0).value >= 1.0 - 1e-6);
  CHECK(mutual_info_ab(8.0).value <= 1.0 + 1e-10);
  // I(A;B) = H(B) - H(B|A).
  for (double d : {0.1, 0.6, 1.3, 3.0}) {
    CHECK(std::abs(mutual_info_ab(d).value - (bob_entropy(d).value - hba())) < 1e-9);
  }
}

TEST_CASE("holevo quantity") {
  CHECK(std::abs(holevo_chi(0.8, 0.0).value) < 1e-12);
  CHECK(std::abs(holevo_chi(0.0, 0.8).value) < 1e-12);
  const double i_be = bob_entropy(0.3).value - h_b_given_e_dd(0.3, 0.95).value;
  CHECK(holevo_chi(0.3, 0.95).value >= i_be);
  CHECK(holevo_chi(6.0, 6.0).value <= 1.0 + 1e-12);
  CHECK(holevo_chi(6.0, 6.0).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("entropies depend only on the magnitude of the depths") {
  for (auto [db, de] : {std::pair{0.3, 0.95}, std::pair{1.2, 0.4}, std::pair{2.0, 2.5}}) {
    CHECK(h_b_given_e_dd(-db, -de).value == h_b_given_e_dd(db, de).value);
    CHECK(h_b_given_e_helstrom(-db, -de).value == h_b_given_e_helstrom(db, de).value);
    CHECK(holevo_chi(-db, -de).value == holevo_chi(db, de).value);
    CHECK(mutual_info_ab(-db).value == mutual_info_ab(db).value);
    CHECK(bob_entropy(-db).value == bob_entropy(db).value);
  }
}

TEST_CASE("zero depth gives zero key") {
  for (double e : {0.01, 1.0, 10.0}) {
    CHECK(key_rate_dd(0.0, e).key_rate == 0.0);
    CHECK(key_rate_coherent(0.0, e, ModulationScheme::from_relative_spread(1e6, 0.01)).key_rate == 0.0);
    CHECK(key_rate_helstrom(0.0, e).key_rate == 0.0);
    CHECK(key_rate_holevo(0.0, e).key_rate == 0.0);
  }
}

TEST_CASE("invalid key-rate arguments") {
  CHECK_THROWS_AS(key_rate_dd(-0.1, 1.0), DomainError);
  CHECK_THROWS_AS(key_rate_dd(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(key_rate_helstrom(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(key_rate_holevo(0.5, -2.0), DomainError);
  CHECK_THROWS_AS(key_rate_dd_asymptotic(0.0), DomainError);
}

TEST_CASE("rate result invariants") {
  for (double e : {0.3, 3.0, 30.0}) {
    for (double db : {0.05, 0.4, 1.5}) {
      for (auto s : kAllScenarios) {
        const auto r = key_rate(s, db, e);
        CHECK(r.key_rate >= 0.0);
        CHECK(r.delta_b == db);
        CHECK(r.delta_e == doctest::Approx(std::sqrt(e) * db).epsilon(1e-15));
        if (s == Scenario::Holevo) {
          CHECK(r.key_rate == std::max(r.i_ab - r.leak, 0.0));
        } else {
          CHECK(r.consistency_gap <= 1e-8);
          CHECK(std::abs(r.key_rate - std::max(r.i_ab - r.leak, 0.0)) <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("coherent eavesdropper") {
  const double e = 5.0;
  for (double db : {0.1, 0.5, 1.0}) {
    const auto dd = key_rate_dd(db, e);
    const auto fine = key_rate_coherent(db, e, ModulationScheme::from_relative_spread(1e6, 1e-3));
    CHECK(std::abs(fine.key_rate - dd.key_rate) <= 1e-6 * dd.key_rate);
    const auto plain = key_rate_coherent(db, e, std::nullopt);
    CHECK(plain.key_rate == dd.key_rate);
    const auto coarse = key_rate_coherent(db, e, ModulationScheme::from_relative_spread(1e6, 0.2));
    CHECK(*coarse.delta_e_coh > coarse.delta_e);
    CHECK(coarse.key_rate <= dd.key_rate);
  }
}

TEST_CASE("asymptotic forms") {
  const double g = gamma_constant().value;
  CHECK(key_rate_dd_asymptotic(1.0) == doctest::Approx(g * kLog2E / 2).epsilon(1e-15));
  CHECK(key_rate_helstrom_asymptotic(1.0, 7.0) ==
        doctest::Approx(kLog2E / 14.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(key_rate_helstrom_asymptotic(0.0, 7.0) == 0.0);
  CHECK(key_rate_helstrom_asymptotic(2.0, 10.0) ==
        doctest::Approx(kLog2E / 20.0 * 4.0 * std::exp(-4.0)).epsilon(1e-15));
  CHECK(key_rate_holevo_asymptotic(2.0) ==
        doctest::Approx(chi_constant().value * kLog2E / 4.0).epsilon(1e-15));
  CHECK(key_rate_asymptotic(Scenario::Coherent, 3.0) == key_rate_asymptotic(Scenario::DirectDetection, 3.0));
  CHECK(key_rate_asymptotic(Scenario::Helstrom, 3.0) ==
        doctest::Approx(std::exp(-1.0) * kLog2E / 6.0).epsilon(1e-15));
}

TEST_CASE("strong-eavesdropping constants") {
  const auto g = gamma_constant();
  CHECK(std::abs(g.value - 0.4795) <= 5e-4);
  CHECK(g.argmax == doctest::Approx(1.228).epsilon(1e-3));
  const auto c = chi_constant();
  CHECK(std::abs(c.value - 0.2683) <= 5e-4);
  CHECK(c.argmax == doctest::Approx(0.9477).epsilon(1e-3));
  const auto h = helstrom_constant();
  CHECK(h.value == std::exp(-1.0));
  CHECK(h.argmax == 1.0);
  CHECK(asymptotic_constant(Scenario::DirectDetection) == g.value);
}

TEST_CASE("chi bracket branches agree at their seams") {
  // Series below delta^2 = 1e-4 and the large-argument form above
  // delta^2 / 2 = 30 join the direct form continuously.
  const double lo = std::sqrt(1e-4);
  CHECK(chi_bracket(lo * (1 - 1e-9)) == doctest::Approx(chi_bracket(lo * (1 + 1e-9))).epsilon(1e-8));
  const double hi = std::sqrt(60.0);
  CHECK(chi_bracket(hi * (1 - 1e-9)) == doctest::Approx(chi_bracket(hi * (1 + 1e-9))).epsilon(1e-6));
  CHECK(chi_bracket(0.0) == 0.0);
  CHECK(chi_bracket(-0.9) == chi_bracket(0.9));
}

TEST_CASE("optimized rates approach their asymptotes") {
  SUBCASE("direct detection at E = 100 within 5 %") {
    const auto r = optimal_rate(Scenario::DirectDetection, 100.0);
    const double asym = 0.4795 * kLog2E / 200.0;
    CHECK(std::abs(r.key_rate / asym - 1.0) <= 0.05);
  }
  SUBCASE("holevo at E = 1000 within 2 %") {
    const auto r = optimal_rate(Scenario::Holevo, 1000.0);
    CHECK(std::abs(r.key_rate / key_rate_holevo_asymptotic(1000.0) - 1.0) <= 0.02);
  }
  SUBCASE("direct detection optimum depth tracks the gamma maximizer") {
    const auto r = optimal_rate(Scenario::DirectDetection, 1000.0);
    CHECK(std::abs(r.delta_e - gamma_constant().argmax) <= 0.05);
    CHECK(std::abs(1000.0 * r.key_rate / (gamma_constant().value * kLog2E / 2) - 1.0) <= 0.02);
  }
  SUBCASE("E K converges monotonically through 10, 100, 1000") {
    for (auto s : {Scenario::DirectDetection, Scenario::Helstrom, Scenario::Holevo}) {
      const double target = asymptotic_constant(s) * kLog2E / 2.0;
      double prev_gap = INFINITY;
      for (double e : {10.0, 100.0, 1000.0}) {
        const double gap = std::abs(e * optimal_rate(s, e).key_rate - target);
        CHECK(gap < prev_gap);
        prev_gap = gap;
      }
    }
  }
}

TEST_CASE("asymptotic estimate field") {
  const auto r = key_rate_helstrom(1.0, 1000.0);
  CHECK(r.asymptotic_estimate == doctest::Approx(key_rate_helstrom_asymptotic(1.0, 1000.0)).epsilon(1e-12));
  CHECK(r.delta_e_coh.has_value());
  CHECK(*r.delta_e_coh == 1.0);
  CHECK(r.delta_b == doctest::Approx(1.0 / std::sqrt(1000.0)).epsilon(1e-15));
}
