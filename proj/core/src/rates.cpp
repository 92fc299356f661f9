#include "okd/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "okd/errors.hpp"
#include "okd/maximize.hpp"

namespace okd {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 1/2 ln(2 pi)

void require_depth(double d, const char* what) {
  if (!(std::isfinite(d) && d >= 0.0)) {
    throw DomainError(std::string(what) + ": depth must be finite and >= 0");
  }
}

void require_advantage(double advantage) {
  if (!(std::isfinite(advantage) && advantage > 0.0)) {
    throw DomainError("advantage must be finite and > 0");
  }
}

double finite_abs(double d, const char* what) {
  if (!std::isfinite(d)) {
    throw DomainError(std::string(what) + ": depth must be finite");
  }
  return std::abs(d);
}

double depth_ratio(const std::optional<ModulationScheme>& modulation) {
  return modulation ? modulation->coherent_depth_ratio() : 1.0;
}

// Shared tail of the direct-detection and homodyne pipelines. eve_depth is
// whichever depth Eve's Gaussian outcome actually has.
RateResult gaussian_eve_rate(Scenario scenario, double delta_b,
                             double advantage, double eve_depth,
                             double effective_advantage,
                             const QuadratureConfig& cfg) {
  RateResult r;
  r.scenario = scenario;
  r.advantage = advantage;
  r.delta_b = delta_b;
  r.delta_e = std::sqrt(advantage) * delta_b;
  if (scenario == Scenario::Coherent) r.delta_e_coh = eve_depth;

  const Integral h_be = h_b_given_e_dd(delta_b, eve_depth, cfg);
  const Integral h_b = bob_entropy(delta_b, cfg);
  const Integral i_ab = mutual_info_ab(delta_b, cfg);
  const double conditional_gain = h_be.value - h_b_given_a();

  r.i_ab = i_ab.value;
  r.leak = h_b.value - h_be.value;
  r.key_rate = std::max(conditional_gain, 0.0);
  r.quadrature_residual = h_be.error;
  r.consistency_gap = std::abs((r.i_ab - r.leak) - conditional_gain);
  r.asymptotic_estimate = kLog2E / (2.0 * effective_advantage) *
                          gamma_bracket(eve_depth, cfg).value;
  return r;
}

RateResult helstrom_rate(double delta_b, double advantage, double ratio,
                         const QuadratureConfig& cfg) {
  RateResult r;
  r.scenario = Scenario::Helstrom;
  r.advantage = advantage;
  r.delta_b = delta_b;
  r.delta_e = std::sqrt(advantage) * delta_b;
  const double delta_coh = ratio * r.delta_e;
  r.delta_e_coh = delta_coh;

  const Integral h_be = h_b_given_e_helstrom(delta_b, delta_coh, cfg);
  const Integral h_b = bob_entropy(delta_b, cfg);
  const Integral i_ab = mutual_info_ab(delta_b, cfg);
  const double conditional_gain = h_be.value - h_b_given_a();

  r.i_ab = i_ab.value;
  r.leak = h_b.value - h_be.value;
  r.key_rate = std::max(conditional_gain, 0.0);
  r.quadrature_residual = h_be.error;
  r.consistency_gap = std::abs((r.i_ab - r.leak) - conditional_gain);
  r.asymptotic_estimate = kLog2E / (2.0 * advantage * ratio * ratio) *
                          helstrom_bracket(delta_coh);
  return r;
}

}  // namespace

double h_b_given_a() noexcept {
  return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);
}

Integral bob_entropy(double delta_b, const QuadratureConfig& cfg) {
  const double d = finite_abs(delta_b, "bob_entropy");
  const double centers[] = {-d, d};
  auto integrand = [d](double y) {
    const double log_p =
        log_add_exp(-0.5 * (y + d) * (y + d), -0.5 * (y - d) * (y - d)) -
        std::numbers::ln2 - kHalfLog2Pi;
    return -std::exp(log_p) * log_p;
  };
  const auto q = integrate_1d(integrand, centers, cfg);
  return {kLog2E * q.value, kLog2E * q.error_estimate};
}

Integral h_b_given_e_dd(double delta_b, double delta_e,
                        const QuadratureConfig& cfg) {
  const double db = finite_abs(delta_b, "h_b_given_e_dd");
  const double de = finite_abs(delta_e, "h_b_given_e_dd");
  // The log-ratio is even under (y_b, y_e) -> (-y_b, -y_e), so the balanced
  // joint density can be replaced by its a = 1 component.
  const double cx[] = {db};
  const double cy[] = {de};
  auto integrand = [db, de](double yb, double ye) {
    const double weight = normal_pdf(yb - db) * normal_pdf(ye - de);
    return weight * (log_cosh(de * ye + db * yb) - log_cosh(de * ye));
  };
  const auto q = integrate_2d(integrand, cx, cy, cfg);
  return {h_b_given_a() + db * db * kLog2E - kLog2E * q.value,
          kLog2E * q.error_estimate};
}

Integral h_b_given_e_helstrom(double delta_b, double delta_e_coh,
                              const QuadratureConfig& cfg) {
  const double db = finite_abs(delta_b, "h_b_given_e_helstrom");
  const double p_err =
      helstrom_error_probability(finite_abs(delta_e_coh, "h_b_given_e_helstrom"));
  const double log_right = std::log1p(-p_err);
  const double log_wrong = std::log(p_err);
  // Both values of Eve's bit contribute equally; evaluate m_E = 0, where the
  // bulk of the weight sits on the a = 0 component at -delta_b.
  const double centers[] = {-db, db};
  auto integrand = [=](double y) {
    const double log_p = log_add_exp(log_right - 0.5 * (y + db) * (y + db),
                                     log_wrong - 0.5 * (y - db) * (y - db)) -
                         kHalfLog2Pi;
    return -std::exp(log_p) * log_p;
  };
  const auto q = integrate_1d(integrand, centers, cfg);
  return {kLog2E * q.value, kLog2E * q.error_estimate};
}

Integral mutual_info_ab(double delta_b, const QuadratureConfig& cfg) {
  const double d = finite_abs(delta_b, "mutual_info_ab");
  const double centers[] = {d};
  auto integrand = [d](double t) {
    return normal_pdf(t - d) * log_cosh(d * t);
  };
  const auto q = integrate_1d(integrand, centers, cfg);
  return {kLog2E * (d * d - q.value), kLog2E * q.error_estimate};
}

Integral holevo_chi(double delta_b, double delta_e,
                    const QuadratureConfig& cfg) {
  const double db = finite_abs(delta_b, "holevo_chi");
  const double de = finite_abs(delta_e, "holevo_chi");
  const double overlap = std::exp(-de * de);
  const double eve_entropy = coherent_mixture_entropy(0.5, overlap);
  // S[rho_{E|B=y}] is even in y, so the average over Bob's mixture reduces to
  // an average over one component.
  const double centers[] = {db};
  auto integrand = [=](double y) {
    const double p0 = logistic(-2.0 * db * y);
    return normal_pdf(y - db) * coherent_mixture_entropy(p0, overlap);
  };
  const auto q = integrate_1d(integrand, centers, cfg);
  return {eve_entropy - q.value, q.error_estimate};
}

RateResult key_rate_dd(double delta_b, double advantage,
                       const QuadratureConfig& cfg) {
  require_depth(delta_b, "key_rate_dd");
  require_advantage(advantage);
  return gaussian_eve_rate(Scenario::DirectDetection, delta_b, advantage,
                           std::sqrt(advantage) * delta_b, advantage, cfg);
}

RateResult key_rate_coherent(double delta_b, double advantage,
                             const std::optional<ModulationScheme>& modulation,
                             const QuadratureConfig& cfg) {
  require_depth(delta_b, "key_rate_coherent");
  require_advantage(advantage);
  const double ratio = depth_ratio(modulation);
  return gaussian_eve_rate(Scenario::Coherent, delta_b, advantage,
                           ratio * std::sqrt(advantage) * delta_b,
                           advantage * ratio * ratio, cfg);
}

RateResult key_rate_helstrom(double delta_e_coh, double advantage,
                             const QuadratureConfig& cfg,
                             const std::optional<ModulationScheme>& modulation) {
  require_depth(delta_e_coh, "key_rate_helstrom");
  require_advantage(advantage);
  const double ratio = depth_ratio(modulation);
  const double delta_b = delta_e_coh / (ratio * std::sqrt(advantage));
  RateResult r = helstrom_rate(delta_b, advantage, ratio, cfg);
  r.delta_e_coh = delta_e_coh;
  return r;
}

RateResult key_rate_holevo(double delta_b, double advantage,
                           const QuadratureConfig& cfg) {
  require_depth(delta_b, "key_rate_holevo");
  require_advantage(advantage);
  RateResult r;
  r.scenario = Scenario::Holevo;
  r.advantage = advantage;
  r.delta_b = delta_b;
  r.delta_e = std::sqrt(advantage) * delta_b;
  const Integral i_ab = mutual_info_ab(delta_b, cfg);
  const Integral chi = holevo_chi(delta_b, r.delta_e, cfg);
  r.i_ab = i_ab.value;
  r.leak = chi.value;
  r.key_rate = std::max(i_ab.value - chi.value, 0.0);
  r.quadrature_residual = i_ab.error + chi.error;
  r.asymptotic_estimate =
      kLog2E / (2.0 * advantage) * chi_bracket(r.delta_e);
  return r;
}

RateResult key_rate(Scenario scenario, double delta_b, double advantage,
                    const QuadratureConfig& cfg,
                    const std::optional<ModulationScheme>& modulation) {
  switch (scenario) {
    case Scenario::DirectDetection:
      return key_rate_dd(delta_b, advantage, cfg);
    case Scenario::Coherent:
      return key_rate_coherent(delta_b, advantage, modulation, cfg);
    case Scenario::Helstrom:
      require_depth(delta_b, "key_rate");
      require_advantage(advantage);
      return helstrom_rate(delta_b, advantage, depth_ratio(modulation), cfg);
    case Scenario::Holevo:
      return key_rate_holevo(delta_b, advantage, cfg);
  }
  throw DomainError("key_rate: unknown scenario");
}

Integral gamma_bracket(double delta, const QuadratureConfig& cfg) {
  const double d = finite_abs(delta, "gamma_bracket");
  const double centers[] = {d};
  // (sinh 2x + 1) / cosh^2 x = 2 tanh x + sech^2 x.
  auto integrand = [d](double t) {
    const double x = d * t;
    return normal_pdf(t - d) *
           (2.0 * std::tanh(x) + std::exp(-2.0 * log_cosh(x)));
  };
  const auto q = integrate_1d(integrand, centers, cfg);
  return {d * d * (2.0 - q.value), d * d * q.error_estimate};
}

double chi_bracket(double delta) {
  const double d = finite_abs(delta, "chi_bracket");
  const double d2 = d * d;
  const double u = 0.5 * d2;
  if (d2 == 0.0) return 0.0;
  if (d2 < 1e-4) {
    // sinh(u) log(coth(u/2)) = u L + u^3 (L/6 + 1/12) + O(u^5 L), L = log(2/u).
    const double big_l = std::log(2.0 / u);
    return d2 * (1.0 - u * big_l - u * u * u * (big_l / 6.0 + 1.0 / 12.0));
  }
  if (u > 30.0) {
    // 2 arccoth(x) sinh(u) = 1 - (2/3) x^-2 + O(x^-4), x = e^u.
    return d2 * (2.0 / 3.0) * std::exp(-d2);
  }
  const double arccoth = 0.5 * std::log1p(2.0 / std::expm1(u));
  return d2 * (1.0 - 2.0 * arccoth * std::sinh(u));
}

double helstrom_bracket(double delta) noexcept {
  const double d2 = delta * delta;
  return d2 * std::exp(-d2);
}

ConstantEstimate gamma_constant(const QuadratureConfig& cfg) {
  MaximizeOptions opts;
  opts.tol = 1e-7;
  const auto best = maximize_scalar(
      [&cfg](double d) { return gamma_bracket(d, cfg).value; }, 1e-3, 10.0,
      opts);
  return {best.max, best.argmax, opts.tol,
          gamma_bracket(best.argmax, cfg).error};
}

ConstantEstimate chi_constant() {
  MaximizeOptions opts;
  opts.tol = 1e-7;
  const auto best = maximize_scalar([](double d) { return chi_bracket(d); },
                                    1e-3, 10.0, opts);
  return {best.max, best.argmax, opts.tol, 0.0};
}

ConstantEstimate helstrom_constant() noexcept {
  return {1.0 / std::numbers::e, 1.0, 0.0, 0.0};
}

double asymptotic_constant(Scenario scenario) {
  switch (scenario) {
    case Scenario::DirectDetection:
    case Scenario::Coherent: {
      static const double gamma = gamma_constant().value;
      return gamma;
    }
    case Scenario::Helstrom:
      return 1.0 / std::numbers::e;
    case Scenario::Holevo: {
      static const double chi = chi_constant().value;
      return chi;
    }
  }
  throw DomainError("asymptotic_constant: unknown scenario");
}

double key_rate_asymptotic(Scenario scenario, double advantage) {
  require_advantage(advantage);
  return asymptotic_constant(scenario) * kLog2E / (2.0 * advantage);
}

double key_rate_dd_asymptotic(double advantage) {
  return key_rate_asymptotic(Scenario::DirectDetection, advantage);
}

double key_rate_helstrom_asymptotic(double delta_e_coh, double advantage) {
  require_depth(delta_e_coh, "key_rate_helstrom_asymptotic");
  require_advantage(advantage);
  return kLog2E / (2.0 * advantage) * helstrom_bracket(delta_e_coh);
}

double key_rate_holevo_asymptotic(double advantage) {
  return key_rate_asymptotic(Scenario::Holevo, advantage);
}

}  // namespace okd
