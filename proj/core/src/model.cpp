#include "okd/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "okd/errors.hpp"

namespace okd {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool in_unit_interval_open_left(double x) { return x > 0.0 && x <= 1.0; }

}  // namespace

ChannelParams::ChannelParams(double tau_b, double tau_e, double sigma_b,
                             double sigma_e, double n_bar, double excess,
                             bool snl)
    : tau_b_(tau_b),
      tau_e_(tau_e),
      sigma_b_(sigma_b),
      sigma_e_(sigma_e),
      sigma_b_excess_sq_(excess),
      n_bar_(n_bar),
      shot_noise_limited_(snl) {
  require(in_unit_interval_open_left(tau_b), "tau_b must lie in (0, 1]");
  require(in_unit_interval_open_left(tau_e), "tau_e must lie in (0, 1]");
  require(std::isfinite(sigma_b) && sigma_b > 0.0, "sigma_b must be > 0");
  require(std::isfinite(sigma_e) && sigma_e > 0.0, "sigma_e must be > 0");
  require(std::isfinite(n_bar) && n_bar > 0.0, "n_bar must be > 0");
  require(std::isfinite(excess) && excess >= 0.0,
          "excess noise variance must be >= 0");
}

ChannelParams ChannelParams::general(double tau_b, double tau_e,
                                     double sigma_b, double sigma_e,
                                     double n_bar, double sigma_b_excess_sq) {
  return ChannelParams(tau_b, tau_e, sigma_b, sigma_e, n_bar,
                       sigma_b_excess_sq, false);
}

ChannelParams ChannelParams::shot_noise_limited(double tau_b, double tau_e,
                                                double n_bar,
                                                double sigma_b_excess_sq) {
  require(in_unit_interval_open_left(tau_b), "tau_b must lie in (0, 1]");
  require(in_unit_interval_open_left(tau_e), "tau_e must lie in (0, 1]");
  require(std::isfinite(n_bar) && n_bar > 0.0, "n_bar must be > 0");
  require(std::isfinite(sigma_b_excess_sq) && sigma_b_excess_sq >= 0.0,
          "excess noise variance must be >= 0");
  return ChannelParams(tau_b, tau_e,
                       std::sqrt(tau_b * n_bar + sigma_b_excess_sq),
                       std::sqrt(tau_e * n_bar), n_bar, sigma_b_excess_sq,
                       true);
}

ModulationScheme::ModulationScheme(double n0, double n1) : n0_(n0), n1_(n1) {
  require(std::isfinite(n0) && n0 > 0.0, "n0 must be > 0");
  require(std::isfinite(n1) && n1 >= n0, "n1 must be >= n0");
}

ModulationScheme ModulationScheme::from_relative_spread(
    double n_bar, double relative_spread) {
  require(std::isfinite(n_bar) && n_bar > 0.0, "n_bar must be > 0");
  require(std::isfinite(relative_spread) && relative_spread >= 0.0 &&
              relative_spread < 2.0,
          "relative spread must lie in [0, 2)");
  const double half = 0.5 * relative_spread * n_bar;
  return ModulationScheme(n_bar - half, n_bar + half);
}

double ModulationScheme::alpha_bar() const noexcept {
  return 0.5 * (std::sqrt(n0_) + std::sqrt(n1_));
}

double ModulationScheme::coherent_depth_ratio() const noexcept {
  return std::sqrt(2.0 * (n0_ + n1_)) / (std::sqrt(n0_) + std::sqrt(n1_));
}

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::DirectDetection:
      return "dd";
    case Scenario::Coherent:
      return "coherent";
    case Scenario::Helstrom:
      return "helstrom";
    case Scenario::Holevo:
      return "holevo";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "dd" || name == "direct") return Scenario::DirectDetection;
  if (name == "coherent" || name == "coh") return Scenario::Coherent;
  if (name == "helstrom") return Scenario::Helstrom;
  if (name == "holevo") return Scenario::Holevo;
  throw DomainError("unknown scenario '" + std::string(name) + "'");
}

double eavesdropper_advantage(const ChannelParams& ch) noexcept {
  if (ch.is_shot_noise_limited()) {
    return (ch.tau_e() / ch.tau_b()) *
           (1.0 + ch.sigma_b_excess_sq() / (ch.tau_b() * ch.n_bar()));
  }
  const double ratio =
      (ch.tau_e() / ch.sigma_e()) / (ch.tau_b() / ch.sigma_b());
  return ratio * ratio;
}

Depths modulation_depths(const ChannelParams& ch,
                         const ModulationScheme& mod) {
  const double dn = mod.delta_n();
  Depths d;
  d.delta_b = ch.tau_b() * dn / (2.0 * ch.sigma_b());
  d.delta_e = ch.tau_e() * dn / (2.0 * ch.sigma_e());
  // sqrt(n1) - sqrt(n0) without cancellation.
  d.delta_e_coh =
      std::sqrt(ch.tau_e()) * dn / (std::sqrt(mod.n1()) + std::sqrt(mod.n0()));
  d.advantage = eavesdropper_advantage(ch);
  return d;
}

bool macroscopic_regime_ok(const ChannelParams& ch,
                           const ModulationScheme& mod) noexcept {
  if (mod.relative_spread() > 0.2) return false;
  return ch.tau_b() * mod.n0() >= 100.0 && ch.tau_e() * mod.n0() >= 100.0;
}

double helstrom_error_probability(double delta_e_coh) {
  if (!(delta_e_coh >= 0.0)) {
    throw DomainError("helstrom_error_probability: depth must be >= 0");
  }
  const double d2 = delta_e_coh * delta_e_coh;
  const double overlap = std::exp(-d2);
  const double one_minus_overlap = -std::expm1(-d2);
  // 1/2 (1 - sqrt(1 - q)) rewritten as q / (2 (1 + sqrt(1 - q))).
  return 0.5 * overlap / (1.0 + std::sqrt(one_minus_overlap));
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("binary_entropy: argument must lie in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  if (x > 0.5) x = 1.0 - x;
  return -(x * std::log2(x) + (1.0 - x) * std::log1p(-x) * kLog2E);
}

double coherent_mixture_entropy(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("coherent_mixture_entropy: p must lie in [0, 1]");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    throw DomainError("coherent_mixture_entropy: q must lie in [0, 1]");
  }
  constexpr double kClamp = 1e-12;
  const double w = p * (1.0 - p);
  // 1 - 4p + 4p^2 + 4pq - 4p^2 q regrouped as a sum of non-negative terms.
  double radicand = (1.0 - 2.0 * p) * (1.0 - 2.0 * p) + 4.0 * w * q;
  if (radicand < -kClamp || radicand > 1.0 + kClamp || !std::isfinite(radicand)) {
    throw NumericError("coherent_mixture_entropy: radicand out of range");
  }
  radicand = std::min(std::max(radicand, 0.0), 1.0);
  // Smaller eigenvalue 1/2 (1 - sqrt(r)) = (1 - r) / (2 (1 + sqrt(r))), with
  // 1 - r = 4 p (1-p) (1-q) computed directly.
  const double lambda = 2.0 * w * (1.0 - q) / (1.0 + std::sqrt(radicand));
  return binary_entropy(std::min(lambda, 0.5));
}

}  // namespace okd
