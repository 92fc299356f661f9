#pragma once

// Physical parameterization of binary intensity-modulated key distribution
// and the closed-form elementary quantities built from it.
//
// Bob and Eve see Gaussian photocounts k|a ~ N(tau * n_a, sigma^2). After
// standardization around tau * n_bar the conditional means are +/- delta, so
// every rate in this library is a function of the depths (delta_b, delta_e)
// or, after eliminating delta_e, of delta_b and the eavesdropper's advantage.

#include <array>
#include <string_view>

namespace okd {

/// log2(e), the conversion factor from nats to bits.
inline constexpr double kLog2E = 1.4426950408889634074;

/// Link and tap parameters. Values are validated on construction and
/// immutable afterwards.
class ChannelParams {
 public:
  /// Fully general channel: arbitrary detection noise on both sides.
  /// Throws DomainError unless tau in (0,1], sigma > 0, n_bar > 0 and
  /// sigma_b_excess_sq >= 0.
  static ChannelParams general(double tau_b, double tau_e, double sigma_b,
                               double sigma_e, double n_bar,
                               double sigma_b_excess_sq = 0.0);

  /// Worst case for Alice and Bob: Eve is shot-noise limited
  /// (sigma_e^2 = tau_e n_bar) and Bob carries shot noise plus an excess
  /// variance (sigma_b^2 = tau_b n_bar + excess).
  static ChannelParams shot_noise_limited(double tau_b, double tau_e,
                                          double n_bar,
                                          double sigma_b_excess_sq = 0.0);

  double tau_b() const noexcept { return tau_b_; }
  double tau_e() const noexcept { return tau_e_; }
  double sigma_b() const noexcept { return sigma_b_; }
  double sigma_e() const noexcept { return sigma_e_; }
  double sigma_b_excess_sq() const noexcept { return sigma_b_excess_sq_; }
  double n_bar() const noexcept { return n_bar_; }
  bool is_shot_noise_limited() const noexcept { return shot_noise_limited_; }

 private:
  ChannelParams(double tau_b, double tau_e, double sigma_b, double sigma_e,
                double n_bar, double excess, bool snl);

  double tau_b_;
  double tau_e_;
  double sigma_b_;
  double sigma_e_;
  double sigma_b_excess_sq_;
  double n_bar_;
  bool shot_noise_limited_;
};

/// Alice's two pulse energies. Requires n1 >= n0 > 0; n0 == n1 is the
/// degenerate unmodulated scheme.
class ModulationScheme {
 public:
  ModulationScheme(double n0, double n1);

  /// Scheme centred on n_bar with relative spread delta_n / n_bar.
  static ModulationScheme from_relative_spread(double n_bar,
                                               double relative_spread);

  double n0() const noexcept { return n0_; }
  double n1() const noexcept { return n1_; }
  double n_bar() const noexcept { return 0.5 * (n0_ + n1_); }
  double delta_n() const noexcept { return n1_ - n0_; }
  double alpha_bar() const noexcept;
  double relative_spread() const noexcept { return delta_n() / n_bar(); }

  /// delta_e_coh / delta_e = sqrt(2 (n0 + n1)) / (sqrt n0 + sqrt n1).
  double coherent_depth_ratio() const noexcept;

 private:
  double n0_;
  double n1_;
};

struct Depths {
  double delta_b = 0.0;
  double delta_e = 0.0;
  double delta_e_coh = 0.0;
  double advantage = 1.0;
};

enum class Scenario { DirectDetection, Coherent, Helstrom, Holevo };

inline constexpr std::array<Scenario, 4> kAllScenarios = {
    Scenario::DirectDetection, Scenario::Coherent, Scenario::Helstrom,
    Scenario::Holevo};

/// Short lowercase name used on the command line and in CSV output
/// ("dd", "coherent", "helstrom", "holevo").
std::string_view to_string(Scenario s) noexcept;

/// Inverse of to_string; also accepts "direct". Throws DomainError.
Scenario parse_scenario(std::string_view name);

/// E = ((tau_e / sigma_e) / (tau_b / sigma_b))^2.
double eavesdropper_advantage(const ChannelParams& ch) noexcept;

/// Depths of both parties for a concrete channel and modulation. The
/// advantage field is eavesdropper_advantage(ch).
Depths modulation_depths(const ChannelParams& ch, const ModulationScheme& mod);

/// False when the Gaussian, small-modulation picture is questionable:
/// delta_n / n_bar > 0.2, or fewer than 100 detected photons in the weaker
/// pulse for either party. Advisory only.
bool macroscopic_regime_ok(const ChannelParams& ch,
                           const ModulationScheme& mod) noexcept;

/// Minimum error probability for discriminating the two coherent states
/// seen by Eve, 1/2 (1 - sqrt(1 - exp(-delta_coh^2))).
double helstrom_error_probability(double delta_e_coh);

/// h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

/// Von Neumann entropy in bits of p|alpha><alpha| + (1-p)|beta><beta| where
/// q = |<alpha|beta>|^2.
double coherent_mixture_entropy(double p, double q);

}  // namespace okd
