#pragma once

// Information quantities and secret-key rates for the four eavesdroppers.
//
// Rates are in bits per protocol round. Exact rates come from quadrature;
// the strong-eavesdropping forms all share the scaling
//     K ~ c * log2(e) / (2 E),
// with c = gamma (direct/coherent detection), 1/e (Helstrom) or chi
// (Holevo-optimal collective measurement).
//
// Entropy and information functions accept either sign of the depths and
// use |delta|; the key-rate entry points require delta >= 0.

#include <optional>

#include "okd/model.hpp"
#include "okd/quadrature.hpp"

namespace okd {

/// A quadrature-backed value and the error estimate it carries (bits).
struct Integral {
  double value = 0.0;
  double error = 0.0;
};

struct RateResult {
  Scenario scenario = Scenario::DirectDetection;
  double advantage = 1.0;
  double delta_b = 0.0;
  double delta_e = 0.0;
  /// Eve's homodyne/Helstrom depth; set for Coherent and Helstrom.
  std::optional<double> delta_e_coh;
  double i_ab = 0.0;
  /// I(B;E) for the measuring eavesdroppers, chi(B;E) for Holevo.
  double leak = 0.0;
  double key_rate = 0.0;
  /// Strong-eavesdropping approximation evaluated at this result's depth.
  double asymptotic_estimate = 0.0;
  /// Sum of the quadrature error estimates that went into key_rate.
  double quadrature_residual = 0.0;
  /// |(i_ab - leak) - (H(B|E) - H(B|A))|; zero for Holevo.
  double consistency_gap = 0.0;
};

/// H(B|A) = 1/2 log2(2 pi e).
double h_b_given_a() noexcept;

/// Differential entropy of Bob's balanced two-Gaussian mixture, H(B).
Integral bob_entropy(double delta_b, const QuadratureConfig& cfg = {});

/// H(B|E) when Eve detects intensity (or homodynes) with depth delta_e.
Integral h_b_given_e_dd(double delta_b, double delta_e,
                        const QuadratureConfig& cfg = {});

/// H(B|E) when Eve makes a minimum-error (Helstrom) decision on her pulse.
Integral h_b_given_e_helstrom(double delta_b, double delta_e_coh,
                              const QuadratureConfig& cfg = {});

/// I(A;B) = delta^2 log2 e - E_{t ~ N(delta,1)}[log2 cosh(delta t)].
Integral mutual_info_ab(double delta_b, const QuadratureConfig& cfg = {});

/// Holevo quantity chi(B;E) of the induced B -> E ensemble of two-coherent-
/// state mixtures with overlap exp(-delta_e^2).
Integral holevo_chi(double delta_b, double delta_e,
                    const QuadratureConfig& cfg = {});

/// Eve's depth is sqrt(E) delta_b.
RateResult key_rate_dd(double delta_b, double advantage,
                       const QuadratureConfig& cfg = {});

/// Direct-detection pipeline with Eve's depth replaced by the homodyne
/// depth. Without a modulation scheme the two depths coincide.
RateResult key_rate_coherent(double delta_b, double advantage,
                             const std::optional<ModulationScheme>& modulation,
                             const QuadratureConfig& cfg = {});

/// Helstrom eavesdropper; Bob's depth is delta_e_coh / sqrt(E), or
/// delta_e_coh / (ratio sqrt(E)) when a modulation scheme supplies the
/// homodyne/intensity depth ratio.
RateResult key_rate_helstrom(
    double delta_e_coh, double advantage, const QuadratureConfig& cfg = {},
    const std::optional<ModulationScheme>& modulation = std::nullopt);

/// max(I(A;B) - chi(B;E), 0) with delta_e = sqrt(E) delta_b.
RateResult key_rate_holevo(double delta_b, double advantage,
                           const QuadratureConfig& cfg = {});

/// Scenario dispatch parameterized uniformly by Bob's depth.
RateResult key_rate(Scenario scenario, double delta_b, double advantage,
                    const QuadratureConfig& cfg = {},
                    const std::optional<ModulationScheme>& modulation =
                        std::nullopt);

/// A maximized strong-eavesdropping constant.
struct ConstantEstimate {
  double value = 0.0;
  double argmax = 0.0;
  /// Optimizer bracket half-width on argmax.
  double optimizer_tol = 0.0;
  /// Quadrature error estimate at the optimum (0 for closed forms).
  double quadrature_residual = 0.0;
};

/// delta^2 (2 - E_{t ~ N(delta,1)}[(sinh(2 delta t) + 1) / cosh^2(delta t)]).
Integral gamma_bracket(double delta, const QuadratureConfig& cfg = {});

/// delta^2 [1 - 2 arccoth(exp(delta^2/2)) sinh(delta^2/2)].
double chi_bracket(double delta);

/// delta^2 exp(-delta^2).
double helstrom_bracket(double delta) noexcept;

ConstantEstimate gamma_constant(const QuadratureConfig& cfg = {});
ConstantEstimate chi_constant();
/// 1/e at delta = 1, in closed form.
ConstantEstimate helstrom_constant() noexcept;

/// gamma, gamma, 1/e or chi. The gamma value is computed once per process.
double asymptotic_constant(Scenario scenario);

/// gamma log2(e) / (2 E).
double key_rate_dd_asymptotic(double advantage);

/// (log2(e) / (2 E)) delta^2 exp(-delta^2).
double key_rate_helstrom_asymptotic(double delta_e_coh, double advantage);

/// chi log2(e) / (2 E).
double key_rate_holevo_asymptotic(double advantage);

/// c log2(e) / (2 E) for the scenario's constant c.
double key_rate_asymptotic(Scenario scenario, double advantage);

}  // namespace okd
