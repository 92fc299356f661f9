#pragma once

// Optimal modulation depth per eavesdropper and sweeps over the
// eavesdropper's advantage.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "okd/maximize.hpp"
#include "okd/model.hpp"
#include "okd/quadrature.hpp"
#include "okd/rates.hpp"

namespace okd {

struct OptimizeOptions {
  /// Search bracket for Bob's depth.
  double delta_lo = 1e-3;
  double delta_hi = 12.0;
  /// Accuracy of the optimal depth.
  double tol = 1e-6;
  /// Supplies the exact homodyne/intensity depth ratio for the Coherent and
  /// Helstrom eavesdroppers; without it the depths are taken equal.
  std::optional<ModulationScheme> modulation;
};

/// Exact key rate of `scenario` maximized over delta_b in
/// [delta_lo, delta_hi]. A rate that is flat to within 10 * abs_tol over the
/// coarse scan is reported at delta_lo.
RateResult optimal_rate(Scenario scenario, double advantage,
                        const QuadratureConfig& cfg = {},
                        const OptimizeOptions& opts = {});

struct SweepGrid {
  double min = 1.0;
  double max = 1000.0;
  std::size_t points = 25;
  bool log_spaced = true;

  /// Throws DomainError unless 0 < min <= max and points >= 1 (min == max
  /// requires points == 1).
  void validate() const;
  std::vector<double> values() const;
};

struct SweepRow {
  double advantage = 0.0;
  Scenario scenario = Scenario::DirectDetection;
  double delta_b_opt = 0.0;
  double delta_e_opt = 0.0;
  double key_rate = 0.0;
  /// c log2(e) / (2 E) with the scenario's strong-eavesdropping constant.
  double key_rate_asymptotic = 0.0;
  /// Non-empty when the row failed; numeric fields are then NaN.
  std::string error;
  RateResult detail;
};

struct SweepTable {
  SweepGrid grid;
  /// Grid order, and for each grid point the scenarios in request order.
  std::vector<SweepRow> rows;
};

/// One optimal_rate row per (grid point, scenario). Rows are computed on up
/// to `threads` workers (0 = default) and assembled in deterministic order;
/// a failing row is annotated instead of aborting the sweep.
SweepTable sweep(std::span<const Scenario> scenarios, const SweepGrid& grid,
                 const QuadratureConfig& cfg = {},
                 const OptimizeOptions& opts = {}, unsigned threads = 0);

}  // namespace okd
