#include "okd/optimize.hpp"

#include <cmath>
#include <limits>

#include "okd/errors.hpp"
#include "okd/parallel.hpp"

namespace okd {

RateResult optimal_rate(Scenario scenario, double advantage,
                        const QuadratureConfig& cfg,
                        const OptimizeOptions& opts) {
  if (!(std::isfinite(advantage) && advantage > 0.0)) {
    throw DomainError("optimal_rate: advantage must be finite and > 0");
  }
  cfg.validate();
  MaximizeOptions mopts;
  mopts.tol = opts.tol;
  mopts.flat_threshold = 10.0 * cfg.abs_tol;
  const auto best = maximize_scalar(
      [&](double delta_b) {
        return key_rate(scenario, delta_b, advantage, cfg, opts.modulation)
            .key_rate;
      },
      opts.delta_lo, opts.delta_hi, mopts);
  RateResult r =
      key_rate(scenario, best.argmax, advantage, cfg, opts.modulation);
  if (best.flat) r.key_rate = 0.0;
  return r;
}

void SweepGrid::validate() const {
  if (!(std::isfinite(min) && std::isfinite(max) && min > 0.0 && min <= max)) {
    throw DomainError("sweep grid: require 0 < min <= max");
  }
  if (points < 1) throw DomainError("sweep grid: points must be >= 1");
  if (min == max && points != 1) {
    throw DomainError("sweep grid: min == max requires a single point");
  }
}

std::vector<double> SweepGrid::values() const {
  validate();
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = min;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = log_spaced ? min * std::pow(max / min, t) : min + (max - min) * t;
  }
  out.front() = min;
  out.back() = max;
  return out;
}

SweepTable sweep(std::span<const Scenario> scenarios, const SweepGrid& grid,
                 const QuadratureConfig& cfg, const OptimizeOptions& opts,
                 unsigned threads) {
  cfg.validate();
  if (scenarios.empty()) throw DomainError("sweep: no scenarios requested");
  const auto advantages = grid.values();

  SweepTable table;
  table.grid = grid;
  table.rows.resize(advantages.size() * scenarios.size());
  parallel_for(table.rows.size(), threads, [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    row.advantage = advantages[i / scenarios.size()];
    row.scenario = scenarios[i % scenarios.size()];
    try {
      row.detail = optimal_rate(row.scenario, row.advantage, cfg, opts);
      row.delta_b_opt = row.detail.delta_b;
      row.delta_e_opt = row.detail.delta_e;
      row.key_rate = row.detail.key_rate;
      row.key_rate_asymptotic =
          key_rate_asymptotic(row.scenario, row.advantage);
    } catch (const std::exception& e) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      row.delta_b_opt = row.delta_e_opt = row.key_rate = nan;
      row.key_rate_asymptotic = nan;
      row.error = e.what();
    }
  });
  return table;
}

}  // namespace okd
