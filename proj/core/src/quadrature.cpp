#include "okd/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "okd/errors.hpp"

namespace okd {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
};

bool by_error(const Panel& a, const Panel& b) { return a.error < b.error; }

double checked(double v) {
  if (!std::isfinite(v)) {
    throw NumericError("integrand returned a non-finite value");
  }
  return v;
}

// One 15-point Kronrod / 7-point Gauss panel with the QUADPACK error
// heuristic. Kronrod abscissae are ascending from 0; the Gauss points sit at
// even indices.
Panel gauss_kronrod_panel(FunctionRef<double(double)> f, double lo,
                          double hi) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  std::array<double, 15> fv{};
  fv[0] = checked(f(center));
  for (std::size_t i = 1; i < 8; ++i) {
    fv[2 * i - 1] = checked(f(center - half * xk[i]));
    fv[2 * i] = checked(f(center + half * xk[i]));
  }

  double kronrod = wk[0] * fv[0];
  double gauss = wg[0] * fv[0];
  double abs_sum = wk[0] * std::abs(fv[0]);
  for (std::size_t i = 1; i < 8; ++i) {
    const double pair = fv[2 * i - 1] + fv[2 * i];
    kronrod += wk[i] * pair;
    abs_sum += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 0) gauss += wg[i / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < 8; ++i) {
    asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
  }

  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);

  double err = std::abs(kronrod - gauss);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * abs_sum, err);
  }
  return {lo, hi, kronrod, err};
}

std::vector<double> panel_nodes(const std::vector<Interval>& support,
                                std::size_t panels,
                                const GaussLegendreRule& rule,
                                std::vector<double>& weights) {
  std::vector<double> nodes;
  nodes.reserve(support.size() * panels * rule.nodes.size());
  weights.clear();
  weights.reserve(nodes.capacity());
  for (const auto& iv : support) {
    const double width = (iv.hi - iv.lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = iv.lo + width * static_cast<double>(p);
      const double c = lo + 0.5 * width;
      const double h = 0.5 * width;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        nodes.push_back(c + h * rule.nodes[i]);
        weights.push_back(h * rule.weights[i]);
      }
    }
  }
  return nodes;
}

double tensor_sum(FunctionRef<double(double, double)> f,
                  const std::vector<Interval>& sx,
                  const std::vector<Interval>& sy, std::size_t panels,
                  const GaussLegendreRule& rule, std::size_t& evaluations) {
  std::vector<double> wx;
  std::vector<double> wy;
  const auto xs = panel_nodes(sx, panels, rule, wx);
  const auto ys = panel_nodes(sy, panels, rule, wy);
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      row += wy[j] * f(xs[i], ys[j]);
    }
    if (!std::isfinite(row)) {
      throw NumericError("integrand returned a non-finite value");
    }
    total += wx[i] * row;
  }
  evaluations += xs.size() * ys.size();
  return total;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
  if (!(truncation_sigmas >= 6.0) || !std::isfinite(truncation_sigmas)) {
    throw DomainError("truncation_sigmas must be >= 6");
  }
  if (max_nodes_1d < 30) throw DomainError("max_nodes_1d must be >= 30");
  if (nodes_2d_per_axis < 3) {
    throw DomainError("nodes_2d_per_axis must be >= 3");
  }
}

std::vector<Interval> truncated_support(std::span<const double> centers,
                                        double half_width) {
  if (centers.empty()) throw DomainError("at least one centre is required");
  std::vector<double> sorted(centers.begin(), centers.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Interval> out;
  for (double c : sorted) {
    if (!std::isfinite(c)) throw DomainError("centres must be finite");
    const Interval iv{c - half_width, c + half_width};
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

QuadratureResult integrate_1d(FunctionRef<double(double)> f,
                              std::span<const double> centers,
                              const QuadratureConfig& cfg) {
  cfg.validate();
  const auto support = truncated_support(centers, cfg.truncation_sigmas);

  std::vector<Panel> heap;
  std::size_t evaluations = 0;
  // Start from panels of at most 5 sigma so that separated mixture
  // components are resolved before the error heuristic takes over.
  for (const auto& iv : support) {
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil((iv.hi - iv.lo) / 5.0)));
    const double w = (iv.hi - iv.lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = iv.lo + w * static_cast<double>(i);
      const double hi = (i + 1 == n) ? iv.hi : lo + w;
      heap.push_back(gauss_kronrod_panel(f, lo, hi));
      evaluations += 15;
    }
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&heap] {
    double v = 0.0;
    double e = 0.0;
    for (const auto& p : heap) {
      v += p.value;
      e += p.error;
    }
    return std::pair{v, e};
  };

  auto [value, error] = totals();
  while (error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value))) {
    if (evaluations + 30 > cfg.max_nodes_1d) {
      std::ostringstream msg;
      msg << "integrate_1d: error estimate " << error << " above tolerance after "
          << evaluations << " evaluations";
      throw ConvergenceError(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    heap.push_back(gauss_kronrod_panel(f, worst.lo, mid));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gauss_kronrod_panel(f, mid, worst.hi));
    std::push_heap(heap.begin(), heap.end(), by_error);
    evaluations += 30;
    std::tie(value, error) = totals();
  }
  return {value, error, evaluations};
}

QuadratureResult integrate_2d(FunctionRef<double(double, double)> f,
                              std::span<const double> centers_x,
                              std::span<const double> centers_y,
                              const QuadratureConfig& cfg) {
  cfg.validate();
  const auto sx = truncated_support(centers_x, cfg.truncation_sigmas);
  const auto sy = truncated_support(centers_y, cfg.truncation_sigmas);
  const auto& fine = gauss_legendre(cfg.nodes_2d_per_axis);
  const auto& coarse = gauss_legendre((cfg.nodes_2d_per_axis + 1) / 2);

  constexpr std::size_t kMaxPanels = 8;
  std::size_t evaluations = 0;
  double error = 0.0;
  for (std::size_t panels = 1; panels <= kMaxPanels; panels *= 2) {
    const double hi = tensor_sum(f, sx, sy, panels, fine, evaluations);
    const double lo = tensor_sum(f, sx, sy, panels, coarse, evaluations);
    error = std::abs(hi - lo);
    if (error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(hi))) {
      return {hi, error, evaluations};
    }
  }
  std::ostringstream msg;
  msg << "integrate_2d: error estimate " << error << " above tolerance with "
      << kMaxPanels << " panels per window";
  throw ConvergenceError(msg.str());
}

double log_cosh(double x) noexcept {
  const double ax = std::abs(x);
  if (ax <= 1.0) {
    // cosh x - 1 = 2 sinh^2(x/2), accurate for small x.
    const double s = std::sinh(0.5 * ax);
    return std::log1p(2.0 * s * s);
  }
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double log_add_exp(double a, double b) noexcept {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double normal_pdf(double x) noexcept {
  constexpr double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

const GaussLegendreRule& gauss_legendre(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    if (order < 1) throw DomainError("Gauss-Legendre order must be >= 1");
    const auto n = static_cast<int>(order);
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    auto rule = std::make_unique<GaussLegendreRule>();
    auto weight = [n](double x) {
      const double dp = boost::math::legendre_p_prime(n, x);
      return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    // zeros holds the non-negative roots in ascending order; mirror them.
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
      if (*it == 0.0) continue;
      rule->nodes.push_back(-*it);
      rule->weights.push_back(weight(*it));
    }
    for (double z : zeros) {
      rule->nodes.push_back(z);
      rule->weights.push_back(weight(z));
    }
    slot = std::move(rule);
  }
  return *slot;
}

}  // namespace okd
