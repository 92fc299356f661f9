#pragma once

// Monte Carlo simulation of protocol rounds in standardized variables and
// binned plug-in estimates of the information quantities. This is the
// sampling-based cross-check for the quadrature pipeline in rates.hpp.
//
// Rounds are split into fixed-size substreams, each with its own generator
// seeded from (seed, stream index). Sample streams and estimates therefore
// depend only on the configuration, never on the worker count.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "okd/function_ref.hpp"
#include "okd/model.hpp"

namespace okd {

struct SimConfig {
  std::uint64_t rounds = 1'000'000;
  std::uint64_t seed = 0;
  /// DirectDetection, Coherent or Helstrom. Holevo has no sampling model.
  Scenario scenario = Scenario::DirectDetection;
  /// Direct detection samples Eve at delta_e; Coherent uses delta_e_coh as
  /// her Gaussian depth; Helstrom flips a with P_err(delta_e_coh).
  Depths depths;
  std::size_t bins = 256;
  std::size_t bootstrap_resamples = 20;

  /// Throws DomainError on rounds < 10^4, bins < 16, a Holevo scenario or
  /// invalid depths.
  void validate() const;

  /// True when Eve's outcome is the Helstrom bit rather than a real number.
  bool discrete_eve() const noexcept {
    return scenario == Scenario::Helstrom;
  }
  /// Depth of Eve's Gaussian outcome (0 for Helstrom).
  double eve_depth() const noexcept;
};

struct RoundSample {
  std::uint8_t a = 0;
  double y_b = 0.0;
  /// Continuous Eve outcome; unused for Helstrom.
  double y_e = 0.0;
  /// Helstrom decision; unused otherwise.
  std::uint8_t m_e = 0;
};

inline constexpr std::uint64_t kRoundsPerStream = 1u << 16;

/// Generator for one substream of rounds.
class RoundSampler {
 public:
  RoundSampler(const SimConfig& cfg, std::uint64_t stream);
  RoundSample next();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
  double delta_b_;
  double delta_eve_;
  double p_err_;
  bool discrete_;
};

/// Streams every round, in order, to `sink`.
void simulate(const SimConfig& cfg, FunctionRef<void(const RoundSample&)> sink);

/// Materialized simulate(); intended for modest round counts.
std::vector<RoundSample> simulate_rounds(const SimConfig& cfg);

/// Counts over (a, Bob bin, Eve bin). Eve has 2 "bins" in the Helstrom
/// scenario. Bins span +/- (max depth + 6); outliers land in the edge bins.
class JointHistogram {
 public:
  JointHistogram(std::size_t bob_bins, std::size_t eve_bins, double half_range);

  /// Layout and range used for a given configuration.
  static JointHistogram for_config(const SimConfig& cfg);

  void add(const RoundSample& s, bool discrete_eve);
  void merge(const JointHistogram& other);

  std::size_t bob_bins() const noexcept { return bob_bins_; }
  std::size_t eve_bins() const noexcept { return eve_bins_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(std::size_t a, std::size_t b, std::size_t e) const {
    return counts_[index(a, b, e)];
  }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::size_t bin_of(double y) const noexcept;

  /// Copy with counts drawn multinomially from this histogram's cell
  /// frequencies, i.e. a bootstrap resample of the underlying rounds.
  JointHistogram resample(std::mt19937_64& engine) const;

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t e) const {
    return (a * bob_bins_ + b) * eve_bins_ + e;
  }

  std::size_t bob_bins_;
  std::size_t eve_bins_;
  double half_range_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Accumulates all rounds of cfg on up to `threads` workers (0 = default).
JointHistogram accumulate(const SimConfig& cfg, unsigned threads = 0);

enum class MiPair { AB, BE };

struct MiEstimate {
  double bits = 0.0;
  double std_error = 0.0;
};

/// Plug-in mutual information in bits with the Miller-Madow correction on
/// every entropy term. Throws DomainError below 10^4 rounds.
double plug_in_mi(const JointHistogram& h, MiPair which);

/// plug_in_mi plus a bootstrap standard error over `resamples` multinomial
/// resamples drawn from a generator seeded with `seed`.
MiEstimate estimate_mi(const JointHistogram& h, MiPair which,
                       std::size_t resamples, std::uint64_t seed);

/// Convenience overload for materialized samples.
MiEstimate estimate_mi(std::span<const RoundSample> samples, MiPair which,
                       const SimConfig& cfg);

struct KeyRateEstimate {
  double bits = 0.0;
  double std_error = 0.0;
  MiEstimate i_ab;
  MiEstimate i_be;
  /// Fraction of rounds with m_e != a (Helstrom only).
  std::optional<double> eve_error_rate;
};

/// max(I(A;B) - I(B;E), 0) from one simulated run; standard errors of the
/// two terms are combined in quadrature.
KeyRateEstimate estimate_key_rate_mc(const SimConfig& cfg,
                                     unsigned threads = 0);

/// Raw dump: per round one byte a, y_b as 8-byte little-endian IEEE-754,
/// then y_e (8 bytes) or m_e (1 byte) for the Helstrom scenario.
void write_raw_samples(std::ostream& out, const SimConfig& cfg);
std::vector<RoundSample> read_raw_samples(std::istream& in, bool discrete_eve);

}  // namespace okd
