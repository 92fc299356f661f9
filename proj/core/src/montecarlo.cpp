#include "okd/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>

#include "okd/errors.hpp"
#include "okd/parallel.hpp"

namespace okd {
namespace {

constexpr std::uint64_t kMinRounds = 10'000;
constexpr std::uint32_t kSamplerSalt = 0x4f4b4431;    // "OKD1"
constexpr std::uint32_t kBootstrapSalt = 0x424f4f54;  // "BOOT"

std::uint32_t low32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t high32(std::uint64_t v) {
  return static_cast<std::uint32_t>(v >> 32);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream,
                            std::uint32_t salt) {
  std::seed_seq seq{low32(seed), high32(seed), low32(stream), high32(stream),
                    salt};
  return std::mt19937_64(seq);
}

// Plug-in entropy in bits with the Miller-Madow bias correction
// (K - 1) / (2 N ln 2), K = number of occupied cells.
template <class Counts>
double miller_madow_entropy(const Counts& counts, std::uint64_t total) {
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  std::size_t occupied = 0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    ++occupied;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  if (occupied > 0) {
    h += static_cast<double>(occupied - 1) / (2.0 * n * std::numbers::ln2);
  }
  return h;
}

void put_le(std::ostream& out, std::uint64_t bits, int bytes) {
  std::array<char, 8> buf{};
  for (int i = 0; i < bytes; ++i) {
    buf[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  }
  out.write(buf.data(), bytes);
}

bool get_le(std::istream& in, std::uint64_t& bits, int bytes) {
  std::array<unsigned char, 8> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), bytes)) return false;
  bits = 0;
  for (int i = 0; i < bytes; ++i) {
    bits |= static_cast<std::uint64_t>(buf[static_cast<std::size_t>(i)]) << (8 * i);
  }
  return true;
}

}  // namespace

void SimConfig::validate() const {
  if (rounds < kMinRounds) throw DomainError("simulation needs >= 10^4 rounds");
  if (bins < 16) throw DomainError("simulation needs >= 16 bins");
  if (scenario == Scenario::Holevo) {
    throw DomainError(
        "the Holevo-optimal collective measurement has no sampling model");
  }
  for (double d : {depths.delta_b, depths.delta_e, depths.delta_e_coh}) {
    if (!(std::isfinite(d) && d >= 0.0)) {
      throw DomainError("simulation depths must be finite and >= 0");
    }
  }
}

double SimConfig::eve_depth() const noexcept {
  switch (scenario) {
    case Scenario::DirectDetection:
      return depths.delta_e;
    case Scenario::Coherent:
      return depths.delta_e_coh;
    default:
      return 0.0;
  }
}

RoundSampler::RoundSampler(const SimConfig& cfg, std::uint64_t stream)
    : engine_(make_engine(cfg.seed, stream, kSamplerSalt)),
      delta_b_(cfg.depths.delta_b),
      delta_eve_(cfg.eve_depth()),
      p_err_(cfg.discrete_eve()
                 ? helstrom_error_probability(cfg.depths.delta_e_coh)
                 : 0.0),
      discrete_(cfg.discrete_eve()) {}

RoundSample RoundSampler::next() {
  RoundSample s;
  s.a = static_cast<std::uint8_t>(engine_() >> 63);
  const double sign = s.a ? 1.0 : -1.0;
  s.y_b = sign * delta_b_ + normal_(engine_);
  if (discrete_) {
    const bool wrong = uniform_(engine_) < p_err_;
    s.m_e = static_cast<std::uint8_t>(wrong ? 1 - s.a : s.a);
  } else {
    s.y_e = sign * delta_eve_ + normal_(engine_);
  }
  return s;
}

void simulate(const SimConfig& cfg, FunctionRef<void(const RoundSample&)> sink) {
  cfg.validate();
  std::uint64_t remaining = cfg.rounds;
  for (std::uint64_t stream = 0; remaining > 0; ++stream) {
    RoundSampler sampler(cfg, stream);
    const std::uint64_t n = std::min(remaining, kRoundsPerStream);
    for (std::uint64_t i = 0; i < n; ++i) sink(sampler.next());
    remaining -= n;
  }
}

std::vector<RoundSample> simulate_rounds(const SimConfig& cfg) {
  std::vector<RoundSample> out;
  out.reserve(cfg.rounds);
  simulate(cfg, [&out](const RoundSample& s) { out.push_back(s); });
  return out;
}

JointHistogram::JointHistogram(std::size_t bob_bins, std::size_t eve_bins,
                               double half_range)
    : bob_bins_(bob_bins),
      eve_bins_(eve_bins),
      half_range_(half_range),
      counts_(2 * bob_bins * eve_bins, 0) {
  if (bob_bins < 2 || eve_bins < 2 || !(half_range > 0.0)) {
    throw DomainError("JointHistogram: invalid layout");
  }
}

JointHistogram JointHistogram::for_config(const SimConfig& cfg) {
  const double half_range = std::max(cfg.depths.delta_b, cfg.eve_depth()) + 6.0;
  return JointHistogram(cfg.bins, cfg.discrete_eve() ? 2 : cfg.bins,
                        half_range);
}

std::size_t JointHistogram::bin_of(double y) const noexcept {
  const double t = (y + half_range_) / (2.0 * half_range_);
  const double scaled = std::floor(t * static_cast<double>(bob_bins_));
  if (!(scaled > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(scaled), bob_bins_ - 1);
}

void JointHistogram::add(const RoundSample& s, bool discrete_eve) {
  const std::size_t e = discrete_eve ? s.m_e : bin_of(s.y_e);
  ++counts_[index(s.a, bin_of(s.y_b), e)];
  ++total_;
}

void JointHistogram::merge(const JointHistogram& other) {
  if (other.counts_.size() != counts_.size()) {
    throw DomainError("JointHistogram::merge: layout mismatch");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

JointHistogram JointHistogram::resample(std::mt19937_64& engine) const {
  JointHistogram out(bob_bins_, eve_bins_, half_range_);
  std::uint64_t rounds_left = total_;
  std::uint64_t mass_left = total_;
  for (std::size_t i = 0; i < counts_.size() && rounds_left > 0; ++i) {
    const std::uint64_t c = counts_[i];
    if (c == 0) continue;
    std::uint64_t drawn = rounds_left;
    if (c < mass_left) {
      std::binomial_distribution<std::uint64_t> binom(
          rounds_left, static_cast<double>(c) / static_cast<double>(mass_left));
      drawn = binom(engine);
    }
    out.counts_[i] = drawn;
    rounds_left -= drawn;
    mass_left -= c;
  }
  out.total_ = total_;
  return out;
}

JointHistogram accumulate(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  JointHistogram total = JointHistogram::for_config(cfg);
  const std::uint64_t streams =
      (cfg.rounds + kRoundsPerStream - 1) / kRoundsPerStream;
  std::mutex merge_mutex;
  const bool discrete = cfg.discrete_eve();
  parallel_for(streams, threads, [&](std::size_t stream) {
    JointHistogram local = JointHistogram::for_config(cfg);
    RoundSampler sampler(cfg, stream);
    const std::uint64_t begin = stream * kRoundsPerStream;
    const std::uint64_t n = std::min(kRoundsPerStream, cfg.rounds - begin);
    for (std::uint64_t i = 0; i < n; ++i) local.add(sampler.next(), discrete);
    std::lock_guard lock(merge_mutex);
    total.merge(local);
  });
  return total;
}

double plug_in_mi(const JointHistogram& h, MiPair which) {
  if (h.total() < kMinRounds) {
    throw DomainError("mutual information estimate needs >= 10^4 rounds");
  }
  const std::size_t nb = h.bob_bins();
  const std::size_t ne = h.eve_bins();
  const std::uint64_t total = h.total();

  std::vector<std::uint64_t> bob(nb, 0);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t e = 0; e < ne; ++e) bob[b] += h.count(a, b, e);
  const double h_bob = miller_madow_entropy(bob, total);

  // Entropy of Bob's bins conditioned on a discrete label (a, or Eve's bit).
  auto conditional_bob_entropy = [&](auto label_count, auto cell) {
    double h_cond = 0.0;
    std::vector<std::uint64_t> row(nb);
    for (std::size_t l = 0; l < label_count; ++l) {
      std::uint64_t n_l = 0;
      for (std::size_t b = 0; b < nb; ++b) {
        row[b] = cell(l, b);
        n_l += row[b];
      }
      if (n_l == 0) continue;
      h_cond += static_cast<double>(n_l) / static_cast<double>(total) *
                miller_madow_entropy(row, n_l);
    }
    return h_cond;
  };

  if (which == MiPair::AB) {
    return h_bob - conditional_bob_entropy(std::size_t{2}, [&](std::size_t a, std::size_t b) {
             std::uint64_t s = 0;
             for (std::size_t e = 0; e < ne; ++e) s += h.count(a, b, e);
             return s;
           });
  }
  if (ne == 2) {
    return h_bob - conditional_bob_entropy(std::size_t{2}, [&](std::size_t m, std::size_t b) {
             return h.count(0, b, m) + h.count(1, b, m);
           });
  }
  std::vector<std::uint64_t> eve(ne, 0);
  std::vector<std::uint64_t> joint(nb * ne, 0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t e = 0; e < ne; ++e) {
      const std::uint64_t c = h.count(0, b, e) + h.count(1, b, e);
      joint[b * ne + e] = c;
      eve[e] += c;
    }
  }
  return h_bob + miller_madow_entropy(eve, total) -
         miller_madow_entropy(joint, total);
}

MiEstimate estimate_mi(const JointHistogram& h, MiPair which,
                       std::size_t resamples, std::uint64_t seed) {
  MiEstimate out;
  out.bits = plug_in_mi(h, which);
  if (resamples < 2) return out;
  auto engine = make_engine(seed, which == MiPair::AB ? 0 : 1, kBootstrapSalt);
  std::vector<double> draws;
  draws.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    draws.push_back(plug_in_mi(h.resample(engine), which));
  }
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= static_cast<double>(draws.size());
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  out.std_error = std::sqrt(ss / static_cast<double>(draws.size() - 1));
  return out;
}

MiEstimate estimate_mi(std::span<const RoundSample> samples, MiPair which,
                       const SimConfig& cfg) {
  JointHistogram h = JointHistogram::for_config(cfg);
  for (const auto& s : samples) h.add(s, cfg.discrete_eve());
  return estimate_mi(h, which, cfg.bootstrap_resamples, cfg.seed);
}

KeyRateEstimate estimate_key_rate_mc(const SimConfig& cfg, unsigned threads) {
  const JointHistogram h = accumulate(cfg, threads);
  KeyRateEstimate out;
  out.i_ab = estimate_mi(h, MiPair::AB, cfg.bootstrap_resamples, cfg.seed);
  out.i_be = estimate_mi(h, MiPair::BE, cfg.bootstrap_resamples, cfg.seed);
  out.bits = std::max(out.i_ab.bits - out.i_be.bits, 0.0);
  out.std_error = std::hypot(out.i_ab.std_error, out.i_be.std_error);
  if (cfg.discrete_eve()) {
    std::uint64_t wrong = 0;
    for (std::size_t b = 0; b < h.bob_bins(); ++b) {
      wrong += h.count(0, b, 1) + h.count(1, b, 0);
    }
    out.eve_error_rate =
        static_cast<double>(wrong) / static_cast<double>(h.total());
  }
  return out;
}

void write_raw_samples(std::ostream& out, const SimConfig& cfg) {
  const bool discrete = cfg.discrete_eve();
  simulate(cfg, [&](const RoundSample& s) {
    put_le(out, s.a, 1);
    put_le(out, std::bit_cast<std::uint64_t>(s.y_b), 8);
    if (discrete) {
      put_le(out, s.m_e, 1);
    } else {
      put_le(out, std::bit_cast<std::uint64_t>(s.y_e), 8);
    }
  });
}

std::vector<RoundSample> read_raw_samples(std::istream& in, bool discrete_eve) {
  std::vector<RoundSample> out;
  std::uint64_t a = 0;
  while (get_le(in, a, 1)) {
    RoundSample s;
    std::uint64_t bits = 0;
    s.a = static_cast<std::uint8_t>(a);
    if (!get_le(in, bits, 8)) throw DomainError("truncated raw sample stream");
    s.y_b = std::bit_cast<double>(bits);
    if (!get_le(in, bits, discrete_eve ? 1 : 8)) {
      throw DomainError("truncated raw sample stream");
    }
    if (discrete_eve) {
      s.m_e = static_cast<std::uint8_t>(bits);
    } else {
      s.y_e = std::bit_cast<double>(bits);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace okd
