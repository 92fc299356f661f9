#include "cli.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "okd/errors.hpp"
#include "okd/model.hpp"
#include "okd/montecarlo.hpp"
#include "okd/optimize.hpp"
#include "okd/parallel.hpp"
#include "okd/rates.hpp"
#include "output.hpp"

namespace okd::cli {
namespace {

using nlohmann::ordered_json;

// A usage problem detected after CLI11 parsing succeeded.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Photon number used to build a modulation scheme when only the relative
// spread is given; only the spread affects any rate.
constexpr double kNominalPhotonNumber = 1e6;

struct CommonFlags {
  std::string format = "json";
  std::string output;
  QuadratureConfig quad;
  unsigned threads = 0;
};

struct ChannelFlags {
  std::optional<double> advantage;
  std::optional<double> tau_b;
  std::optional<double> tau_e;
  std::optional<double> n_bar;
  std::optional<double> sigma_b;
  std::optional<double> sigma_e;
  double excess = 0.0;
  std::optional<double> n0;
  std::optional<double> n1;
  std::optional<double> spread;
};

struct Setup {
  double advantage = 1.0;
  std::optional<ChannelParams> channel;
  std::optional<ModulationScheme> modulation;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--output,-o", f.output, "Write to this path instead of stdout");
  cmd->add_option("--abs-tol", f.quad.abs_tol, "Quadrature absolute tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rel-tol", f.quad.rel_tol, "Quadrature relative tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--truncation", f.quad.truncation_sigmas,
                  "Integration half-width in standard deviations")
      ->check(CLI::Range(6.0, 1e3));
  cmd->add_option("--max-nodes", f.quad.max_nodes_1d,
                  "Evaluation budget per 1-D integral");
  cmd->add_option("--nodes-2d", f.quad.nodes_2d_per_axis,
                  "Gauss-Legendre order per axis for 2-D integrals");
}

void add_channel(CLI::App* cmd, ChannelFlags& f) {
  auto* adv = cmd->add_option("--advantage", f.advantage,
                              "Eavesdropper's advantage E")
                  ->check(CLI::PositiveNumber);
  auto* tau_b = cmd->add_option("--tau-b", f.tau_b, "Bob's transmission");
  cmd->add_option("--tau-e", f.tau_e, "Eve's transmission");
  cmd->add_option("--n-bar", f.n_bar, "Mean pulse energy in photons");
  cmd->add_option("--sigma-b", f.sigma_b,
                  "Bob's noise std (general channel; default shot-noise)");
  cmd->add_option("--sigma-e", f.sigma_e,
                  "Eve's noise std (general channel; default shot-noise)");
  cmd->add_option("--excess", f.excess, "Bob's excess noise variance");
  cmd->add_option("--n0", f.n0, "Energy of the 0 pulse in photons");
  cmd->add_option("--n1", f.n1, "Energy of the 1 pulse in photons");
  cmd->add_option("--dn-over-nbar", f.spread,
                  "Relative spread (n1 - n0) / n_bar for the homodyne depth");
  adv->excludes(tau_b);
}

Setup resolve_channel(const ChannelFlags& f) {
  Setup s;
  const bool any_channel = f.tau_b || f.tau_e || f.n_bar || f.sigma_b || f.sigma_e;
  if (any_channel) {
    if (!(f.tau_b && f.tau_e && f.n_bar)) {
      throw UsageError("channel mode needs --tau-b, --tau-e and --n-bar");
    }
    if (f.sigma_b.has_value() != f.sigma_e.has_value()) {
      throw UsageError("--sigma-b and --sigma-e must be given together");
    }
    s.channel = f.sigma_b ? ChannelParams::general(*f.tau_b, *f.tau_e,
                                                   *f.sigma_b, *f.sigma_e,
                                                   *f.n_bar, f.excess)
                          : ChannelParams::shot_noise_limited(
                                *f.tau_b, *f.tau_e, *f.n_bar, f.excess);
    s.advantage = eavesdropper_advantage(*s.channel);
  } else if (f.advantage) {
    s.advantage = *f.advantage;
  } else {
    throw UsageError("give --advantage or channel parameters");
  }
  if (f.n0.has_value() != f.n1.has_value()) {
    throw UsageError("--n0 and --n1 must be given together");
  }
  if (f.n0 && f.spread) {
    throw UsageError("--dn-over-nbar cannot be combined with --n0/--n1");
  }
  if (f.n0) {
    s.modulation = ModulationScheme(*f.n0, *f.n1);
  } else if (f.spread) {
    s.modulation = ModulationScheme::from_relative_spread(
        s.channel ? s.channel->n_bar() : kNominalPhotonNumber, *f.spread);
  }
  return s;
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v, 12);
}

ordered_json rate_json(const RateResult& r) {
  ordered_json j;
  j["scenario"] = std::string(to_string(r.scenario));
  j["advantage"] = number(r.advantage);
  j["delta_b"] = number(r.delta_b);
  j["delta_e"] = number(r.delta_e);
  if (r.delta_e_coh) j["delta_e_coh"] = number(*r.delta_e_coh);
  j["i_ab"] = number(r.i_ab);
  j["leak"] = number(r.leak);
  j["key_rate"] = number(r.key_rate);
  j["asymptotic_estimate"] = number(r.asymptotic_estimate);
  j["quadrature_residual"] = number(r.quadrature_residual);
  j["consistency_gap"] = number(r.consistency_gap);
  return j;
}

// Flat JSON object -> header line + value line.
std::string object_csv(const std::vector<ordered_json>& rows) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    os << (first ? "" : ",") << key;
    first = false;
  }
  os << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [key, v] : row.items()) {
      os << (first ? "" : ",");
      first = false;
      if (v.is_string()) {
        os << v.get<std::string>();
      } else if (v.is_boolean()) {
        os << (v.get<bool>() ? "true" : "false");
      } else if (v.is_number()) {
        os << format_number(v.get<double>(), 12);
      } else if (v.is_null()) {
        os << "nan";
      }
    }
    os << '\n';
  }
  return os.str();
}

void emit(const CommonFlags& f, const std::string& text, std::ostream& out) {
  if (f.output.empty()) {
    out << text;
  } else {
    write_atomically(f.output, text);
  }
}

std::string render(const CommonFlags& f, const ordered_json& j) {
  if (f.format == "csv") return object_csv({j});
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- rate

struct RateFlags {
  CommonFlags common;
  ChannelFlags channel;
  std::string scenario;
  std::optional<double> delta_b;
  bool optimize = false;
  double tol = 1e-6;
};

int cmd_rate(const RateFlags& f, std::ostream& out) {
  f.common.quad.validate();
  const Scenario scenario = parse_scenario(f.scenario);
  const Setup s = resolve_channel(f.channel);

  const bool from_modulation = s.channel && f.channel.n0;
  const int sources = int(f.delta_b.has_value()) + int(f.optimize) +
                      int(from_modulation && !f.delta_b && !f.optimize);
  if (sources != 1) {
    throw UsageError(
        "choose exactly one of --delta-b, --optimize, or channel + --n0/--n1");
  }

  RateResult r;
  if (f.optimize) {
    OptimizeOptions opts;
    opts.tol = f.tol;
    opts.modulation = s.modulation;
    r = optimal_rate(scenario, s.advantage, f.common.quad, opts);
  } else {
    const double delta_b = f.delta_b ? *f.delta_b
                                     : modulation_depths(*s.channel, *s.modulation).delta_b;
    if (!(delta_b >= 0.0)) throw DomainError("--delta-b must be >= 0");
    r = key_rate(scenario, delta_b, s.advantage, f.common.quad, s.modulation);
  }
  ordered_json j = rate_json(r);
  j["optimized"] = f.optimize;
  if (s.channel && s.modulation) {
    j["macroscopic_regime_ok"] = macroscopic_regime_ok(*s.channel, *s.modulation);
  }
  emit(f.common, render(f.common, j), out);
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
  CommonFlags common;
  std::vector<std::string> scenarios;
  bool all = false;
  SweepGrid grid;
  bool linear = false;
  std::optional<double> spread;
  double tol = 1e-6;
};

std::string sweep_csv(const SweepTable& t) {
  bool any_error = false;
  for (const auto& row : t.rows) any_error = any_error || !row.error.empty();
  std::ostringstream os;
  os << "advantage,scenario,delta_b_opt,delta_e_opt,key_rate,key_rate_asymptotic";
  if (any_error) os << ",error";
  os << '\n';
  for (const auto& row : t.rows) {
    os << format_number(row.advantage) << ',' << to_string(row.scenario) << ','
       << format_number(row.delta_b_opt) << ',' << format_number(row.delta_e_opt)
       << ',' << format_number(row.key_rate) << ','
       << format_number(row.key_rate_asymptotic);
    if (any_error) {
      std::string msg = row.error;
      for (char& c : msg) {
        if (c == ',' || c == '\n') c = ';';
      }
      os << ',' << msg;
    }
    os << '\n';
  }
  return os.str();
}

std::string sweep_json(const SweepTable& t) {
  ordered_json j;
  j["grid"] = {{"min", number(t.grid.min)},
               {"max", number(t.grid.max)},
               {"points", t.grid.points},
               {"log", t.grid.log_spaced}};
  j["rows"] = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r;
    r["advantage"] = number(row.advantage);
    r["scenario"] = std::string(to_string(row.scenario));
    r["delta_b_opt"] = number(row.delta_b_opt);
    r["delta_e_opt"] = number(row.delta_e_opt);
    r["key_rate"] = number(row.key_rate);
    r["key_rate_asymptotic"] = number(row.key_rate_asymptotic);
    if (!row.error.empty()) r["error"] = row.error;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

int cmd_sweep(SweepFlags f, std::ostream& out, std::ostream& err) {
  f.common.quad.validate();
  std::vector<Scenario> scenarios;
  if (f.all) {
    if (!f.scenarios.empty()) {
      throw UsageError("--all-scenarios excludes --scenario");
    }
    scenarios.assign(kAllScenarios.begin(), kAllScenarios.end());
  } else {
    for (const auto& name : f.scenarios) scenarios.push_back(parse_scenario(name));
  }
  if (scenarios.empty()) throw UsageError("give --scenario or --all-scenarios");
  f.grid.log_spaced = !f.linear;
  f.grid.validate();

  OptimizeOptions opts;
  opts.tol = f.tol;
  if (f.spread) {
    opts.modulation =
        ModulationScheme::from_relative_spread(kNominalPhotonNumber, *f.spread);
  }
  const SweepTable table =
      sweep(scenarios, f.grid, f.common.quad, opts, f.common.threads);

  std::size_t failed = 0;
  for (const auto& row : table.rows) {
    if (!row.error.empty()) {
      ++failed;
      err << "warning: E=" << format_number(row.advantage) << " "
          << to_string(row.scenario) << ": " << row.error << '\n';
    }
  }
  if (failed == table.rows.size()) {
    err << "error: every sweep row failed\n";
    return kExitNumeric;
  }
  emit(f.common, f.common.format == "csv" ? sweep_csv(table) : sweep_json(table),
       out);
  return kExitOk;
}

// ---------------------------------------------------------------- constants

ordered_json constant_json(const ConstantEstimate& c) {
  return {{"value", round_significant(c.value, 6)},
          {"argmax", round_significant(c.argmax, 6)},
          {"optimizer_tol", number(c.optimizer_tol)},
          {"quadrature_residual", number(c.quadrature_residual)}};
}

int cmd_constants(const CommonFlags& f, std::ostream& out) {
  f.quad.validate();
  const auto gamma = gamma_constant(f.quad);
  const auto chi = chi_constant();
  const auto helstrom = helstrom_constant();
  if (f.format == "csv") {
    std::ostringstream os;
    os << "constant,value,argmax,optimizer_tol,quadrature_residual\n";
    auto line = [&os](const char* name, const ConstantEstimate& c) {
      os << name << ',' << format_number(c.value, 6) << ','
         << format_number(c.argmax, 6) << ',' << format_number(c.optimizer_tol)
         << ',' << format_number(c.quadrature_residual) << '\n';
    };
    line("gamma", gamma);
    line("chi", chi);
    line("helstrom", helstrom);
    emit(f, os.str(), out);
    return kExitOk;
  }
  ordered_json j;
  j["gamma"] = constant_json(gamma);
  j["chi"] = constant_json(chi);
  j["helstrom"] = constant_json(helstrom);
  emit(f, j.dump(2) + "\n", out);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  CommonFlags common;
  std::string scenario;
  std::optional<double> advantage;
  std::optional<double> delta_b;
  std::optional<double> delta_e_coh;
  std::optional<double> spread;
  bool optimize = false;
  std::uint64_t rounds = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t bins = 256;
  std::size_t resamples = 20;
  double abs_floor = 2e-3;
  std::string dump;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err) {
  f.common.quad.validate();
  const Scenario scenario = parse_scenario(f.scenario);
  if (scenario == Scenario::Holevo) {
    throw UsageError(
        "simulate: the Holevo-optimal collective measurement has no sampling "
        "model; its rate is validated analytically (use `okd rate`)");
  }
  if (!f.advantage) throw UsageError("simulate needs --advantage");
  const double advantage = *f.advantage;
  std::optional<ModulationScheme> modulation;
  if (f.spread) {
    modulation =
        ModulationScheme::from_relative_spread(kNominalPhotonNumber, *f.spread);
  }
  const double ratio = modulation ? modulation->coherent_depth_ratio() : 1.0;

  const int sources = int(f.delta_b.has_value()) + int(f.delta_e_coh.has_value()) +
                      int(f.optimize);
  if (sources != 1) {
    throw UsageError("choose exactly one of --delta-b, --delta-e-coh, --optimize");
  }
  double delta_b = 0.0;
  if (f.optimize) {
    OptimizeOptions opts;
    opts.modulation = modulation;
    delta_b = optimal_rate(scenario, advantage, f.common.quad, opts).delta_b;
  } else if (f.delta_b) {
    delta_b = *f.delta_b;
  } else {
    delta_b = *f.delta_e_coh / (ratio * std::sqrt(advantage));
  }
  if (!(delta_b >= 0.0)) throw DomainError("depth must be >= 0");

  SimConfig cfg;
  cfg.rounds = f.rounds;
  cfg.seed = f.seed;
  cfg.scenario = scenario;
  cfg.bins = f.bins;
  cfg.bootstrap_resamples = f.resamples;
  cfg.depths.delta_b = delta_b;
  cfg.depths.delta_e = std::sqrt(advantage) * delta_b;
  cfg.depths.delta_e_coh = ratio * cfg.depths.delta_e;
  cfg.depths.advantage = advantage;
  cfg.validate();

  if (!f.dump.empty()) {
    std::ostringstream raw(std::ios::binary);
    write_raw_samples(raw, cfg);
    write_atomically(f.dump, raw.str());
  }

  const KeyRateEstimate mc = estimate_key_rate_mc(cfg, f.common.threads);
  const RateResult exact =
      key_rate(scenario, delta_b, advantage, f.common.quad, modulation);
  const double difference = mc.bits - exact.key_rate;
  const double tolerance = std::max(3.0 * mc.std_error, f.abs_floor);
  const bool pass = std::abs(difference) <= tolerance;

  ordered_json j;
  j["scenario"] = std::string(to_string(scenario));
  j["advantage"] = number(advantage);
  j["delta_b"] = number(cfg.depths.delta_b);
  j["delta_e"] = number(cfg.depths.delta_e);
  j["delta_e_coh"] = number(cfg.depths.delta_e_coh);
  j["rounds"] = cfg.rounds;
  j["seed"] = cfg.seed;
  j["mc_key_rate"] = number(mc.bits);
  j["mc_std_error"] = number(mc.std_error);
  j["analytic_key_rate"] = number(exact.key_rate);
  j["difference"] = number(difference);
  j["tolerance"] = number(tolerance);
  j["mc_i_ab"] = number(mc.i_ab.bits);
  j["analytic_i_ab"] = number(exact.i_ab);
  j["mc_i_be"] = number(mc.i_be.bits);
  j["analytic_i_be"] = number(exact.leak);
  if (mc.eve_error_rate) {
    const double p_err = helstrom_error_probability(cfg.depths.delta_e_coh);
    j["eve_error_rate"] = number(*mc.eve_error_rate);
    j["p_err"] = number(p_err);
    j["p_err_relative_gap"] =
        number(p_err > 0.0 ? std::abs(*mc.eve_error_rate - p_err) / p_err : 0.0);
  }
  j["verdict"] = pass ? "pass" : "fail";
  emit(f.common, render(f.common, j), out);
  if (!pass) {
    err << "simulate: Monte Carlo and quadrature disagree by "
        << format_number(difference, 6) << " bits (tolerance "
        << format_number(tolerance, 6) << ")\n";
    return kExitDisagreement;
  }
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret-key rates of binary-modulated optical key distribution"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "okd 0.1.0");

  RateFlags rate;
  auto* rate_cmd = app.add_subcommand("rate", "Key rate for one scenario");
  add_common(rate_cmd, rate.common);
  add_channel(rate_cmd, rate.channel);
  rate_cmd->add_option("--scenario", rate.scenario, "dd, coherent, helstrom or holevo")
      ->required();
  auto* db = rate_cmd->add_option("--delta-b", rate.delta_b, "Bob's modulation depth");
  auto* opt = rate_cmd->add_flag("--optimize", rate.optimize, "Maximize over delta_b");
  rate_cmd->add_option("--tol", rate.tol, "Optimizer tolerance on delta_b")
      ->check(CLI::PositiveNumber);
  db->excludes(opt);

  SweepFlags sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Optimal rates over a grid of E");
  add_common(sweep_cmd, sw.common);
  sw.common.format = "csv";
  sweep_cmd->add_option("--scenario", sw.scenarios, "Scenario (repeatable)");
  sweep_cmd->add_flag("--all-scenarios", sw.all, "All four scenarios per grid point");
  sweep_cmd->add_option("--min", sw.grid.min, "Smallest advantage")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--max", sw.grid.max, "Largest advantage")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--points", sw.grid.points, "Grid points")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--linear", sw.linear, "Linear instead of log spacing");
  sweep_cmd->add_option("--dn-over-nbar", sw.spread,
                        "Relative spread for the homodyne depth");
  sweep_cmd->add_option("--tol", sw.tol, "Optimizer tolerance on delta_b")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threads", sw.common.threads, "Worker threads")
      ->envname(kThreadsEnvVar);

  CommonFlags consts;
  auto* const_cmd = app.add_subcommand("constants", "Strong-eavesdropping constants");
  add_common(const_cmd, consts);

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo cross-check");
  add_common(sim_cmd, sim.common);
  sim_cmd->add_option("--scenario", sim.scenario, "dd, coherent or helstrom")->required();
  sim_cmd->add_option("--advantage", sim.advantage, "Eavesdropper's advantage E")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--delta-b", sim.delta_b, "Bob's modulation depth");
  sim_cmd->add_option("--delta-e-coh", sim.delta_e_coh, "Eve's homodyne depth");
  sim_cmd->add_flag("--optimize", sim.optimize, "Use the optimal delta_b");
  sim_cmd->add_option("--dn-over-nbar", sim.spread, "Relative spread");
  sim_cmd->add_option("--rounds", sim.rounds, "Protocol rounds");
  sim_cmd->add_option("--seed", sim.seed, "Generator seed");
  sim_cmd->add_option("--bins", sim.bins, "Histogram bins per continuous axis");
  sim_cmd->add_option("--resamples", sim.resamples, "Bootstrap resamples");
  sim_cmd->add_option("--abs-floor", sim.abs_floor,
                      "Absolute agreement floor in bits")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--dump", sim.dump, "Write raw samples to this path");
  sim_cmd->add_option("--threads", sim.common.threads, "Worker threads")
      ->envname(kThreadsEnvVar);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (rate_cmd->parsed()) return cmd_rate(rate, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, out, err);
    if (const_cmd->parsed()) return cmd_constants(consts, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace okd::cli
