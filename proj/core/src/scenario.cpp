#include "qli/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "qli/errors.hpp"
#include "qli/monte_carlo.hpp"
#include "qli/parallel.hpp"

namespace qli {
namespace {

const ConfigKeyDoc kKeys[] = {
    {"name", "-", "scenario", "label copied into results"},
    {"fiber.length_km", "km", "20", "fiber length"},
    {"fiber.attenuation_db_per_km", "dB/km", "0.2", "attenuation, same at both wavelengths"},
    {"fiber.dispersion_ps_per_nm_km", "ps/(nm km)", "17", "chromatic dispersion D"},
    {"path.insertion_loss_db", "dB", "0", "lumped mux/demux/WSS/receiver loss on the quantum path"},
    {"channels.quantum", "ITU index", "39", "quantum channel on the 100-GHz grid"},
    {"channels.classical", "list", "(none)", "comma list of CH@dBm, e.g. 36@10, 44@9"},
    {"frame.period_ns", "ns", "40", "interleaving period (1 / repetition rate)"},
    {"frame.gap_ns", "ns", "15", "carved gap width per period"},
    {"frame.pulse_width_ps", "ps", "200", "QKD pulse width"},
    {"frame.gate_ns", "ns", "4", "detector gate width"},
    {"frame.gate_offset_ns", "ns", "0", "gate centre relative to gap centre"},
    {"frame.guard_ns", "ns", "0", "required margin between gate edge and noise ramp"},
    {"frame.interleaving", "on|off", "on", "off = continuous classical traffic"},
    {"decoy.mu1", "photons", "0.85", "signal mean photon number"},
    {"decoy.mu2", "photons", "0.04", "decoy mean photon number"},
    {"decoy.mu3", "photons", "0.001", "near-vacuum mean photon number"},
    {"decoy.p1", "-", "0.9", "signal emission probability"},
    {"decoy.p2", "-", "0.05", "decoy emission probability"},
    {"decoy.p3", "-", "0.05", "near-vacuum emission probability"},
    {"detector.efficiency", "-", "0.2", "detection efficiency"},
    {"detector.dark_yield", "per gate", "6e-6", "dark-count yield of the four-detector group"},
    {"detector.dead_time_us", "us", "10", "dead time after each click"},
    {"detector.count", "-", "4", "number of detectors (must be 4)"},
    {"system.rep_rate_mhz", "MHz", "1000/period", "pulse repetition rate"},
    {"system.e_mis", "-", "0.01", "misalignment flip probability per photon"},
    {"system.e0", "-", "0.5", "error rate of background clicks"},
    {"system.basis_prob_x", "-", "0.5", "rectilinear basis probability (both ends)"},
    {"system.sifting_q", "-", "px^2+(1-px)^2", "sifting factor q in the rate formula"},
    {"system.f_ec", "-", "1.2", "error-correction efficiency"},
    {"raman.table", "path", "builtin", "two-column Raman shape file"},
    {"raman.beta_scale", "1/(km GHz)", "1e-11", "multiplier applied to table values"},
    {"raman.filter_bw_ghz", "GHz", "20", "receiver filter bandwidth"},
    {"run.mode", "analytic|mc", "analytic", "closed-form or per-pulse Monte Carlo"},
    {"run.pulses", "count", "1000000", "Monte Carlo pulses"},
    {"run.seed", "integer", "1", "Monte Carlo seed"},
};

std::set<std::string> known_keys() {
  std::set<std::string> keys;
  for (const ConfigKeyDoc& k : kKeys) keys.insert(k.key);
  return keys;
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(RunMode mode) {
  return mode == RunMode::Analytic ? "analytic" : "mc";
}

RunMode parse_run_mode(std::string_view text) {
  if (text == "analytic") return RunMode::Analytic;
  if (text == "mc" || text == "monte-carlo") return RunMode::MonteCarlo;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + std::string(text) + "'");
}

std::span<const ConfigKeyDoc> scenario_keys() { return kKeys; }

std::vector<ClassicalChannel> parse_classical_list(const std::string& text) {
  std::vector<ClassicalChannel> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty() || item == "none") continue;
    const auto at = item.find('@');
    if (at == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "classical channel '" + item + "' must be CH@dBm");
    }
    try {
      std::size_t used = 0;
      const int ch = std::stoi(item.substr(0, at), &used);
      if (used != at) throw std::invalid_argument("channel");
      const std::string p = item.substr(at + 1);
      const double dbm = std::stod(p, &used);
      if (used != p.size()) throw std::invalid_argument("power");
      out.push_back({ItuChannel(ch), Power::from_dbm(dbm)});
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "cannot parse classical channel '" + item + "'");
    }
  }
  return out;
}

void Scenario::validate() const {
  try {
    channels.validate();
    frame.validate();
    path.fiber.validate();
    if (!(path.quantum_insertion_loss_db >= 0.0)) {
      throw Error(ErrorCode::Domain, "insertion loss must be >= 0 dB");
    }
    decoy.validate();
    detector.validate();
    system.validate();
    if (std::abs(system.rep_rate_mhz * frame.period_ns - 1000.0) > 1e-6) {
      throw Error(ErrorCode::InvalidConfig, "repetition rate and frame period disagree");
    }
    if (std::abs(detector.gate_width_ns - frame.gate_width_ns) > 1e-12) {
      throw Error(ErrorCode::InvalidConfig, "detector gate and frame gate differ");
    }
    if (!(guard_ns >= 0.0)) throw Error(ErrorCode::InvalidConfig, "guard must be >= 0");
    if (!(beta_scale >= 0.0) || !(filter_bw_ghz >= 0.0)) {
      throw Error(ErrorCode::InvalidConfig, "Raman scale and filter bandwidth must be >= 0");
    }
    if (mode == RunMode::MonteCarlo && n_pulses == 0) {
      throw Error(ErrorCode::InvalidConfig, "run.pulses must be >= 1");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, name + ": " + e.what());
  }
}

Scenario scenario_from_config(const KeyValueConfig& cfg, const std::string& base_dir) {
  if (auto unknown = cfg.unknown_keys(known_keys()); !unknown.empty()) {
    throw Error(ErrorCode::InvalidConfig, cfg.source() + ": unknown key '" + unknown.front() + "'");
  }
  Scenario s;
  try {
    s.name = cfg.get_string("name").value_or(s.name);
    auto& fiber = s.path.fiber;
    fiber.length_km = cfg.get_double("fiber.length_km", fiber.length_km);
    fiber.attenuation_db_per_km =
        cfg.get_double("fiber.attenuation_db_per_km", fiber.attenuation_db_per_km);
    fiber.dispersion_ps_per_nm_km =
        cfg.get_double("fiber.dispersion_ps_per_nm_km", fiber.dispersion_ps_per_nm_km);
    s.path.quantum_insertion_loss_db =
        cfg.get_double("path.insertion_loss_db", s.path.quantum_insertion_loss_db);

    if (auto q = cfg.get_int("channels.quantum")) s.channels.quantum = ItuChannel(static_cast<int>(*q));
    if (auto list = cfg.get_string("channels.classical")) {
      s.channels.classical = parse_classical_list(*list);
    }

    s.frame.period_ns = cfg.get_double("frame.period_ns", s.frame.period_ns);
    s.frame.gap_width_ns = cfg.get_double("frame.gap_ns", s.frame.gap_width_ns);
    s.frame.qkd_pulse_width_ps = cfg.get_double("frame.pulse_width_ps", s.frame.qkd_pulse_width_ps);
    s.frame.gate_width_ns = cfg.get_double("frame.gate_ns", s.frame.gate_width_ns);
    s.frame.gate_center_offset_ns =
        cfg.get_double("frame.gate_offset_ns", s.frame.gate_center_offset_ns);
    s.guard_ns = cfg.get_double("frame.guard_ns", s.guard_ns);
    s.interleaving = cfg.get_bool("frame.interleaving").value_or(s.interleaving);

    s.decoy.mu = {cfg.get_double("decoy.mu1", s.decoy.mu[0]), cfg.get_double("decoy.mu2", s.decoy.mu[1]),
                  cfg.get_double("decoy.mu3", s.decoy.mu[2])};
    s.decoy.prob = {cfg.get_double("decoy.p1", s.decoy.prob[0]),
                    cfg.get_double("decoy.p2", s.decoy.prob[1]),
                    cfg.get_double("decoy.p3", s.decoy.prob[2])};

    s.detector.efficiency = cfg.get_double("detector.efficiency", s.detector.efficiency);
    s.detector.dark_yield = cfg.get_double("detector.dark_yield", s.detector.dark_yield);
    s.detector.dead_time_us = cfg.get_double("detector.dead_time_us", s.detector.dead_time_us);
    s.detector.detector_count =
        static_cast<int>(cfg.get_int("detector.count").value_or(s.detector.detector_count));
    s.detector.gate_width_ns = s.frame.gate_width_ns;

    s.system.rep_rate_mhz = cfg.get_double("system.rep_rate_mhz", 1000.0 / s.frame.period_ns);
    s.system.e_mis = cfg.get_double("system.e_mis", s.system.e_mis);
    s.system.e0 = cfg.get_double("system.e0", s.system.e0);
    s.system.basis_prob_x = cfg.get_double("system.basis_prob_x", s.system.basis_prob_x);
    if (auto q = cfg.get_double("system.sifting_q")) s.system.sifting_q = *q;
    s.system.f_ec = cfg.get_double("system.f_ec", s.system.f_ec);

    if (auto table = cfg.get_string("raman.table"); table && *table != "builtin") {
      std::filesystem::path p(*table);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      s.raman = RamanTable::load(p);
      s.raman_source = *table;
    }
    s.beta_scale = cfg.get_double("raman.beta_scale", s.beta_scale);
    s.filter_bw_ghz = cfg.get_double("raman.filter_bw_ghz", s.filter_bw_ghz);

    if (auto mode = cfg.get_string("run.mode")) s.mode = parse_run_mode(*mode);
    if (auto n = cfg.get_int("run.pulses")) {
      if (*n < 1) throw Error(ErrorCode::InvalidConfig, "run.pulses must be >= 1");
      s.n_pulses = static_cast<std::uint64_t>(*n);
    }
    if (auto seed = cfg.get_int("run.seed")) s.seed = static_cast<std::uint64_t>(*seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    throw Error(ErrorCode::InvalidConfig, cfg.source() + ": " + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  const auto cfg = KeyValueConfig::load(path);
  return scenario_from_config(cfg, std::filesystem::path(path).parent_path().string());
}

ScenarioResult run_scenario(const Scenario& s, unsigned threads) {
  s.validate();
  ScenarioResult r;
  r.name = s.name;
  r.mode = s.mode;
  r.interleaving = s.interleaving;
  r.length_km = s.path.fiber.length_km;
  r.insertion_loss_db = s.path.quantum_insertion_loss_db;
  r.beta_scale = s.beta_scale;
  if (s.mode == RunMode::MonteCarlo) {
    r.seed = s.seed;
    r.n_pulses = s.n_pulses;
  }

  r.eta_channel = s.path.quantum_transmittance();
  r.eta_total = r.eta_channel * s.detector.efficiency;
  r.total_launch_dbm = s.channels.total_launch().dbm();

  const double lambda_q = channel_wavelength_nm(s.channels.quantum);
  const double nu_q = itu_channel_frequency(s.channels.quantum).ghz();
  const double receiver_loss = std::pow(10.0, -s.path.quantum_insertion_loss_db / 10.0);
  const NoiseProfile pattern = carve_pattern(s.frame);

  for (const ClassicalChannel& c : s.channels.classical) {
    ChannelNoise n;
    n.channel = c.channel.index();
    n.power_dbm = c.launch.dbm();
    n.offset_ghz = nu_q - itu_channel_frequency(c.channel).ghz();
    n.beta = s.beta_scale * s.raman.lookup(n.offset_ghz);
    n.walk_off_ns =
        walk_off_delay_ps(s.path.fiber, channel_wavelength_nm(c.channel), lambda_q) * 1e-3;
    n.required_gap_ns = min_gap_width(n.walk_off_ns, s.frame.gate_width_ns, s.guard_ns);
    n.period_limited = n.required_gap_ns >= s.frame.period_ns;
    n.feasible = s.frame.gate_start_ns() - s.guard_ns >= n.walk_off_ns - 1e-12 &&
                 s.frame.gate_end_ns() + s.guard_ns <= s.frame.gap_width_ns + 1e-12;
    if (s.interleaving) {
      n.in_window_fraction = in_window_fraction(spread_profile(pattern, n.walk_off_ns), s.frame);
      n.window_weight = n.in_window_fraction * s.frame.period_ns / s.frame.gate_width_ns;
      if (!n.feasible) {
        r.plan_feasible = false;
        r.warnings.push_back("channel " + std::to_string(n.channel) +
                             ": noise ramp reaches the gate (walk-off " +
                             format_g(n.walk_off_ns) + " ns)");
      }
    } else {
      n.in_window_fraction = 1.0;
      n.window_weight = 1.0;
    }
    const Power noise =
        Power::from_mw(raman_noise_power(c.launch, s.path.fiber, n.beta, s.filter_bw_ghz).mw() *
                       receiver_loss);
    n.noise_power_mw = noise.mw();
    n.noise_prob_gate = expected_noise_clicks(noise, lambda_q, s.frame.gate_width_ns,
                                              s.detector.efficiency, n.window_weight);
    if (n.noise_prob_gate > kNoiseWarnThreshold) {
      r.warnings.push_back("channel " + std::to_string(n.channel) + ": noise per gate " +
                           format_g(n.noise_prob_gate) + " above " +
                           format_g(kNoiseWarnThreshold));
    }
    r.p_raman_gate += n.noise_prob_gate;
    r.channels.push_back(n);
  }

  for (std::size_t k = 0; k < kIntensityClasses; ++k) {
    r.classes[k].mu = s.decoy.mu[k];
    r.classes[k].prob = s.decoy.prob[k];
  }

  r.y_background = s.detector.dark_yield + r.p_raman_gate;
  if (r.y_background >= 1.0) {
    r.model_breakdown = true;
    r.warnings.push_back("background per gate reaches 1; key rate forced to 0");
    for (auto& c : r.classes) {
      c.gain = 1.0;
      c.qber = s.system.e0;
    }
    r.key.bound_undefined = true;
    r.key.e1_upper = 0.5;
    return r;
  }

  KeyRateInput kin;
  kin.decoy = s.decoy;
  kin.f_ec = s.system.f_ec;
  kin.sifting_q = s.system.sifting_factor();
  kin.rep_rate_mhz = s.system.rep_rate_mhz;
  kin.e0 = s.system.e0;

  if (s.mode == RunMode::Analytic) {
    r.live_fraction =
        dead_time_live_fraction(s.decoy, s.system, s.detector, r.eta_channel, r.y_background);
    kin.classes =
        detected_gain_qber(s.decoy, s.system, s.detector, r.eta_channel, r.y_background);
    for (std::size_t k = 0; k < kIntensityClasses; ++k) {
      r.classes[k].gain = kin.classes[k].gain;
      r.classes[k].qber = kin.classes[k].qber;
    }
  } else {
    const MonteCarloInput mc{s.decoy, s.system, s.detector, r.eta_channel, r.p_raman_gate};
    r.tally = simulate_pulses(mc, s.n_pulses, s.seed, threads);
    const auto est = sift(*r.tally, s.system);
    for (std::size_t k = 0; k < kIntensityClasses; ++k) {
      ClassResult& c = r.classes[k];
      c.gain = std::min(est[k].gain, 1.0);
      c.gain_half_width = est[k].gain_half_width;
      c.qber_half_width = est[k].qber_half_width;
      c.qber_defined = est[k].qber.has_value();
      c.qber = est[k].qber.value_or(s.system.e0);
      if (!c.qber_defined) {
        r.warnings.push_back("class " + std::to_string(k + 1) +
                             ": no sifted detections, QBER undefined");
      } else if (est[k].qber_clipped) {
        r.warnings.push_back("class " + std::to_string(k + 1) + ": QBER clipped to 0.5");
      }
      kin.classes[k] = {c.gain, c.qber};
    }
    const double expected_clicks = static_cast<double>(r.tally->raw_clicks) +
                                   static_cast<double>(r.tally->dead_time_losses);
    r.live_fraction =
        expected_clicks > 0.0 ? static_cast<double>(r.tally->raw_clicks) / expected_clicks : 1.0;
  }

  r.key = skr(kin);
  if (r.key.bound_undefined) r.warnings.push_back("single-photon yield bound is not positive");
  if (r.key.e1_flagged) r.warnings.push_back("single-photon error bound clipped at 0.5");
  return r;
}

std::vector<double> default_sweep_powers() {
  std::vector<double> out;
  for (int p = -20; p <= 10; ++p) out.push_back(p);
  return out;
}

std::vector<SweepRow> sweep_launch_power(const Scenario& base, std::span<const double> powers_dbm,
                                         std::span<const ItuChannel> channels, unsigned threads) {
  const std::size_t n = powers_dbm.size() * channels.size();
  std::vector<SweepRow> rows(n);
  // Monte Carlo points already fan out over blocks; run those one at a time.
  const unsigned outer = base.mode == RunMode::MonteCarlo ? 1u : threads;
  const unsigned inner = base.mode == RunMode::MonteCarlo ? threads : 1u;
  parallel_for(
      n,
      [&](std::size_t i) {
        const ItuChannel ch = channels[i / powers_dbm.size()];
        const double dbm = powers_dbm[i % powers_dbm.size()];
        Scenario s = base;
        s.channels.classical = {{ch, Power::from_dbm(dbm)}};
        const ScenarioResult r = run_scenario(s, inner);
        rows[i] = {ch.index(), dbm, r.qber(), r.key.r_per_pulse, r.key.r_bps,
                   r.channels.front().in_window_fraction};
      },
      outer);
  return rows;
}

PlanReport plan(const Scenario& scenario) {
  return validate_plan(scenario.frame, scenario.channels, scenario.path.fiber, scenario.guard_ns);
}

}  // namespace qli
