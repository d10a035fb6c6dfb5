#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qli/channel_plan.hpp"
#include "qli/config.hpp"
#include "qli/fiber.hpp"
#include "qli/keyrate.hpp"
#include "qli/qkd_channel.hpp"
#include "qli/raman_table.hpp"
#include "qli/timing.hpp"

namespace qli {

enum class RunMode { Analytic, MonteCarlo };

std::string_view to_string(RunMode mode);
/// Accepts "analytic" and "mc" / "monte-carlo".
RunMode parse_run_mode(std::string_view text);

/// Everything needed to evaluate one co-propagation setup.
struct Scenario {
  std::string name = "scenario";
  ChannelPlan channels;
  FramePlan frame;
  /// Off: classical traffic is continuous and its noise fills every gate.
  bool interleaving = true;
  double guard_ns = 0.0;
  PathBudget path{FiberSpec{}, 0.0};
  DecoyConfig decoy;
  DetectorSpec detector;
  SystemSpec system;
  RamanTable raman = RamanTable::builtin();
  std::string raman_source = "builtin";
  /// Absolute beta = beta_scale * table value, in 1/(km GHz).
  double beta_scale = 1e-11;
  double filter_bw_ghz = 20.0;
  RunMode mode = RunMode::Analytic;
  std::uint64_t n_pulses = 1'000'000;
  std::uint64_t seed = 1;

  /// Throws Error{InvalidConfig} (wrapping lower-level errors) on any
  /// inconsistent sub-configuration.
  void validate() const;
};

/// Builds a scenario from a flat key/value file; unspecified keys keep the
/// defaults above. Unknown keys are rejected. Relative raman.table paths
/// resolve against `base_dir`.
Scenario scenario_from_config(const KeyValueConfig& cfg, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

/// Every key understood by scenario_from_config, with unit and default.
struct ConfigKeyDoc {
  const char* key;
  const char* unit;
  const char* fallback;
  const char* meaning;
};
std::span<const ConfigKeyDoc> scenario_keys();

/// "36@10, 44@9" -> channels at dBm launch powers.
std::vector<ClassicalChannel> parse_classical_list(const std::string& text);

struct ChannelNoise {
  int channel = 0;
  double power_dbm = 0.0;
  double offset_ghz = 0.0;
  double beta = 0.0;
  double walk_off_ns = 0.0;
  double required_gap_ns = 0.0;
  bool feasible = true;
  bool period_limited = false;
  double in_window_fraction = 0.0;
  double window_weight = 0.0;
  double noise_power_mw = 0.0;  // at the detectors, inside the filter band
  double noise_prob_gate = 0.0;
};

struct ClassResult {
  double mu = 0.0;
  double prob = 0.0;
  double gain = 0.0;
  double qber = 0.0;
  bool qber_defined = true;
  double gain_half_width = 0.0;  // Monte Carlo only
  double qber_half_width = 0.0;
};

struct ScenarioResult {
  std::string name;
  RunMode mode = RunMode::Analytic;
  std::uint64_t seed = 0;
  std::uint64_t n_pulses = 0;
  bool interleaving = true;
  double length_km = 0.0;
  double insertion_loss_db = 0.0;
  double beta_scale = 0.0;
  double eta_channel = 0.0;
  double eta_total = 0.0;
  double total_launch_dbm = 0.0;
  std::vector<ChannelNoise> channels;
  double p_raman_gate = 0.0;
  double y_background = 0.0;
  double live_fraction = 1.0;
  std::array<ClassResult, kIntensityClasses> classes{};
  std::optional<TallyCounts> tally;
  KeyRateOutput key;
  bool plan_feasible = true;
  bool model_breakdown = false;
  std::vector<std::string> warnings;

  double qber() const { return classes[0].qber; }
};

ScenarioResult run_scenario(const Scenario& scenario, unsigned threads = 0);

struct SweepRow {
  int channel = 0;
  double power_dbm = 0.0;
  double qber = 0.0;
  double skr_bpp = 0.0;
  double skr_bps = 0.0;
  double window_fraction = 0.0;
};

/// One single-channel scenario per (channel, power), rows in channel-major
/// input order regardless of thread scheduling.
std::vector<SweepRow> sweep_launch_power(const Scenario& base, std::span<const double> powers_dbm,
                                         std::span<const ItuChannel> channels,
                                         unsigned threads = 0);

/// -20..+10 dBm in 1-dB steps.
std::vector<double> default_sweep_powers();

PlanReport plan(const Scenario& scenario);

}  // namespace qli
