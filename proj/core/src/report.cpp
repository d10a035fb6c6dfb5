#include "qli/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace qli {
namespace {

using Json = nlohmann::ordered_json;

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json key_json(const KeyRateOutput& k) {
  return Json{{"y0_lower", k.y0_lower},         {"y0_upper", k.y0_upper},
              {"y1_lower", k.y1_lower},         {"q1_lower", k.q1_lower},
              {"e1_upper", k.e1_upper},         {"r_bits_per_pulse", k.r_per_pulse},
              {"r_bits_per_second", k.r_bps},   {"y1_flagged", k.y1_flagged},
              {"e1_flagged", k.e1_flagged},     {"bound_undefined", k.bound_undefined}};
}

Json tally_json(const TallyCounts& t) {
  Json classes = Json::array();
  for (const ClassTally& c : t.classes) {
    classes.push_back({{"sent", c.pulses_sent},
                       {"sifted", c.sifted_detections},
                       {"errors", c.sifted_errors}});
  }
  return Json{{"classes", classes},
              {"raw_clicks", t.raw_clicks},
              {"double_clicks", t.double_clicks},
              {"dead_time_losses", t.dead_time_losses}};
}

Json decoy_json(const DecoyConfig& d) {
  return Json{{"mu", d.mu}, {"prob", d.prob}};
}

}  // namespace

std::string_view version() { return QLI_VERSION; }

std::string result_json(const ScenarioResult& r) {
  Json channels = Json::array();
  for (const ChannelNoise& c : r.channels) {
    channels.push_back({{"channel", c.channel},
                        {"power_dbm", number_or_null(c.power_dbm)},
                        {"offset_ghz", c.offset_ghz},
                        {"beta_per_km_ghz", c.beta},
                        {"walk_off_ns", c.walk_off_ns},
                        {"required_gap_ns", c.required_gap_ns},
                        {"feasible", c.feasible},
                        {"period_limited", c.period_limited},
                        {"in_window_fraction", c.in_window_fraction},
                        {"window_weight", c.window_weight},
                        {"noise_power_mw", c.noise_power_mw},
                        {"noise_prob_gate", c.noise_prob_gate}});
  }
  Json classes = Json::array();
  for (const ClassResult& c : r.classes) {
    Json row{{"mu", c.mu}, {"prob", c.prob}, {"gain", c.gain}, {"qber", c.qber},
             {"qber_defined", c.qber_defined}};
    if (r.mode == RunMode::MonteCarlo) {
      row["gain_half_width"] = c.gain_half_width;
      row["qber_half_width"] = c.qber_half_width;
    }
    classes.push_back(std::move(row));
  }
  Json meta{{"version", version()}, {"mode", to_string(r.mode)}};
  if (r.mode == RunMode::MonteCarlo) {
    meta["seed"] = r.seed;
    meta["pulses"] = r.n_pulses;
  }
  Json out{{"name", r.name},
           {"meta", meta},
           {"interleaving", r.interleaving},
           {"length_km", r.length_km},
           {"insertion_loss_db", r.insertion_loss_db},
           {"beta_scale", r.beta_scale},
           {"eta_channel", r.eta_channel},
           {"eta_total", r.eta_total},
           {"total_launch_dbm", number_or_null(r.total_launch_dbm)},
           {"channels", channels},
           {"p_raman_gate", r.p_raman_gate},
           {"y_background", r.y_background},
           {"live_fraction", r.live_fraction},
           {"classes", classes}};
  if (r.tally) out["tally"] = tally_json(*r.tally);
  out["qber"] = r.qber();
  out["key"] = key_json(r.key);
  out["plan_feasible"] = r.plan_feasible;
  out["model_breakdown"] = r.model_breakdown;
  out["warnings"] = r.warnings;
  return out.dump(2) + "\n";
}

std::string plan_json(const Scenario& s, const PlanReport& report) {
  Json channels = Json::array();
  for (const ChannelFeasibility& c : report.channels) {
    channels.push_back({{"channel", c.channel.index()},
                        {"walk_off_ns", c.walk_off_ns},
                        {"required_gap_ns", c.required_gap_ns},
                        {"feasible", c.feasible},
                        {"period_limited", c.period_limited},
                        {"in_window_fraction", c.in_window_fraction}});
  }
  Json out{{"name", s.name},
           {"quantum_channel", s.channels.quantum.index()},
           {"length_km", s.path.fiber.length_km},
           {"gap_ns", s.frame.gap_width_ns},
           {"gate_ns", s.frame.gate_width_ns},
           {"guard_ns", s.guard_ns},
           {"total_launch_dbm", number_or_null(s.channels.total_launch().dbm())},
           {"channels", channels},
           {"all_feasible", report.all_feasible()}};
  return out.dump(2) + "\n";
}

std::string optimize_json(const OptimizeResult& r) {
  Json out{{"objective", "p1 * key rate (bits per pulse)"},
           {"best", decoy_json(r.best)},
           {"r_bits_per_pulse", r.r_per_pulse},
           {"r_bits_per_second", r.r_bps},
           {"resolution", {{"mu1", r.resolution[0]},
                           {"mu2", r.resolution[1]},
                           {"p1", r.resolution[2]},
                           {"p2", r.resolution[3]}}},
           {"evaluations", r.evaluations}};
  return out.dump(2) + "\n";
}

std::string calibration_json(const AnchorSet& a, const CalibrationResult& r) {
  Json out{{"insertion_loss_db", r.insertion_loss_db},
           {"beta_scale", r.beta_scale},
           {"rounds", r.rounds},
           {"skr_anchor", {{"scenario", a.skr.scenario.name},
                           {"target_bits_per_pulse", a.skr.bits_per_pulse},
                           {"achieved", r.skr_achieved},
                           {"relative_residual", r.skr_residual}}},
           {"qber_anchor", {{"scenario", a.qber.scenario.name},
                            {"target", a.qber.qber},
                            {"achieved", r.qber_achieved},
                            {"relative_residual", r.qber_residual}}}};
  return out.dump(2) + "\n";
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out) {
  out << "# schema: " << kSweepSchema << "\n";
  out << "channel,power_dbm,qber,skr_bpp,skr_bps,window_fraction\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.2f,%.9g,%.9g,%.9g,%.9g\n", r.channel, r.power_dbm,
                  r.qber, r.skr_bpp, r.skr_bps, r.window_fraction);
    out << buf;
  }
}

}  // namespace qli
