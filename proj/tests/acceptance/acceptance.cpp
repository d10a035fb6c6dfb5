// Acceptance suite: one PASS/FAIL line per criterion.
//   qli_acceptance                 run all criteria
//   qli_acceptance --criterion N   run only criterion N
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qli/calibrate.hpp"
#include "qli/keyrate.hpp"
#include "qli/monte_carlo.hpp"
#include "qli/scenario.hpp"
#include "qli/timing.hpp"

using namespace qli;

namespace {

const std::string kScenarios = QLI_SOURCE_DIR "/scenarios/";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const CalibrationResult& calibration() {
  static const CalibrationResult c = calibrate(published_anchors());
  return c;
}

Scenario calibrated(const std::string& file) {
  Scenario s = load_scenario(kScenarios + file);
  apply_calibration(s, calibration());
  s.mode = RunMode::Analytic;
  return s;
}

Outcome rate_pairs() {
  const double pairs[][2] = {{1.58e-3, 39500}, {2.54e-4, 6350}, {5.1e-6, 128},
                             {7.19e-4, 18000}, {2.56e-5, 640}, {2.45e-6, 61.4}};
  Outcome o{true, ""};
  double worst = 0.0;
  for (const auto& p : pairs) {
    const double rel = std::abs(bits_per_second(p[0], 25.0) / p[1] - 1.0);
    worst = std::max(worst, rel);
    if (rel > 0.01) o.pass = false;
  }
  // The engine itself must convert with the same product.
  const auto ch = oracle::poisson_channel({0.85, 0.04, 0.001}, 0.01, 6e-6, 0.01);
  KeyRateInput in;
  for (std::size_t k = 0; k < 3; ++k) in.classes[k] = {ch.gain[k], ch.qber[k]};
  const KeyRateOutput out = skr(in);
  if (out.r_bps != out.r_per_pulse * 25.0 * 1e6) o.pass = false;
  o.detail = fmt("worst relative mismatch %.3g%%", 100.0 * worst);
  return o;
}

Outcome distance_rows() {
  struct Row {
    const char* file;
    double qber;
    double bps;
  };
  const Row rows[] = {{"best_case_20km.conf", 0.0112, 39500.0},
                      {"best_case_50km.conf", 0.0204, 6350.0},
                      {"best_case_100km.conf", 0.0381, 128.0}};
  Outcome o{true, fmt("IL %.2f dB, beta %.3g;", calibration().insertion_loss_db,
                      calibration().beta_scale)};
  for (const Row& row : rows) {
    const ScenarioResult r = run_scenario(calibrated(row.file));
    const double dq = 100.0 * (r.qber() - row.qber);
    const double ratio = r.key.r_bps / row.bps;
    const bool ok = std::abs(dq) <= 1.0 && ratio <= 3.0 && ratio >= 1.0 / 3.0;
    o.pass = o.pass && ok;
    o.detail += fmt(" %.0fkm QBER %.2f%% (%+.2fpp) SKR %.4g b/s (x%.2f)%s;", r.length_km,
                    100.0 * r.qber(), dq, r.key.r_bps, ratio, ok ? "" : " out of tolerance");
  }
  return o;
}

Outcome walk_off() {
  const double far = walk_off_delay_ps(FiberSpec{0.2, 17.0, 100.0}, channel_wavelength_nm(ItuChannel(28)),
                                       channel_wavelength_nm(ItuChannel(39))) * 1e-3;
  const double near = walk_off_delay_ps(FiberSpec{0.2, 17.0, 20.0}, channel_wavelength_nm(ItuChannel(36)),
                                        channel_wavelength_nm(ItuChannel(39))) * 1e-3;
  return {far >= 14.5 && far <= 15.5 && near >= 0.75 && near <= 0.90,
          fmt("Ch28/Ch39 100 km %.3f ns, Ch36/Ch39 20 km %.3f ns", far, near)};
}

Outcome trapezoid_oracle() {
  std::mt19937_64 rng(20240521);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  bool saw_zero = false;
  bool saw_beyond_gap = false;
  for (int i = 0; i < 120; ++i) {
    FramePlan plan;
    plan.period_ns = 10.0 + 50.0 * u(rng);
    plan.gap_width_ns = plan.period_ns * (0.05 + 0.9 * u(rng));
    plan.gate_width_ns = plan.gap_width_ns * (0.02 + 0.96 * u(rng));
    plan.qkd_pulse_width_ps = std::min(200.0, plan.gate_width_ns * 1e3);
    const double slack = 0.5 * (plan.gap_width_ns - plan.gate_width_ns);
    plan.gate_center_offset_ns = slack * (2.0 * u(rng) - 1.0);
    double w;
    if (i % 10 == 0) {
      w = 0.0;
    } else if (i % 10 == 1) {
      w = plan.gap_width_ns * (1.0 + 2.0 * u(rng));
    } else {
      w = 1.2 * plan.period_ns * u(rng);
    }
    saw_zero = saw_zero || w == 0.0;
    saw_beyond_gap = saw_beyond_gap || w > plan.gap_width_ns;
    const double got = in_window_fraction(spread_profile(carve_pattern(plan), w), plan);
    const double ref = oracle::in_window_fraction(plan.period_ns, plan.gap_width_ns,
                                                  plan.gate_start_ns(), plan.gate_end_ns(), w);
    worst = std::max(worst, std::abs(got - ref));
    ++cases;
  }
  return {worst <= 1e-4 && cases >= 100 && saw_zero && saw_beyond_gap,
          fmt("%d cases, max |diff| %.2e", cases, worst)};
}

Outcome bound_safety() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DecoyConfig decoy;
  int violations = 0;
  int undefined = 0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const double eta = 1e-4 + (0.5 - 1e-4) * u(rng);
    const double y_b = 1e-3 * u(rng);
    const double e_mis = 0.05 * u(rng);
    const auto ch = oracle::poisson_channel(decoy.mu, eta, y_b, e_mis);
    KeyRateInput in;
    for (std::size_t k = 0; k < 3; ++k) in.classes[k] = {ch.gain[k], ch.qber[k]};
    in.decoy = decoy;
    const KeyRateOutput out = skr(in);
    if (out.y1_lower > ch.y1) ++violations;
    if (out.bound_undefined) {
      ++undefined;
    } else if (out.e1_upper < ch.e1) {
      ++violations;
    }
  }
  return {violations == 0,
          fmt("%d channels, %d violations, %d with no usable yield bound", n, violations, undefined)};
}

Outcome monte_carlo_agreement() {
  Scenario s = calibrated("best_case_20km.conf");
  const ScenarioResult analytic = run_scenario(s);
  const MonteCarloInput in{s.decoy, s.system, s.detector, analytic.eta_channel, analytic.p_raman_gate};
  const std::uint64_t n = 1'000'000;
  const std::uint64_t seed = 2024;
  const TallyCounts one = simulate_pulses(in, n, seed, 1);
  const TallyCounts many = simulate_pulses(in, n, seed, 4);
  const TallyCounts def = simulate_pulses(in, n, seed, 0);
  const bool deterministic = one == many && one == def;

  const auto expected = detected_gain_qber(s.decoy, s.system, s.detector, analytic.eta_channel,
                                           analytic.y_background);
  const auto est = sift(one, s.system);
  const double match = s.system.basis_match_prob();
  Outcome o{deterministic, deterministic ? "deterministic;" : "NOT deterministic;"};
  for (std::size_t k = 0; k < kIntensityClasses; ++k) {
    const double sent = static_cast<double>(one.classes[k].pulses_sent);
    const double p = match * expected[k].gain;
    const double sigma_q = std::sqrt(p * (1.0 - p) / sent) / match;
    const double zq = (est[k].gain - expected[k].gain) / sigma_q;
    const double sifted_expected = sent * p;
    double ze = 0.0;
    bool e_ok;
    if (est[k].qber) {
      const double e = expected[k].qber;
      const double sigma_e = std::sqrt(e * (1.0 - e) / sifted_expected);
      ze = (*est[k].qber - e) / sigma_e;
      e_ok = std::abs(ze) <= 3.0;
    } else {
      // No sifted events: only acceptable if almost none were expected.
      e_ok = sifted_expected <= 9.0;
    }
    const bool ok = std::abs(zq) <= 3.0 && e_ok;
    o.pass = o.pass && ok;
    o.detail += fmt(" mu%zu zQ=%+.2f zE=%+.2f;", k + 1, zq, ze);
  }
  return o;
}

Outcome interleaving_effect() {
  Scenario base = calibrated("best_case_20km.conf");
  Scenario off = base;
  off.interleaving = false;
  off.channels.classical = {{ItuChannel(36), Power::from_dbm(0.0)}};
  const double qber_off_0 = run_scenario(off).qber();

  double zero_at = std::nan("");
  for (double dbm : default_sweep_powers()) {
    off.channels.classical = {{ItuChannel(36), Power::from_dbm(dbm)}};
    if (run_scenario(off).key.r_per_pulse == 0.0) {
      zero_at = dbm;
      break;
    }
  }

  Scenario quiet = base;
  quiet.channels.classical.clear();
  Scenario on = base;
  on.channels.classical = {{ItuChannel(36), Power::from_dbm(10.0)}};
  const double excess = 100.0 * (run_scenario(on).qber() - run_scenario(quiet).qber());

  const bool ok = qber_off_0 >= 0.10 && zero_at <= 10.0 && excess < 0.2;
  return {ok, fmt("off: QBER %.3f%% at 0 dBm, key rate 0 from %.0f dBm; on: +%.4fpp at 10 dBm",
                  100.0 * qber_off_0, zero_at, excess)};
}

Outcome eight_channels() {
  const Scenario s = calibrated("eight_channel_100km.conf");
  const PlanReport report = plan(s);
  const double total = s.channels.total_launch().dbm();
  const ScenarioResult r = run_scenario(s);
  const bool ok = report.all_feasible() && report.channels.size() == 8 &&
                  std::abs(total - 18.0) <= 0.1 && r.qber() < 0.10;
  return {ok, fmt("%zu channels, all feasible: %s, total %.2f dBm, QBER %.2f%%",
                  report.channels.size(), report.all_feasible() ? "yes" : "no", total,
                  100.0 * r.qber())};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"Published rate pairs", 1.0, rate_pairs},
      {"Calibrated distance rows", 10.0, distance_rows},
      {"Walk-off geometry", 1.0, walk_off},
      {"Trapezoid oracle equivalence", 30.0, trapezoid_oracle},
      {"Decoy-bound safety", 10.0, bound_safety},
      {"Monte Carlo / analytic agreement", 60.0, monte_carlo_agreement},
      {"Interleaving effect curve", 5.0, interleaving_effect},
      {"Eight-channel plan", 10.0, eight_channels},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
    return 2;
  }

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %zu: %s | %s | %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL",
                i + 1, c.name, o.detail.c_str(), secs, c.budget_s, in_time ? "" : " over time");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
