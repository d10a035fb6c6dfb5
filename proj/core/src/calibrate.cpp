#include "qli/calibrate.hpp"

#include <cmath>
#include <filesystem>

#include "qli/errors.hpp"

namespace qli {
namespace {

constexpr int kBisectionSteps = 200;

double skr_at(Scenario s, double insertion_db, double beta) {
  s.path.quantum_insertion_loss_db = insertion_db;
  s.beta_scale = beta;
  s.mode = RunMode::Analytic;
  return run_scenario(s, 1).key.r_per_pulse;
}

double qber_at(Scenario s, double insertion_db, double beta) {
  s.path.quantum_insertion_loss_db = insertion_db;
  s.beta_scale = beta;
  s.mode = RunMode::Analytic;
  return run_scenario(s, 1).qber();
}

std::string fmt(double v) { return std::to_string(v); }

double fit_insertion(const SkrAnchor& a, double beta, const CalibrationBounds& b) {
  double lo = b.insertion_min_db;
  double hi = b.insertion_max_db;
  const double at_lo = skr_at(a.scenario, lo, beta);
  const double at_hi = skr_at(a.scenario, hi, beta);
  if (!(a.bits_per_pulse <= at_lo && a.bits_per_pulse >= at_hi)) {
    throw Error(ErrorCode::CalibrationFailure,
                "key-rate target " + fmt(a.bits_per_pulse) + " outside [" + fmt(at_hi) + ", " +
                    fmt(at_lo) + "] reachable by insertion loss");
  }
  for (int i = 0; i < kBisectionSteps && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (skr_at(a.scenario, mid, beta) >= a.bits_per_pulse) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double fit_beta(const QberAnchor& a, double insertion_db, const CalibrationBounds& b) {
  double lo = std::log(b.beta_min);
  double hi = std::log(b.beta_max);
  const double at_lo = qber_at(a.scenario, insertion_db, b.beta_min);
  const double at_hi = qber_at(a.scenario, insertion_db, b.beta_max);
  if (a.qber < at_lo) {
    throw Error(ErrorCode::CalibrationFailure,
                "QBER target " + fmt(a.qber) + " below the noise-free baseline " + fmt(at_lo));
  }
  if (a.qber > at_hi) {
    throw Error(ErrorCode::CalibrationFailure,
                "QBER target " + fmt(a.qber) + " above the largest reachable " + fmt(at_hi));
  }
  for (int i = 0; i < kBisectionSteps && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (qber_at(a.scenario, insertion_db, std::exp(mid)) >= a.qber) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(hi);
}

}  // namespace

AnchorSet published_anchors(const Scenario& base) {
  AnchorSet a;
  Scenario s = base;
  s.path.fiber.length_km = 20.0;
  s.mode = RunMode::Analytic;

  a.skr.scenario = s;
  a.skr.scenario.name = "anchor-skr-20km";
  a.skr.scenario.interleaving = true;
  a.skr.scenario.channels.classical = {{ItuChannel(36), Power::from_dbm(10.0)}};
  a.skr.bits_per_pulse = 1.58e-3;

  a.qber.scenario = s;
  a.qber.scenario.name = "anchor-qber-20km-off";
  a.qber.scenario.interleaving = false;
  a.qber.scenario.channels.classical = {{ItuChannel(36), Power::from_dbm(0.0)}};
  a.qber.qber = 0.10;
  return a;
}

AnchorSet load_anchors(const std::string& path) {
  const auto cfg = KeyValueConfig::load(path);
  const auto unknown =
      cfg.unknown_keys({"skr.scenario", "skr.bits_per_pulse", "qber.scenario", "qber.target"});
  if (!unknown.empty()) {
    throw Error(ErrorCode::InvalidConfig, path + ": unknown key '" + unknown.front() + "'");
  }
  const auto dir = std::filesystem::path(path).parent_path();
  auto required = [&](const std::string& key) {
    auto v = cfg.get_string(key);
    if (!v) throw Error(ErrorCode::InvalidConfig, path + ": missing key '" + key + "'");
    return *v;
  };
  auto required_double = [&](const std::string& key) {
    auto v = cfg.get_double(key);
    if (!v) throw Error(ErrorCode::InvalidConfig, path + ": missing key '" + key + "'");
    return *v;
  };
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path f(p);
    return (f.is_relative() ? dir / f : f).string();
  };
  AnchorSet a;
  a.skr.scenario = load_scenario(resolve(required("skr.scenario")));
  a.skr.bits_per_pulse = required_double("skr.bits_per_pulse");
  a.qber.scenario = load_scenario(resolve(required("qber.scenario")));
  a.qber.qber = required_double("qber.target");
  return a;
}

CalibrationResult calibrate(const AnchorSet& anchors, const CalibrationBounds& bounds) {
  if (!(anchors.skr.bits_per_pulse > 0.0) || !(anchors.qber.qber > 0.0 && anchors.qber.qber < 0.5)) {
    throw Error(ErrorCode::CalibrationFailure, "anchor targets must be positive (QBER below 0.5)");
  }
  if (bounds.rounds < 1) throw Error(ErrorCode::CalibrationFailure, "at least one round required");

  CalibrationResult r;
  r.beta_scale = anchors.skr.scenario.beta_scale;
  for (int round = 0; round < bounds.rounds; ++round) {
    r.insertion_loss_db = fit_insertion(anchors.skr, r.beta_scale, bounds);
    r.beta_scale = fit_beta(anchors.qber, r.insertion_loss_db, bounds);
    r.rounds = round + 1;
  }
  r.skr_achieved = skr_at(anchors.skr.scenario, r.insertion_loss_db, r.beta_scale);
  r.qber_achieved = qber_at(anchors.qber.scenario, r.insertion_loss_db, r.beta_scale);
  r.skr_residual = (r.skr_achieved - anchors.skr.bits_per_pulse) / anchors.skr.bits_per_pulse;
  r.qber_residual = (r.qber_achieved - anchors.qber.qber) / anchors.qber.qber;
  return r;
}

void apply_calibration(Scenario& scenario, const CalibrationResult& calibration) {
  scenario.path.quantum_insertion_loss_db = calibration.insertion_loss_db;
  scenario.beta_scale = calibration.beta_scale;
}

}  // namespace qli
