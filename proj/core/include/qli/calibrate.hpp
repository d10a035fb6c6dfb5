#pragma once

#include <string>

#include "qli/scenario.hpp"

namespace qli {

/// Key rate observed without in-gate noise; fixes the quantum-path
/// insertion loss.
struct SkrAnchor {
  Scenario scenario;
  double bits_per_pulse = 0.0;
};

/// QBER observed with noise dominating; fixes the Raman scale.
struct QberAnchor {
  Scenario scenario;
  double qber = 0.0;
};

struct AnchorSet {
  SkrAnchor skr;
  QberAnchor qber;
};

/// The two published anchors built on top of `base`: 20 km, Ch36 at 10 dBm
/// with interleaving for the key rate (1.58e-3 bits/pulse) and 20 km, Ch36
/// at 0 dBm without interleaving for QBER (10%).
AnchorSet published_anchors(const Scenario& base = {});

/// Anchors file keys: skr.scenario, skr.bits_per_pulse, qber.scenario,
/// qber.target. Scenario paths resolve against the anchors file directory.
AnchorSet load_anchors(const std::string& path);

struct CalibrationBounds {
  double insertion_min_db = 0.0;
  double insertion_max_db = 60.0;
  double beta_min = 1e-16;
  double beta_max = 1e-6;
  int rounds = 2;
};

struct CalibrationResult {
  double insertion_loss_db = 0.0;
  double beta_scale = 0.0;
  double skr_achieved = 0.0;
  double qber_achieved = 0.0;
  /// (achieved - target) / target.
  double skr_residual = 0.0;
  double qber_residual = 0.0;
  int rounds = 0;
};

/// Alternating 1-D bisections: insertion loss on the key-rate anchor, then
/// beta scale (log-spaced) on the QBER anchor. The beta result is the upper
/// end of the final bracket so the anchor QBER is met or exceeded.
/// Error{CalibrationFailure} when a target lies outside what the bounds can
/// reach, for instance a QBER below the noise-free baseline.
CalibrationResult calibrate(const AnchorSet& anchors, const CalibrationBounds& bounds = {});

/// Copies the calibrated pair into a scenario.
void apply_calibration(Scenario& scenario, const CalibrationResult& calibration);

}  // namespace qli
