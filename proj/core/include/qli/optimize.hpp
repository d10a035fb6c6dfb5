#pragma once

#include <array>
#include <functional>

#include "qli/keyrate.hpp"
#include "qli/qkd_channel.hpp"

namespace qli {

struct IntensityBounds {
  double mu1_min = 0.1;
  double mu1_max = 1.0;
  double mu2_min = 0.01;
  double mu2_max_fraction_of_mu1 = 0.5;
  double mu3 = 0.001;
  double prob_min = 0.01;
  int points_per_axis = 20;
  int refinements = 2;

  void validate() const;  // Error{EmptyFeasibleSet} when the box is empty
};

struct OptimizeResult {
  DecoyConfig best;
  double r_per_pulse = 0.0;
  double r_bps = 0.0;
  /// Final grid step per axis: mu1, mu2, p1, p2 (physical units).
  std::array<double, 4> resolution{};
  std::size_t evaluations = 0;
};

using KeyRateObjective = std::function<double(const DecoyConfig&)>;

/// Coarse-to-fine grid search over (mu1, mu2, p1, p2) maximising the
/// objective. Ties go to the lexicographically smallest (mu, prob) tuple, so
/// the result does not depend on evaluation order or thread count.
OptimizeResult optimize_intensities(const KeyRateObjective& objective,
                                    const IntensityBounds& bounds = {}, double rep_rate_mhz = 25.0,
                                    unsigned threads = 0);

struct ChannelParams {
  double eta_ch = 0.0;
  double y_b = 0.0;
  SystemSpec system;
  DetectorSpec detector;
};

/// Dead-time-aware gains fed to skr(); bits per pulse as in the rate formula.
double analytic_key_rate(const DecoyConfig& decoy, const ChannelParams& channel);

/// Optimizer objective: analytic_key_rate weighted by the signal emission
/// probability, since only signal pulses are distilled into key. Without
/// the weight the formula ignores p1 and the search drifts to p1 = min.
double signal_key_rate(const DecoyConfig& decoy, const ChannelParams& channel);

OptimizeResult optimize_intensities(const ChannelParams& channel,
                                    const IntensityBounds& bounds = {}, unsigned threads = 0);

}  // namespace qli
