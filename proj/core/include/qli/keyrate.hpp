#pragma once

#include <array>

#include "qli/qkd_channel.hpp"

namespace qli {

/// Shannon binary entropy in bits; 0 at both endpoints.
double h2(double x);

struct KeyRateInput {
  std::array<GainQber, kIntensityClasses> classes;  // signal, decoy, near-vacuum
  DecoyConfig decoy;
  double f_ec = 1.2;
  double sifting_q = 0.5;
  double rep_rate_mhz = 25.0;
  double e0 = 0.5;
};

struct BoundResult {
  double value = 0.0;
  bool flagged = false;  // clipped or non-positive
};

/// Vacuum+weak decoy lower bound on the single-photon yield. Y0 enters with
/// a negative coefficient, so an over-estimate of Y0 keeps the bound safe.
/// Clipped to [0, 1]; flagged when the raw bound is non-positive.
BoundResult y1_lower(double q_mu1, double q_mu2, double mu1, double mu2, double y0);

/// Upper bound on the single-photon error rate. Y0 enters with a negative
/// coefficient, so pass an under-estimate. Clipped to [0, 0.5] and flagged
/// when exceeded; throws Error{UndefinedBound} for y1_lower <= 0.
BoundResult e1_upper(double e_mu2, double q_mu2, double mu2, double y0, double y1_lower,
                     double e0 = 0.5);

/// Bracket on the vacuum yield from the two weakest classes:
/// upper = Q3 e^mu3; lower = (mu2 Q3 e^mu3 - mu3 Q2 e^mu2) / (mu2 - mu3).
struct VacuumBracket {
  double lower = 0.0;
  double upper = 0.0;
};
VacuumBracket vacuum_yield_bracket(const GainQber& decoy, const GainQber& vacuum, double mu2,
                                   double mu3);

struct KeyRateOutput {
  double y0_lower = 0.0;
  double y0_upper = 0.0;
  double y1_lower = 0.0;
  double q1_lower = 0.0;
  double e1_upper = 0.0;
  double r_per_pulse = 0.0;
  double r_bps = 0.0;
  bool y1_flagged = false;
  bool e1_flagged = false;
  /// No usable single-photon bound; the rate is forced to 0.
  bool bound_undefined = false;
};

/// R = q { -Q_mu1 f_ec H2(E_mu1) + Q1_L [1 - H2(e1_U)] }, clamped at 0.
KeyRateOutput skr(const KeyRateInput& input);

/// Exact per-pulse rate to bit rate conversion.
inline double bits_per_second(double bits_per_pulse, double rep_rate_mhz) {
  return bits_per_pulse * rep_rate_mhz * 1e6;
}

}  // namespace qli
