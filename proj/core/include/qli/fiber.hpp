#pragma once

#include "qli/units.hpp"

namespace qli {

/// Standard single-mode fiber in the C-band.
struct FiberSpec {
  double attenuation_db_per_km = 0.2;
  double dispersion_ps_per_nm_km = 17.0;
  double length_km = 20.0;

  /// Throws Error{Domain} on negative attenuation or non-positive length.
  void validate() const;
  /// Attenuation in 1/km (natural-log base).
  double attenuation_per_km() const;
};

/// Fiber plus lumped quantum-path insertion loss (mux, demux, WSS, receiver optics).
struct PathBudget {
  FiberSpec fiber;
  double quantum_insertion_loss_db = 0.0;

  /// 10^(-(alpha L + insertion)/10), in (0, 1].
  double quantum_transmittance() const;
};

/// 10^(-(alpha * length + extra)/10). Throws Error{Domain} on negative inputs.
double transmittance(double alpha_db_per_km, double length_km, double extra_db);

/// Largest arrival-time spread of forward Raman noise against the classical
/// frame: D * L * |lambda_c - lambda_q|, in ps.
double walk_off_delay_ps(const FiberSpec& fiber, double lambda_c_nm, double lambda_q_nm);

/// Forward spontaneous Raman power inside the receiver filter at the fiber
/// output: P * exp(-alpha L) * beta * L * B.
/// beta is in 1/(km GHz), filter_bw in GHz.
Power raman_noise_power(Power launch, const FiberSpec& fiber, double beta_per_km_ghz,
                        double filter_bw_ghz);

/// Probabilities above this are reported but still accepted.
inline constexpr double kNoiseWarnThreshold = 0.1;

/// Expected noise clicks per gate summed over the detector group:
/// (P / h nu) * gate * eta_d * window_weight.
///
/// window_weight is the mean noise intensity inside the gate relative to the
/// period average (1 for continuous classical traffic, 0 when the gate sits
/// on the noise-free floor). Throws Error{ModelBreakdown} when the result
/// exceeds 1.
double noise_prob_per_gate(Power noise_at_receiver, double lambda_q_nm, double gate_ns,
                           double eta_d, double window_weight);

/// Same quantity without the breakdown check.
double expected_noise_clicks(Power noise_at_receiver, double lambda_q_nm, double gate_ns,
                             double eta_d, double window_weight);

}  // namespace qli
