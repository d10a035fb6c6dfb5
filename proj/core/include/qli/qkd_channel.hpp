#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace qli {

inline constexpr std::size_t kIntensityClasses = 3;

/// Signal / decoy / near-vacuum intensities and their emission probabilities.
struct DecoyConfig {
  std::array<double, kIntensityClasses> mu{0.85, 0.04, 0.001};
  std::array<double, kIntensityClasses> prob{0.9, 0.05, 0.05};

  /// Throws Error{Domain}: mu1 > mu2 > mu3 >= 0, probabilities on the simplex.
  void validate() const;
};

struct DetectorSpec {
  double efficiency = 0.2;
  /// Dark-count probability per gate for the whole four-detector group.
  double dark_yield = 6e-6;
  double gate_width_ns = 4.0;
  double dead_time_us = 10.0;
  int detector_count = 4;

  void validate() const;
};

struct SystemSpec {
  double rep_rate_mhz = 25.0;
  double e_mis = 0.01;
  double e0 = 0.5;
  /// Probability of the rectilinear basis, for both Alice and Bob's splitter.
  double basis_prob_x = 0.5;
  /// Sifting factor q in the key-rate formula; unset means px^2 + (1-px)^2.
  std::optional<double> sifting_q;
  double f_ec = 1.2;

  void validate() const;
  double basis_match_prob() const;
  double sifting_factor() const;
};

struct GainQber {
  double gain = 0.0;
  double qber = 0.0;
};

/// Dark counts plus in-gate Raman noise, per gated pulse over the group.
/// Throws Error{ModelBreakdown} when the sum reaches 1.
double effective_background(const DetectorSpec& detector, double p_raman_gate);

/// Q = Y_b + 1 - exp(-eta mu); E Q = e0 Y_b + e_mis (1 - exp(-eta mu)).
/// eta is channel transmittance times detector efficiency.
GainQber gain_qber_analytic(double mu, double eta, double y_b, double e_mis, double e0 = 0.5);

/// Whole pulse slots a detector stays blind after a click.
std::int64_t dead_slots(const DetectorSpec& detector, const SystemSpec& system);

/// Long-run fraction of pulse slots in which a detector is armed, averaged
/// over the detectors that carry sifted events. For per-slot click
/// probability p and N dead slots each detector is armed 1 / (1 + N p) of
/// the time.
double dead_time_live_fraction(const DecoyConfig& decoy, const SystemSpec& system,
                               const DetectorSpec& detector, double eta_ch, double y_b);

/// gain_qber_analytic for every class, with gains scaled by the dead-time
/// live fraction. QBERs are unaffected to first order.
std::array<GainQber, kIntensityClasses> detected_gain_qber(const DecoyConfig& decoy,
                                                           const SystemSpec& system,
                                                           const DetectorSpec& detector,
                                                           double eta_ch, double y_b);

struct ClassTally {
  std::uint64_t pulses_sent = 0;
  std::uint64_t sifted_detections = 0;
  std::uint64_t sifted_errors = 0;

  ClassTally& operator+=(const ClassTally& o) {
    pulses_sent += o.pulses_sent;
    sifted_detections += o.sifted_detections;
    sifted_errors += o.sifted_errors;
    return *this;
  }
  friend bool operator==(const ClassTally&, const ClassTally&) = default;
};

struct TallyCounts {
  std::array<ClassTally, kIntensityClasses> classes{};
  std::uint64_t raw_clicks = 0;
  std::uint64_t double_clicks = 0;
  std::uint64_t dead_time_losses = 0;

  TallyCounts& operator+=(const TallyCounts& o);
  /// sifted_errors <= sifted_detections <= pulses_sent for every class.
  bool is_consistent() const;
  friend bool operator==(const TallyCounts&, const TallyCounts&) = default;
};

struct SiftedEstimate {
  double gain = 0.0;
  double gain_half_width = 0.0;  // 95% Wilson half-width
  std::optional<double> qber;    // empty when no sifted detections
  double qber_half_width = 0.0;
  bool qber_clipped = false;     // reported QBER limited to e0 range
};

/// Per-class Q and E from a tally. Q is normalised by the basis-match
/// probability; QBER above 0.5 is clipped to 0.5 and flagged.
std::array<SiftedEstimate, kIntensityClasses> sift(const TallyCounts& tally,
                                                   const SystemSpec& system);

}  // namespace qli
