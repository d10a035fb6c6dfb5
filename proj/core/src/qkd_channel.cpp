#include "qli/qkd_channel.hpp"

#include <cmath>
#include <string>

#include "qli/errors.hpp"

namespace qli {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

struct Wilson {
  double center;
  double half_width;
};

Wilson wilson(std::uint64_t successes, std::uint64_t trials) {
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {center, half};
}

}  // namespace

void DecoyConfig::validate() const {
  if (!(mu[0] > mu[1] && mu[1] > mu[2] && mu[2] >= 0.0)) {
    throw Error(ErrorCode::Domain, "decoy intensities must satisfy mu1 > mu2 > mu3 >= 0");
  }
  double total = 0.0;
  for (double p : prob) {
    if (!is_probability(p)) throw Error(ErrorCode::Domain, "emission probability outside [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::Domain, "emission probabilities must sum to 1");
  }
}

void DetectorSpec::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw Error(ErrorCode::Domain, "detector efficiency must be in (0, 1]");
  }
  if (!(dark_yield >= 0.0 && dark_yield < 1.0)) throw Error(ErrorCode::Domain, "dark yield must be in [0, 1)");
  if (!(dead_time_us >= 0.0)) throw Error(ErrorCode::Domain, "dead time must be >= 0");
  if (!(gate_width_ns > 0.0)) throw Error(ErrorCode::Domain, "gate width must be > 0");
  if (detector_count != 4) {
    throw Error(ErrorCode::Domain, "the receiver model has exactly four detectors");
  }
}

void SystemSpec::validate() const {
  if (!(rep_rate_mhz > 0.0)) throw Error(ErrorCode::Domain, "repetition rate must be > 0");
  if (!is_probability(e_mis) || !is_probability(e0) || !is_probability(basis_prob_x)) {
    throw Error(ErrorCode::Domain, "system probabilities must be in [0, 1]");
  }
  if (sifting_q && !is_probability(*sifting_q)) {
    throw Error(ErrorCode::Domain, "sifting factor must be in [0, 1]");
  }
  if (!(f_ec >= 1.0)) throw Error(ErrorCode::Domain, "error-correction efficiency must be >= 1");
}

double SystemSpec::basis_match_prob() const {
  return basis_prob_x * basis_prob_x + (1.0 - basis_prob_x) * (1.0 - basis_prob_x);
}

double SystemSpec::sifting_factor() const { return sifting_q.value_or(basis_match_prob()); }

double effective_background(const DetectorSpec& detector, double p_raman_gate) {
  if (!(p_raman_gate >= 0.0 && p_raman_gate < 1.0) || !(detector.dark_yield >= 0.0)) {
    throw Error(ErrorCode::Domain, "background inputs must lie in [0, 1)");
  }
  const double y_b = detector.dark_yield + p_raman_gate;
  if (y_b >= 1.0) {
    throw Error(ErrorCode::ModelBreakdown,
                "background yield " + std::to_string(y_b) + " per gate reaches 1");
  }
  return y_b;
}

GainQber gain_qber_analytic(double mu, double eta, double y_b, double e_mis, double e0) {
  if (!(mu >= 0.0) || !(eta >= 0.0 && eta <= 1.0) || !(y_b >= 0.0 && y_b < 1.0) ||
      !is_probability(e_mis) || !is_probability(e0)) {
    throw Error(ErrorCode::Domain, "gain/QBER inputs out of domain");
  }
  const double signal = -std::expm1(-eta * mu);
  const double gain = y_b + signal;
  if (gain <= 0.0) return {0.0, e0};
  return {std::min(gain, 1.0), (e0 * y_b + e_mis * signal) / gain};
}

std::int64_t dead_slots(const DetectorSpec& detector, const SystemSpec& system) {
  const double slots = detector.dead_time_us * system.rep_rate_mhz;
  // Round up, but keep exact products (10 us * 25 MHz = 250) exact.
  return static_cast<std::int64_t>(std::ceil(slots - 1e-9));
}

double dead_time_live_fraction(const DecoyConfig& decoy, const SystemSpec& system,
                               const DetectorSpec& detector, double eta_ch, double y_b) {
  const std::int64_t n_dead = dead_slots(detector, system);
  if (n_dead <= 0) return 1.0;

  const double eta = eta_ch * detector.efficiency;
  const double y_det = y_b / 4.0;
  const double e = system.e_mis;
  auto click = [&](double mean_photons) {
    return 1.0 - (1.0 - y_det) * std::exp(-mean_photons);
  };
  // Per-slot click probability of one detector in the basis selected with
  // probability `pb` at both ends.
  auto armed_click_prob = [&](double pb) {
    double p = 0.0;
    for (std::size_t k = 0; k < kIntensityClasses; ++k) {
      const double m = eta * decoy.mu[k];
      const double same_basis = 0.5 * (click(m * pb * (1.0 - e)) + click(m * pb * e));
      const double other_basis = click(m * pb * 0.5);
      p += decoy.prob[k] * (pb * same_basis + (1.0 - pb) * other_basis);
    }
    return p;
  };
  const double px = system.basis_prob_x;
  const double live_x = 1.0 / (1.0 + static_cast<double>(n_dead) * armed_click_prob(px));
  const double live_z = 1.0 / (1.0 + static_cast<double>(n_dead) * armed_click_prob(1.0 - px));
  const double match = system.basis_match_prob();
  if (match <= 0.0) return 1.0;
  const double w_x = px * px / match;
  return w_x * live_x + (1.0 - w_x) * live_z;
}

std::array<GainQber, kIntensityClasses> detected_gain_qber(const DecoyConfig& decoy,
                                                           const SystemSpec& system,
                                                           const DetectorSpec& detector,
                                                           double eta_ch, double y_b) {
  const double live = dead_time_live_fraction(decoy, system, detector, eta_ch, y_b);
  const double eta = eta_ch * detector.efficiency;
  std::array<GainQber, kIntensityClasses> out{};
  for (std::size_t k = 0; k < kIntensityClasses; ++k) {
    out[k] = gain_qber_analytic(decoy.mu[k], eta, y_b, system.e_mis, system.e0);
    out[k].gain *= live;
  }
  return out;
}

TallyCounts& TallyCounts::operator+=(const TallyCounts& o) {
  for (std::size_t k = 0; k < kIntensityClasses; ++k) classes[k] += o.classes[k];
  raw_clicks += o.raw_clicks;
  double_clicks += o.double_clicks;
  dead_time_losses += o.dead_time_losses;
  return *this;
}

bool TallyCounts::is_consistent() const {
  for (const ClassTally& c : classes) {
    if (c.sifted_errors > c.sifted_detections || c.sifted_detections > c.pulses_sent) {
      return false;
    }
  }
  return true;
}

std::array<SiftedEstimate, kIntensityClasses> sift(const TallyCounts& tally,
                                                   const SystemSpec& system) {
  if (!tally.is_consistent()) throw Error(ErrorCode::Domain, "inconsistent tally");
  const double match = system.basis_match_prob();
  std::array<SiftedEstimate, kIntensityClasses> out{};
  for (std::size_t k = 0; k < kIntensityClasses; ++k) {
    const ClassTally& c = tally.classes[k];
    SiftedEstimate& est = out[k];
    if (c.pulses_sent > 0 && match > 0.0) {
      est.gain = static_cast<double>(c.sifted_detections) /
                 (static_cast<double>(c.pulses_sent) * match);
      est.gain_half_width = wilson(c.sifted_detections, c.pulses_sent).half_width / match;
    }
    if (c.sifted_detections > 0) {
      double e = static_cast<double>(c.sifted_errors) / static_cast<double>(c.sifted_detections);
      est.qber_half_width = wilson(c.sifted_errors, c.sifted_detections).half_width;
      if (e > 0.5) {
        e = 0.5;
        est.qber_clipped = true;
      }
      est.qber = e;
    }
  }
  return out;
}

}  // namespace qli
