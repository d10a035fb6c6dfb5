#include "qli/keyrate.hpp"

#include <algorithm>
#include <cmath>

#include "qli/errors.hpp"

namespace qli {

double h2(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::Domain, "h2 argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

BoundResult y1_lower(double q_mu1, double q_mu2, double mu1, double mu2, double y0) {
  if (!(mu1 > mu2 && mu2 > 0.0)) {
    throw Error(ErrorCode::Domain, "y1_lower requires mu1 > mu2 > 0");
  }
  const double ratio = mu2 / mu1;
  const double raw = mu1 / (mu1 * mu2 - mu2 * mu2) *
                     (q_mu2 * std::exp(mu2) - q_mu1 * std::exp(mu1) * ratio * ratio -
                      (mu1 * mu1 - mu2 * mu2) / (mu1 * mu1) * y0);
  if (!(raw > 0.0)) return {0.0, true};
  if (raw > 1.0) return {1.0, true};
  return {raw, false};
}

BoundResult e1_upper(double e_mu2, double q_mu2, double mu2, double y0, double y1_lower,
                     double e0) {
  if (!(y1_lower > 0.0)) {
    throw Error(ErrorCode::UndefinedBound, "single-photon error bound needs y1_lower > 0");
  }
  if (!(mu2 > 0.0)) throw Error(ErrorCode::Domain, "e1_upper requires mu2 > 0");
  const double raw = (e_mu2 * q_mu2 * std::exp(mu2) - e0 * y0) / (y1_lower * mu2);
  if (raw > 0.5) return {0.5, true};
  return {std::max(raw, 0.0), false};
}

VacuumBracket vacuum_yield_bracket(const GainQber& decoy, const GainQber& vacuum, double mu2,
                                   double mu3) {
  if (!(mu2 > mu3 && mu3 >= 0.0)) throw Error(ErrorCode::Domain, "need mu2 > mu3 >= 0");
  const double upper = std::min(1.0, vacuum.gain * std::exp(mu3));
  const double lower =
      (mu2 * vacuum.gain * std::exp(mu3) - mu3 * decoy.gain * std::exp(mu2)) / (mu2 - mu3);
  return {std::clamp(lower, 0.0, upper), upper};
}

KeyRateOutput skr(const KeyRateInput& in) {
  in.decoy.validate();
  if (!(in.f_ec >= 1.0)) throw Error(ErrorCode::Domain, "f_ec must be >= 1");
  for (const GainQber& c : in.classes) {
    if (!(c.gain >= 0.0 && c.gain <= 1.0) || !(c.qber >= 0.0 && c.qber <= 0.5)) {
      throw Error(ErrorCode::Domain, "gains must be in [0, 1] and QBERs in [0, 0.5]");
    }
  }
  const auto& [signal, decoy, vacuum] = in.classes;
  const double mu1 = in.decoy.mu[0];
  const double mu2 = in.decoy.mu[1];
  const double mu3 = in.decoy.mu[2];

  KeyRateOutput out;
  const VacuumBracket y0 = vacuum_yield_bracket(decoy, vacuum, mu2, mu3);
  out.y0_lower = y0.lower;
  out.y0_upper = y0.upper;

  const BoundResult y1 = y1_lower(signal.gain, decoy.gain, mu1, mu2, y0.upper);
  out.y1_lower = y1.value;
  out.y1_flagged = y1.flagged;
  out.q1_lower = y1.value * mu1 * std::exp(-mu1);
  if (y1.value <= 0.0) {
    out.bound_undefined = true;
    out.e1_upper = 0.5;
    return out;
  }

  const BoundResult e1 = e1_upper(decoy.qber, decoy.gain, mu2, y0.lower, y1.value, in.e0);
  out.e1_upper = e1.value;
  out.e1_flagged = e1.flagged;
  if (e1.flagged) return out;

  const double rate = in.sifting_q * (-signal.gain * in.f_ec * h2(signal.qber) +
                                      out.q1_lower * (1.0 - h2(e1.value)));
  out.r_per_pulse = std::max(rate, 0.0);
  out.r_bps = bits_per_second(out.r_per_pulse, in.rep_rate_mhz);
  return out;
}

}  // namespace qli
