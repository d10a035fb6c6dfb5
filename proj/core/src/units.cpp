#include "qli/units.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qli/errors.hpp"

namespace qli {

OpticalFrequency::OpticalFrequency(double thz) : thz_(thz) {
  if (!(thz > 0.0) || !std::isfinite(thz)) {
    throw Error(ErrorCode::Domain, "optical frequency must be positive, got " +
                                       std::to_string(thz) + " THz");
  }
}

ItuChannel::ItuChannel(int index) : index_(index) {
  if (index < kMinChannel || index > kMaxChannel) {
    throw Error(ErrorCode::InvalidChannel,
                "ITU channel " + std::to_string(index) + " outside [" +
                    std::to_string(kMinChannel) + ", " +
                    std::to_string(kMaxChannel) + "]");
  }
}

Power Power::from_mw(double mw) {
  if (!(mw >= 0.0) || !std::isfinite(mw)) {
    throw Error(ErrorCode::Domain, "power must be a finite non-negative mW value");
  }
  return Power(mw);
}

Power Power::from_dbm(double dbm) { return from_mw(dbm_to_mw(dbm)); }

double Power::dbm() const noexcept {
  if (mw_ <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw_);
}

OpticalFrequency itu_channel_frequency(ItuChannel ch) {
  // Integer arithmetic in units of 100 GHz keeps grid points exact up to the
  // final division.
  const double hundreds_of_ghz = 1900.0 + static_cast<double>(ch.index());
  return OpticalFrequency(hundreds_of_ghz / 10.0);
}

double frequency_to_wavelength_nm(OpticalFrequency f) {
  return kSpeedOfLight / f.hz() * 1e9;
}

OpticalFrequency wavelength_nm_to_frequency(double lambda_nm) {
  if (!(lambda_nm > 0.0)) {
    throw Error(ErrorCode::Domain, "wavelength must be positive");
  }
  return OpticalFrequency(kSpeedOfLight / (lambda_nm * 1e-9) * 1e-12);
}

double dbm_to_mw(double dbm) {
  if (std::isnan(dbm)) throw Error(ErrorCode::Domain, "dBm value is NaN");
  return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw) {
  if (!(mw >= 0.0)) throw Error(ErrorCode::Domain, "negative mW value");
  if (mw == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

bool is_zero_power_sentinel(double dbm) noexcept {
  return std::isinf(dbm) && dbm < 0.0;
}

Power sum_powers(std::span<const Power> powers) {
  // Kahan-Babuska summation: order-insensitive to well below 1e-12.
  double sum = 0.0;
  double comp = 0.0;
  for (const Power& p : powers) {
    const double v = p.mw();
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return Power::from_mw(sum + comp);
}

double photon_energy_j(double lambda_nm) {
  if (!(lambda_nm > 0.0)) throw Error(ErrorCode::Domain, "wavelength must be positive");
  return kPlanck * kSpeedOfLight / (lambda_nm * 1e-9);
}

}  // namespace qli
