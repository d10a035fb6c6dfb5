#pragma once

#include <span>

namespace qli {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, vacuum
inline constexpr double kPlanck = 6.626'070'15e-34;     // J s

/// ITU-T G.694.1 100-GHz grid: f = 190.0 THz + 0.1 THz * index.
inline constexpr double kGridOriginThz = 190.0;
inline constexpr double kGridSpacingThz = 0.1;
inline constexpr int kMinChannel = 1;
inline constexpr int kMaxChannel = 72;

class OpticalFrequency {
 public:
  /// Throws Error{Domain} unless thz > 0.
  explicit OpticalFrequency(double thz);

  double thz() const noexcept { return thz_; }
  double ghz() const noexcept { return thz_ * 1e3; }
  double hz() const noexcept { return thz_ * 1e12; }

  friend auto operator<=>(const OpticalFrequency&, const OpticalFrequency&) = default;

 private:
  double thz_;
};

class ItuChannel {
 public:
  /// Throws Error{InvalidChannel} outside [kMinChannel, kMaxChannel].
  explicit ItuChannel(int index);

  int index() const noexcept { return index_; }

  friend auto operator<=>(const ItuChannel&, const ItuChannel&) = default;

 private:
  int index_;
};

/// Optical power, held in mW. dBm only appears at I/O boundaries.
class Power {
 public:
  constexpr Power() = default;
  /// Throws Error{Domain} for negative or non-finite values.
  static Power from_mw(double mw);
  static Power from_dbm(double dbm);

  double mw() const noexcept { return mw_; }
  double watts() const noexcept { return mw_ * 1e-3; }
  /// -infinity for zero power.
  double dbm() const noexcept;

  Power& operator+=(Power other) noexcept {
    mw_ += other.mw_;
    return *this;
  }
  friend Power operator+(Power a, Power b) noexcept { return a += b; }
  friend auto operator<=>(const Power&, const Power&) = default;

 private:
  constexpr explicit Power(double mw) : mw_(mw) {}
  double mw_ = 0.0;
};

OpticalFrequency itu_channel_frequency(ItuChannel ch);

/// Vacuum wavelength in nm.
double frequency_to_wavelength_nm(OpticalFrequency f);
OpticalFrequency wavelength_nm_to_frequency(double lambda_nm);

inline double channel_wavelength_nm(ItuChannel ch) {
  return frequency_to_wavelength_nm(itu_channel_frequency(ch));
}

double dbm_to_mw(double dbm);
/// Returns -infinity for 0 mW; see is_zero_power_sentinel().
double mw_to_dbm(double mw);
bool is_zero_power_sentinel(double dbm) noexcept;

/// Linear-domain sum with compensated summation.
Power sum_powers(std::span<const Power> powers);

/// Energy of a photon at the given vacuum wavelength, in joules.
double photon_energy_j(double lambda_nm);

}  // namespace qli
