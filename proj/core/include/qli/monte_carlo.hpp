#pragma once

#include <cstdint>

#include "qli/qkd_channel.hpp"

namespace qli {

/// Pulses per independent substream. Dead-time state restarts at every
/// block boundary, which biases gains by at most one dead window per block.
inline constexpr std::uint64_t kMonteCarloBlock = 1u << 17;

struct MonteCarloInput {
  DecoyConfig decoy;
  SystemSpec system;
  DetectorSpec detector;
  double eta_ch = 1.0;        // channel transmittance (detector efficiency excluded)
  double p_raman_gate = 0.0;  // in-gate Raman noise per gate, detector group
};

/// Per-pulse simulation of the decoy-state BB84 link: Poisson source,
/// lossy channel, passive basis choice, four gated detectors with dark
/// counts, Raman background, dead time and sifting.
///
/// Results depend only on (input, n_pulses, seed); `threads` (0 = auto)
/// changes wall time, never the tally.
TallyCounts simulate_pulses(const MonteCarloInput& input, std::uint64_t n_pulses,
                            std::uint64_t seed, unsigned threads = 0);

}  // namespace qli
