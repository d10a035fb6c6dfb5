#include "qli/monte_carlo.hpp"

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "qli/errors.hpp"
#include "qli/parallel.hpp"

namespace qli {
namespace {

class BlockRng {
 public:
  BlockRng(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32), 0x514c49u};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

  /// Inversion sampling; intensities here are O(1).
  unsigned poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform();
    double term = std::exp(-mean);
    double cdf = term;
    unsigned k = 0;
    while (u >= cdf && k < 1000) {
      ++k;
      term *= mean / k;
      cdf += term;
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

enum Basis : unsigned { kX = 0, kZ = 1 };

TallyCounts simulate_block(const MonteCarloInput& in, std::uint64_t pulses, std::uint64_t seed,
                           std::uint64_t block) {
  BlockRng rng(seed, block);
  TallyCounts tally;

  const double px = in.system.basis_prob_x;
  const double e_mis = in.system.e_mis;
  const double miss = 1.0 - in.detector.efficiency;
  const double y_det = effective_background(in.detector, in.p_raman_gate) / 4.0;
  const std::int64_t n_dead = dead_slots(in.detector, in.system);
  const std::array<double, kIntensityClasses> cdf{
      in.decoy.prob[0], in.decoy.prob[0] + in.decoy.prob[1], 1.0};

  // Detector d is blind while pulse index < armed_at[d].
  std::array<std::int64_t, 4> armed_at{0, 0, 0, 0};

  for (std::int64_t i = 0; i < static_cast<std::int64_t>(pulses); ++i) {
    const double uc = rng.uniform();
    const std::size_t k = uc < cdf[0] ? 0 : (uc < cdf[1] ? 1 : 2);
    const unsigned a_basis = rng.bernoulli(px) ? kX : kZ;
    const unsigned a_bit = rng.bernoulli(0.5) ? 1u : 0u;
    ClassTally& cls = tally.classes[k];
    ++cls.pulses_sent;

    std::array<unsigned, 4> photons{0, 0, 0, 0};
    const unsigned emitted = rng.poisson(in.decoy.mu[k]);
    for (unsigned p = 0; p < emitted; ++p) {
      if (!rng.bernoulli(in.eta_ch)) continue;
      const unsigned b_basis = rng.bernoulli(px) ? kX : kZ;
      unsigned outcome;
      if (b_basis == a_basis) {
        outcome = rng.bernoulli(e_mis) ? 1u - a_bit : a_bit;
      } else {
        outcome = rng.bernoulli(0.5) ? 1u : 0u;
      }
      ++photons[2 * b_basis + outcome];
    }

    std::array<bool, 4> clicked{false, false, false, false};
    for (std::size_t d = 0; d < 4; ++d) {
      const double silent = std::pow(miss, photons[d]) * (1.0 - y_det);
      if (silent >= 1.0 || !rng.bernoulli(1.0 - silent)) continue;
      if (i < armed_at[d]) {
        ++tally.dead_time_losses;
        continue;
      }
      clicked[d] = true;
      ++tally.raw_clicks;
      armed_at[d] = i + 1 + n_dead;
    }

    const bool x_click = clicked[0] || clicked[1];
    const bool z_click = clicked[2] || clicked[3];
    if (!x_click && !z_click) continue;

    unsigned b_basis;
    unsigned b_bit;
    if (x_click && z_click) {
      ++tally.double_clicks;
      b_basis = rng.bernoulli(0.5) ? kX : kZ;
      b_bit = rng.bernoulli(0.5) ? 1u : 0u;
    } else {
      b_basis = x_click ? kX : kZ;
      const bool c0 = clicked[2 * b_basis];
      const bool c1 = clicked[2 * b_basis + 1];
      if (c0 && c1) {
        ++tally.double_clicks;
        b_bit = rng.bernoulli(0.5) ? 1u : 0u;
      } else {
        b_bit = c1 ? 1u : 0u;
      }
    }
    if (b_basis != a_basis) continue;
    ++cls.sifted_detections;
    if (b_bit != a_bit) ++cls.sifted_errors;
  }
  return tally;
}

}  // namespace

TallyCounts simulate_pulses(const MonteCarloInput& input, std::uint64_t n_pulses,
                            std::uint64_t seed, unsigned threads) {
  if (n_pulses == 0) throw Error(ErrorCode::Domain, "n_pulses must be >= 1");
  input.decoy.validate();
  input.system.validate();
  input.detector.validate();
  if (!(input.eta_ch >= 0.0 && input.eta_ch <= 1.0)) {
    throw Error(ErrorCode::Domain, "channel transmittance must be in [0, 1]");
  }

  const std::uint64_t blocks = (n_pulses + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<TallyCounts> partial(blocks);
  parallel_for(
      blocks,
      [&](std::size_t b) {
        const std::uint64_t first = b * kMonteCarloBlock;
        const std::uint64_t count = std::min(kMonteCarloBlock, n_pulses - first);
        partial[b] = simulate_block(input, count, seed, b);
      },
      threads);

  TallyCounts total;
  for (const TallyCounts& t : partial) total += t;
  return total;
}

}  // namespace qli
