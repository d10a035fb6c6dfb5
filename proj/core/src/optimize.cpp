#include "qli/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "qli/errors.hpp"
#include "qli/parallel.hpp"

namespace qli {
namespace {

struct Candidate {
  DecoyConfig config;
  double rate = -1.0;
  bool valid = false;
};

auto lex_key(const DecoyConfig& c) {
  return std::tie(c.mu[0], c.mu[1], c.mu[2], c.prob[0], c.prob[1], c.prob[2]);
}

bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.rate != b.rate) return a.rate > b.rate;
  return lex_key(a.config) < lex_key(b.config);
}

// Unit-cube coordinates -> configuration. u[1] and u[3] are relative
// positions inside ranges that depend on u[0] and u[2].
DecoyConfig decode(const std::array<double, 4>& u, const IntensityBounds& b) {
  DecoyConfig c;
  const double mu1 = b.mu1_min + u[0] * (b.mu1_max - b.mu1_min);
  const double mu2_max = std::max(b.mu2_min, b.mu2_max_fraction_of_mu1 * mu1);
  const double mu2 = b.mu2_min + u[1] * (mu2_max - b.mu2_min);
  const double p1_max = 1.0 - 2.0 * b.prob_min;
  const double p1 = b.prob_min + u[2] * (p1_max - b.prob_min);
  const double p2_max = 1.0 - p1 - b.prob_min;
  const double p2 = b.prob_min + u[3] * (p2_max - b.prob_min);
  c.mu = {mu1, mu2, b.mu3};
  c.prob = {p1, p2, 1.0 - p1 - p2};
  return c;
}

}  // namespace

void IntensityBounds::validate() const {
  const bool ok = mu1_min > 0.0 && mu1_max >= mu1_min && mu2_min > mu3 && mu3 >= 0.0 &&
                  mu2_max_fraction_of_mu1 * mu1_max >= mu2_min &&
                  mu2_max_fraction_of_mu1 < 1.0 && prob_min >= 0.0 && 3.0 * prob_min <= 1.0 &&
                  points_per_axis >= 2 && refinements >= 0;
  if (!ok) throw Error(ErrorCode::EmptyFeasibleSet, "intensity search box is empty");
}

OptimizeResult optimize_intensities(const KeyRateObjective& objective,
                                    const IntensityBounds& bounds, double rep_rate_mhz,
                                    unsigned threads) {
  bounds.validate();
  const int n = bounds.points_per_axis;
  std::array<double, 4> lo{0, 0, 0, 0};
  std::array<double, 4> hi{1, 1, 1, 1};
  std::array<double, 4> step{};
  Candidate best;
  std::size_t evaluations = 0;

  for (int level = 0; level <= bounds.refinements; ++level) {
    for (int a = 0; a < 4; ++a) step[a] = (hi[a] - lo[a]) / (n - 1);
    // One row per first-axis index; rows reduce in index order below.
    std::vector<Candidate> row_best(static_cast<std::size_t>(n));
    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t i0) {
          Candidate local;
          std::array<double, 4> u{};
          u[0] = lo[0] + static_cast<double>(i0) * step[0];
          for (int i1 = 0; i1 < n; ++i1) {
            u[1] = lo[1] + i1 * step[1];
            for (int i2 = 0; i2 < n; ++i2) {
              u[2] = lo[2] + i2 * step[2];
              for (int i3 = 0; i3 < n; ++i3) {
                u[3] = lo[3] + i3 * step[3];
                Candidate c{decode(u, bounds)};
                c.rate = objective(c.config);
                c.valid = std::isfinite(c.rate);
                if (better(c, local)) local = c;
              }
            }
          }
          row_best[i0] = local;
        },
        threads);
    evaluations += static_cast<std::size_t>(n) * n * n * n;

    Candidate level_best;
    std::array<double, 4> level_u{};
    for (int i0 = 0; i0 < n; ++i0) {
      if (better(row_best[i0], level_best)) level_best = row_best[i0];
    }
    if (better(level_best, best)) best = level_best;

    // Recover unit coordinates of the incumbent to centre the next level.
    const DecoyConfig& c = best.config;
    level_u[0] = (c.mu[0] - bounds.mu1_min) / std::max(1e-300, bounds.mu1_max - bounds.mu1_min);
    const double mu2_max = std::max(bounds.mu2_min, bounds.mu2_max_fraction_of_mu1 * c.mu[0]);
    level_u[1] = (c.mu[1] - bounds.mu2_min) / std::max(1e-300, mu2_max - bounds.mu2_min);
    const double p1_max = 1.0 - 2.0 * bounds.prob_min;
    level_u[2] = (c.prob[0] - bounds.prob_min) / std::max(1e-300, p1_max - bounds.prob_min);
    const double p2_max = 1.0 - c.prob[0] - bounds.prob_min;
    level_u[3] = (c.prob[1] - bounds.prob_min) / std::max(1e-300, p2_max - bounds.prob_min);
    for (int a = 0; a < 4; ++a) {
      lo[a] = std::clamp(level_u[a] - step[a], 0.0, 1.0);
      hi[a] = std::clamp(level_u[a] + step[a], 0.0, 1.0);
    }
  }
  if (!best.valid) throw Error(ErrorCode::EmptyFeasibleSet, "objective undefined everywhere");

  OptimizeResult result;
  result.best = best.config;
  result.r_per_pulse = best.rate;
  result.r_bps = bits_per_second(best.rate, rep_rate_mhz);
  result.evaluations = evaluations;
  const double mu2_span =
      std::max(bounds.mu2_min, bounds.mu2_max_fraction_of_mu1 * best.config.mu[0]) - bounds.mu2_min;
  result.resolution = {step[0] * (bounds.mu1_max - bounds.mu1_min), step[1] * mu2_span,
                       step[2] * (1.0 - 3.0 * bounds.prob_min),
                       step[3] * (1.0 - best.config.prob[0] - 2.0 * bounds.prob_min)};
  return result;
}

double analytic_key_rate(const DecoyConfig& decoy, const ChannelParams& channel) {
  KeyRateInput in;
  in.classes = detected_gain_qber(decoy, channel.system, channel.detector, channel.eta_ch,
                                  channel.y_b);
  in.decoy = decoy;
  in.f_ec = channel.system.f_ec;
  in.sifting_q = channel.system.sifting_factor();
  in.rep_rate_mhz = channel.system.rep_rate_mhz;
  in.e0 = channel.system.e0;
  return skr(in).r_per_pulse;
}

double signal_key_rate(const DecoyConfig& decoy, const ChannelParams& channel) {
  return decoy.prob[0] * analytic_key_rate(decoy, channel);
}

OptimizeResult optimize_intensities(const ChannelParams& channel, const IntensityBounds& bounds,
                                    unsigned threads) {
  channel.system.validate();
  channel.detector.validate();
  return optimize_intensities(
      [&channel](const DecoyConfig& d) { return signal_key_rate(d, channel); }, bounds,
      channel.system.rep_rate_mhz, threads);
}

}  // namespace qli
