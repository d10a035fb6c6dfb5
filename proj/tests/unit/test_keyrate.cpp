#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qli/errors.hpp"
#include "qli/keyrate.hpp"

using namespace qli;

namespace {

KeyRateInput input_from(const oracle::PoissonChannel& ch, const DecoyConfig& decoy) {
  KeyRateInput in;
  for (std::size_t k = 0; k < kIntensityClasses; ++k) in.classes[k] = {ch.gain[k], ch.qber[k]};
  in.decoy = decoy;
  return in;
}

}  // namespace

TEST(BinaryEntropy, KnownValues) {
  EXPECT_EQ(h2(0.0), 0.0);
  EXPECT_EQ(h2(1.0), 0.0);
  EXPECT_DOUBLE_EQ(h2(0.5), 1.0);
  EXPECT_NEAR(h2(0.11), 0.4999, 1e-4);
  EXPECT_NEAR(h2(0.01), oracle::binary_entropy(0.01), 1e-15);
  EXPECT_THROW(h2(-0.1), Error);
  EXPECT_THROW(h2(1.1), Error);
}

TEST(BinaryEntropy, SymmetricAndConcave) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    EXPECT_NEAR(h2(a), h2(1.0 - a), 1e-12);
    EXPECT_GE(h2(0.5 * (a + b)), 0.5 * (h2(a) + h2(b)) - 1e-15);
  }
}

TEST(Bounds, NoiselessChannel) {
  const DecoyConfig d;
  const auto ch = oracle::poisson_channel(d.mu, 0.1, 0.0, 0.0);
  const auto y1 = y1_lower(ch.gain[0], ch.gain[1], d.mu[0], d.mu[1], 0.0);
  EXPECT_FALSE(y1.flagged);
  EXPECT_LE(y1.value, ch.y1);
  EXPECT_GT(y1.value, 0.9 * ch.y1);
  EXPECT_EQ(e1_upper(ch.qber[1], ch.gain[1], d.mu[1], 0.0, y1.value).value, 0.0);
}

TEST(Bounds, ForwardModelPoint) {
  const DecoyConfig d;
  const auto ch = oracle::poisson_channel(d.mu, 0.1, 6e-6, 0.01);
  KeyRateInput in = input_from(ch, d);
  const KeyRateOutput out = skr(in);
  EXPECT_LE(out.y0_lower, ch.y0);
  EXPECT_GE(out.y0_upper, ch.y0);
  EXPECT_LE(out.y1_lower, ch.y1);
  EXPECT_GE(out.e1_upper, ch.e1);
  EXPECT_GT(out.r_per_pulse, 0.0);
}

TEST(Bounds, UndefinedWhenYieldBoundVanishes) {
  EXPECT_THROW(e1_upper(0.01, 1e-3, 0.04, 6e-6, 0.0), Error);
  try {
    e1_upper(0.01, 1e-3, 0.04, 6e-6, -1.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedBound);
  }
  const auto y1 = y1_lower(1e-6, 1e-6, 0.85, 0.04, 1e-3);
  EXPECT_TRUE(y1.flagged);
  EXPECT_EQ(y1.value, 0.0);
}

TEST(Bounds, DomainChecks) {
  EXPECT_THROW(y1_lower(0.1, 0.1, 0.04, 0.85, 0.0), Error);
  EXPECT_THROW(vacuum_yield_bracket({0.1, 0.1}, {0.1, 0.1}, 0.001, 0.04), Error);
}

TEST(Bounds, VacuumBracketContainsTruth) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DecoyConfig d;
  for (int i = 0; i < 500; ++i) {
    const double eta = 1e-4 + 0.5 * u(rng);
    const double y0 = 1e-3 * u(rng);
    const auto ch = oracle::poisson_channel(d.mu, eta, y0, 0.05 * u(rng));
    const auto b = vacuum_yield_bracket({ch.gain[1], ch.qber[1]}, {ch.gain[2], ch.qber[2]}, d.mu[1], d.mu[2]);
    EXPECT_LE(b.lower, y0 * (1 + 1e-9) + 1e-18);
    EXPECT_GE(b.upper, y0 * (1 - 1e-9));
  }
}

TEST(Bounds, SafeForRandomIntensities) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int i = 0; i < 2000; ++i) {
    DecoyConfig d;
    d.mu[0] = 0.2 + 0.8 * u(rng);
    d.mu[1] = 0.01 + (0.5 * d.mu[0] - 0.01) * u(rng);
    d.mu[2] = 0.001 * u(rng);
    const auto ch = oracle::poisson_channel(d.mu, 1e-4 + 0.5 * u(rng), 1e-3 * u(rng), 0.05 * u(rng));
    const KeyRateOutput out = skr(input_from(ch, d));
    if (out.y1_lower > ch.y1 * (1 + 1e-12)) ++violations;
    if (!out.bound_undefined && out.e1_upper < ch.e1 * (1 - 1e-12)) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

// Taking Y0 = Q_mu3 overestimates Y0; in the error bound Y0 is subtracted,
// so that shortcut can push e1 below its true value.
TEST(Bounds, NearVacuumGainAsY0IsUnsafeForErrorBound) {
  const DecoyConfig d;
  const auto ch = oracle::poisson_channel(d.mu, 0.1, 6e-6, 0.0);
  const auto y1 = y1_lower(ch.gain[0], ch.gain[1], d.mu[0], d.mu[1], ch.gain[2]);
  const double naive = e1_upper(ch.qber[1], ch.gain[1], d.mu[1], ch.gain[2], y1.value).value;
  EXPECT_LT(naive, ch.e1);
  EXPECT_GE(skr(input_from(ch, d)).e1_upper, ch.e1);
}

TEST(KeyRate, PublishedRatePairs) {
  const double pairs[][2] = {{1.58e-3, 39500}, {2.54e-4, 6350}, {5.1e-6, 128},
                             {7.19e-4, 18000}, {2.56e-5, 640}, {2.45e-6, 61.4}};
  for (const auto& p : pairs) {
    EXPECT_NEAR(bits_per_second(p[0], 25.0) / p[1], 1.0, 0.01) << p[1];
  }
}

TEST(KeyRate, BitsPerSecondIsExactProduct) {
  const DecoyConfig d;
  const auto ch = oracle::poisson_channel(d.mu, 0.01, 6e-6, 0.01);
  KeyRateInput in = input_from(ch, d);
  in.rep_rate_mhz = 25.0;
  const auto out = skr(in);
  EXPECT_EQ(out.r_bps, out.r_per_pulse * 25.0 * 1e6);
}

TEST(KeyRate, MatchesFormula) {
  const DecoyConfig d;
  const auto ch = oracle::poisson_channel(d.mu, 0.02, 6e-6, 0.01);
  const auto out = skr(input_from(ch, d));
  const double expect =
      0.5 * (-ch.gain[0] * 1.2 * oracle::binary_entropy(ch.qber[0]) +
             out.q1_lower * (1.0 - oracle::binary_entropy(out.e1_upper)));
  EXPECT_NEAR(out.r_per_pulse, expect, 1e-15);
  EXPECT_NEAR(out.q1_lower, out.y1_lower * d.mu[0] * std::exp(-d.mu[0]), 1e-18);
}

TEST(KeyRate, ClampsAtZero) {
  const DecoyConfig d;
  auto ch = oracle::poisson_channel(d.mu, 0.02, 6e-6, 0.01);
  KeyRateInput in = input_from(ch, d);
  in.classes[0].qber = 0.3;
  const auto out = skr(in);
  EXPECT_EQ(out.r_per_pulse, 0.0);
  EXPECT_EQ(out.r_bps, 0.0);
}

TEST(KeyRate, ZeroWhenErrorBoundSaturates) {
  const DecoyConfig d;
  const auto ch = oracle::poisson_channel(d.mu, 1e-5, 5e-4, 0.05);
  const auto out = skr(input_from(ch, d));
  EXPECT_TRUE(out.e1_flagged || out.bound_undefined);
  EXPECT_EQ(out.r_per_pulse, 0.0);
}

TEST(KeyRate, NeverNegative) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DecoyConfig d;
  for (int i = 0; i < 500; ++i) {
    const auto ch = oracle::poisson_channel(d.mu, 1e-5 + 0.5 * u(rng), 1e-2 * u(rng), 0.2 * u(rng));
    const auto out = skr(input_from(ch, d));
    EXPECT_GE(out.r_per_pulse, 0.0);
    if (out.e1_upper >= 0.5) EXPECT_EQ(out.r_per_pulse, 0.0);
  }
}

TEST(KeyRate, RejectsBadInput) {
  const DecoyConfig d;
  auto ch = oracle::poisson_channel(d.mu, 0.02, 6e-6, 0.01);
  KeyRateInput in = input_from(ch, d);
  in.f_ec = 0.9;
  EXPECT_THROW(skr(in), Error);
  in = input_from(ch, d);
  in.classes[1].gain = 1.5;
  EXPECT_THROW(skr(in), Error);
}
