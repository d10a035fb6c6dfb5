#include <gtest/gtest.h>

#include <cmath>

#include "qli/errors.hpp"
#include "qli/qkd_channel.hpp"

using namespace qli;

TEST(Background, AddsDarkAndRaman) {
  DetectorSpec d;
  EXPECT_DOUBLE_EQ(effective_background(d, 0.0), 6e-6);
  EXPECT_DOUBLE_EQ(effective_background(d, 6e-6), 1.2e-5);
}

TEST(Background, BreakdownAtOne) {
  DetectorSpec d;
  d.dark_yield = 0.5;
  try {
    effective_background(d, 0.6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModelBreakdown);
  }
}

TEST(GainQber, ClosedForm) {
  const double eta = 0.2 * std::pow(10.0, -0.4);
  const GainQber g = gain_qber_analytic(0.85, eta, 6e-6, 0.01);
  const double signal = 1.0 - std::exp(-eta * 0.85);
  EXPECT_NEAR(g.gain, 6e-6 + signal, 1e-15);
  EXPECT_NEAR(g.qber, (0.5 * 6e-6 + 0.01 * signal) / (6e-6 + signal), 1e-15);
}

TEST(GainQber, VacuumAndDarkLimits) {
  const GainQber vacuum = gain_qber_analytic(0.0, 0.5, 6e-6, 0.01);
  EXPECT_DOUBLE_EQ(vacuum.gain, 6e-6);
  EXPECT_DOUBLE_EQ(vacuum.qber, 0.5);
  const GainQber clean = gain_qber_analytic(0.85, 0.1, 0.0, 0.0);
  EXPECT_EQ(clean.qber, 0.0);
  const GainQber dark = gain_qber_analytic(0.0, 0.1, 0.0, 0.01);
  EXPECT_EQ(dark.gain, 0.0);
}

TEST(GainQber, SmallEtaMuStaysAccurate) {
  const GainQber g = gain_qber_analytic(1e-3, 1e-10, 0.0, 0.0);
  EXPECT_NEAR(g.gain / 1e-13, 1.0, 1e-9);
}

TEST(GainQber, DomainChecks) {
  EXPECT_THROW(gain_qber_analytic(-0.1, 0.1, 0.0, 0.0), Error);
  EXPECT_THROW(gain_qber_analytic(0.1, 1.1, 0.0, 0.0), Error);
  EXPECT_THROW(gain_qber_analytic(0.1, 0.1, 1.0, 0.0), Error);
  EXPECT_THROW(gain_qber_analytic(0.1, 0.1, 0.0, 1.5), Error);
}

TEST(GainQber, QberIncreasesWithBackground) {
  double prev = 0.0;
  for (double y = 0.0; y < 1e-2; y += 1e-4) {
    const double e = gain_qber_analytic(0.85, 1e-3, y, 0.01).qber;
    EXPECT_GT(e, prev);
    prev = e;
  }
}

TEST(DeadTime, SlotCount) {
  EXPECT_EQ(dead_slots(DetectorSpec{}, SystemSpec{}), 250);
  DetectorSpec d;
  d.dead_time_us = 0.0;
  EXPECT_EQ(dead_slots(d, SystemSpec{}), 0);
  d.dead_time_us = 0.01;  // a quarter slot still blocks the next one
  EXPECT_EQ(dead_slots(d, SystemSpec{}), 1);
}

TEST(DeadTime, LiveFractionLimits) {
  const DecoyConfig decoy;
  DetectorSpec d;
  EXPECT_DOUBLE_EQ(dead_time_live_fraction(decoy, SystemSpec{}, d, 0.0, 0.0), 1.0);
  const double near = dead_time_live_fraction(decoy, SystemSpec{}, d, 1e-6, 6e-6);
  EXPECT_GT(near, 0.99);
  const double busy = dead_time_live_fraction(decoy, SystemSpec{}, d, 0.5, 6e-6);
  EXPECT_LT(busy, 0.25);
  d.dead_time_us = 0.0;
  EXPECT_DOUBLE_EQ(dead_time_live_fraction(decoy, SystemSpec{}, d, 0.5, 6e-6), 1.0);
}

TEST(DeadTime, SingleDetectorRenewalFormula) {
  // Background only: every detector clicks with y/4 per slot.
  const DecoyConfig decoy;
  const double y = 4e-3;
  const double live = dead_time_live_fraction(decoy, SystemSpec{}, DetectorSpec{}, 0.0, y);
  EXPECT_NEAR(live, 1.0 / (1.0 + 250.0 * y / 4.0), 1e-12);
}

TEST(DeadTime, ScalesGainsNotQber) {
  const DecoyConfig decoy;
  const double eta_ch = std::pow(10.0, -0.7);
  const auto with = detected_gain_qber(decoy, SystemSpec{}, DetectorSpec{}, eta_ch, 6e-6);
  const double live = dead_time_live_fraction(decoy, SystemSpec{}, DetectorSpec{}, eta_ch, 6e-6);
  for (std::size_t k = 0; k < kIntensityClasses; ++k) {
    const GainQber raw = gain_qber_analytic(decoy.mu[k], eta_ch * 0.2, 6e-6, 0.01);
    EXPECT_NEAR(with[k].gain, raw.gain * live, 1e-18);
    EXPECT_DOUBLE_EQ(with[k].qber, raw.qber);
  }
}

TEST(Specs, Validation) {
  DecoyConfig bad;
  bad.mu = {0.04, 0.85, 0.001};
  EXPECT_THROW(bad.validate(), Error);
  bad = DecoyConfig{};
  bad.prob = {0.9, 0.05, 0.06};
  EXPECT_THROW(bad.validate(), Error);
  DetectorSpec d;
  d.detector_count = 2;
  EXPECT_THROW(d.validate(), Error);
  d = DetectorSpec{};
  d.efficiency = 0.0;
  EXPECT_THROW(d.validate(), Error);
  SystemSpec s;
  s.f_ec = 0.9;
  EXPECT_THROW(s.validate(), Error);
}

TEST(Sifting, BiasedBasis) {
  SystemSpec s;
  EXPECT_DOUBLE_EQ(s.sifting_factor(), 0.5);
  s.basis_prob_x = 0.94;
  EXPECT_NEAR(s.basis_match_prob(), 0.94 * 0.94 + 0.06 * 0.06, 1e-15);
  s.sifting_q = 0.5;
  EXPECT_DOUBLE_EQ(s.sifting_factor(), 0.5);
}

TEST(Sift, EstimatesFromCounts) {
  TallyCounts t;
  t.classes[0] = {1000000, 5000, 50};
  t.classes[1] = {50000, 20, 1};
  t.classes[2] = {50000, 0, 0};
  const auto est = sift(t, SystemSpec{});
  EXPECT_DOUBLE_EQ(est[0].gain, 5000.0 / (1e6 * 0.5));
  EXPECT_DOUBLE_EQ(*est[0].qber, 0.01);
  EXPECT_GT(est[0].gain_half_width, 0.0);
  EXPECT_FALSE(est[2].qber.has_value());
}

TEST(Sift, ClipsHighQber) {
  TallyCounts t;
  t.classes[0] = {100, 10, 8};
  const auto est = sift(t, SystemSpec{});
  EXPECT_EQ(*est[0].qber, 0.5);
  EXPECT_TRUE(est[0].qber_clipped);
}

TEST(Sift, RejectsInconsistentTally) {
  TallyCounts t;
  t.classes[0] = {10, 5, 6};
  EXPECT_FALSE(t.is_consistent());
  EXPECT_THROW(sift(t, SystemSpec{}), Error);
}

TEST(Tally, Accumulates) {
  TallyCounts a;
  a.classes[0] = {10, 2, 1};
  a.raw_clicks = 3;
  TallyCounts b = a;
  b += a;
  EXPECT_EQ(b.classes[0].pulses_sent, 20u);
  EXPECT_EQ(b.raw_clicks, 6u);
}
