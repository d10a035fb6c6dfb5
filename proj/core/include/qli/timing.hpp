#pragma once

#include <iosfwd>
#include <vector>

#include "qli/channel_plan.hpp"
#include "qli/fiber.hpp"

namespace qli {

/// Frame/gap/gate geometry of one interleaving period. The gap opens at
/// t = 0 of every period; the gate is centred in the gap unless offset.
struct FramePlan {
  double period_ns = 40.0;
  double gap_width_ns = 15.0;
  double qkd_pulse_width_ps = 200.0;
  double gate_width_ns = 4.0;
  double gate_center_offset_ns = 0.0;

  /// Throws Error{InvalidPlan}: requires 0 < gap < period,
  /// gate <= gap and pulse <= gate.
  void validate() const;

  double gate_start_ns() const { return 0.5 * gap_width_ns + gate_center_offset_ns - 0.5 * gate_width_ns; }
  double gate_end_ns() const { return gate_start_ns() + gate_width_ns; }
};

/// Periodic piecewise-linear intensity over [0, period]. Consecutive points
/// with equal time encode a step; the first point sits at 0 and the last at
/// period.
class NoiseProfile {
 public:
  struct Point {
    double t_ns;
    double value;
  };

  NoiseProfile(double period_ns, std::vector<Point> points);

  double period_ns() const noexcept { return period_ns_; }
  const std::vector<Point>& points() const noexcept { return points_; }

  /// Right-continuous evaluation, periodic in t.
  double value_at(double t_ns) const;
  /// Integral over one period.
  double mass() const noexcept { return mass_; }
  double mean() const noexcept { return mass_ / period_ns_; }
  /// Integral over [a, b] for any real a <= b, using periodic extension.
  double integral(double a_ns, double b_ns) const;
  /// True when every segment is flat (a step pattern).
  bool is_piecewise_constant() const;

 private:
  double cumulative(double t_ns) const;  // integral over [0, t], t in [0, period]

  double period_ns_;
  std::vector<Point> points_;
  double mass_ = 0.0;
};

/// Rectangular classical pattern: 0 inside the gap, 1 elsewhere. A zero
/// gap width yields the constant-1 pattern.
NoiseProfile carve_pattern(const FramePlan& plan);

/// Convolves a step pattern with a uniform kernel on [0, walk_off]. Each
/// step becomes a linear ramp of exactly walk_off; the period mean is kept.
NoiseProfile spread_profile(const NoiseProfile& pattern, double walk_off_ns);

/// Share of one period's noise energy that falls inside the detector gate.
double in_window_fraction(const NoiseProfile& profile, const FramePlan& plan);
double window_fraction(const NoiseProfile& profile, double start_ns, double end_ns);

/// Smallest gap keeping a centred gate on the noise-free floor with a guard
/// margin on each side.
double min_gap_width(double walk_off_ns, double gate_ns, double guard_ns);

struct ChannelFeasibility {
  ItuChannel channel;
  double walk_off_ns = 0.0;
  double required_gap_ns = 0.0;
  bool feasible = true;
  /// Required gap does not fit inside one period at all.
  bool period_limited = false;
  double in_window_fraction = 0.0;
};

struct PlanReport {
  std::vector<ChannelFeasibility> channels;
  bool all_feasible() const;
};

PlanReport validate_plan(const FramePlan& plan, const ChannelPlan& channels,
                         const FiberSpec& fiber, double guard_ns = 0.0);

/// Two-column CSV (time_ns,intensity) sampled every resolution_ns.
void write_profile_csv(const NoiseProfile& profile, double resolution_ns, std::ostream& out);

}  // namespace qli
