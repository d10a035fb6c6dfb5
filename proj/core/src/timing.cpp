#include "qli/timing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "qli/errors.hpp"

namespace qli {
namespace {

constexpr double kTimeEps = 1e-12;

void check_plan_fields(const FramePlan& plan) {
  if (!(plan.period_ns > 0.0)) throw Error(ErrorCode::InvalidPlan, "period must be > 0");
  if (!(plan.gate_width_ns > 0.0)) throw Error(ErrorCode::InvalidPlan, "gate width must be > 0");
  if (!(plan.qkd_pulse_width_ps >= 0.0) || plan.qkd_pulse_width_ps > plan.gate_width_ns * 1e3) {
    throw Error(ErrorCode::InvalidPlan, "QKD pulse must fit inside the gate");
  }
  if (!std::isfinite(plan.gate_center_offset_ns)) {
    throw Error(ErrorCode::InvalidPlan, "gate offset must be finite");
  }
}

}  // namespace

void FramePlan::validate() const {
  check_plan_fields(*this);
  if (!(gap_width_ns > 0.0 && gap_width_ns < period_ns)) {
    throw Error(ErrorCode::InvalidPlan, "gap width must satisfy 0 < gap < period");
  }
  if (gate_width_ns > gap_width_ns) {
    throw Error(ErrorCode::InvalidPlan, "gate must not be wider than the gap");
  }
}

NoiseProfile::NoiseProfile(double period_ns, std::vector<Point> points)
    : period_ns_(period_ns), points_(std::move(points)) {
  if (!(period_ns_ > 0.0)) throw Error(ErrorCode::InvalidPlan, "profile period must be > 0");
  if (points_.size() < 2 || points_.front().t_ns != 0.0 || points_.back().t_ns != period_ns_) {
    throw Error(ErrorCode::InvalidPlan, "profile must span exactly [0, period]");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].value >= 0.0)) throw Error(ErrorCode::InvalidPlan, "profile intensity must be >= 0");
    if (i > 0 && points_[i].t_ns < points_[i - 1].t_ns) {
      throw Error(ErrorCode::InvalidPlan, "profile times must be non-decreasing");
    }
  }
  mass_ = cumulative(period_ns_);
}

double NoiseProfile::cumulative(double t) const {
  double total = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const Point& a = points_[i - 1];
    const Point& b = points_[i];
    if (a.t_ns >= t) break;
    if (b.t_ns <= t) {
      total += 0.5 * (a.value + b.value) * (b.t_ns - a.t_ns);
    } else {
      const double vt = a.value + (b.value - a.value) * (t - a.t_ns) / (b.t_ns - a.t_ns);
      total += 0.5 * (a.value + vt) * (t - a.t_ns);
      break;
    }
  }
  return total;
}

double NoiseProfile::integral(double a, double b) const {
  auto extended = [this](double t) {
    const double k = std::floor(t / period_ns_);
    double r = t - k * period_ns_;
    r = std::clamp(r, 0.0, period_ns_);
    return k * mass_ + cumulative(r);
  };
  return extended(b) - extended(a);
}

double NoiseProfile::value_at(double t) const {
  double r = std::fmod(t, period_ns_);
  if (r < 0.0) r += period_ns_;
  // Last segment whose start is <= r, so steps read right-continuous.
  std::size_t seg = 0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (points_[i].t_ns <= r) seg = i;
  }
  const Point& a = points_[seg];
  const Point& b = points_[seg + 1];
  if (b.t_ns - a.t_ns <= 0.0) return b.value;
  return a.value + (b.value - a.value) * (r - a.t_ns) / (b.t_ns - a.t_ns);
}

bool NoiseProfile::is_piecewise_constant() const {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].t_ns > points_[i - 1].t_ns && points_[i].value != points_[i - 1].value) {
      return false;
    }
  }
  return true;
}

NoiseProfile carve_pattern(const FramePlan& plan) {
  check_plan_fields(plan);
  if (plan.gap_width_ns == 0.0) {
    return NoiseProfile(plan.period_ns, {{0.0, 1.0}, {plan.period_ns, 1.0}});
  }
  if (!(plan.gap_width_ns > 0.0 && plan.gap_width_ns < plan.period_ns)) {
    throw Error(ErrorCode::InvalidPlan, "gap width must satisfy 0 <= gap < period");
  }
  const double g = plan.gap_width_ns;
  return NoiseProfile(plan.period_ns,
                      {{0.0, 0.0}, {g, 0.0}, {g, 1.0}, {plan.period_ns, 1.0}});
}

NoiseProfile spread_profile(const NoiseProfile& pattern, double walk_off_ns) {
  if (!(walk_off_ns >= 0.0)) throw Error(ErrorCode::Domain, "walk-off must be >= 0");
  if (!pattern.is_piecewise_constant()) {
    throw Error(ErrorCode::Domain, "spread_profile expects a step pattern");
  }
  if (walk_off_ns == 0.0) return pattern;

  const double period = pattern.period_ns();
  const auto& pts = pattern.points();

  // Step locations, including the implicit one at the period boundary.
  std::vector<double> edges;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].t_ns == pts[i - 1].t_ns && pts[i].value != pts[i - 1].value) {
      edges.push_back(pts[i].t_ns);
    }
  }
  if (pts.front().value != pts.back().value) edges.push_back(0.0);

  std::vector<double> times{0.0, period};
  for (double e : edges) {
    times.push_back(std::fmod(e, period));
    times.push_back(std::fmod(e + walk_off_ns, period));
  }
  std::sort(times.begin(), times.end());
  std::vector<double> uniq;
  for (double t : times) {
    if (uniq.empty() || t - uniq.back() > kTimeEps) uniq.push_back(t);
  }
  uniq.back() = period;
  if (uniq.front() != 0.0) uniq.insert(uniq.begin(), 0.0);

  // Causal moving average: g(t) = (1/w) * integral of f over [t - w, t].
  std::vector<NoiseProfile::Point> out;
  out.reserve(uniq.size());
  for (double t : uniq) {
    const double v = pattern.integral(t - walk_off_ns, t) / walk_off_ns;
    out.push_back({t, std::max(0.0, v)});
  }
  // The average is continuous, so both ends of the period agree.
  out.back().value = out.front().value;
  return NoiseProfile(period, std::move(out));
}

double window_fraction(const NoiseProfile& profile, double start_ns, double end_ns) {
  if (profile.mass() <= 0.0) return 0.0;
  const double f = profile.integral(start_ns, end_ns) / profile.mass();
  return std::clamp(f, 0.0, 1.0);
}

double in_window_fraction(const NoiseProfile& profile, const FramePlan& plan) {
  if (std::abs(profile.period_ns() - plan.period_ns) > 1e-9) {
    throw Error(ErrorCode::InvalidPlan, "profile and frame plan periods differ");
  }
  return window_fraction(profile, plan.gate_start_ns(), plan.gate_end_ns());
}

double min_gap_width(double walk_off_ns, double gate_ns, double guard_ns) {
  if (!(walk_off_ns >= 0.0) || !(gate_ns >= 0.0) || !(guard_ns >= 0.0)) {
    throw Error(ErrorCode::Domain, "gap sizing inputs must be non-negative");
  }
  return gate_ns + 2.0 * guard_ns + 2.0 * walk_off_ns;
}

bool PlanReport::all_feasible() const {
  return std::all_of(channels.begin(), channels.end(),
                     [](const ChannelFeasibility& c) { return c.feasible; });
}

PlanReport validate_plan(const FramePlan& plan, const ChannelPlan& channels,
                         const FiberSpec& fiber, double guard_ns) {
  plan.validate();
  fiber.validate();
  channels.validate();
  if (!(guard_ns >= 0.0)) throw Error(ErrorCode::Domain, "guard must be >= 0");

  const double lambda_q = channel_wavelength_nm(channels.quantum);
  const NoiseProfile pattern = carve_pattern(plan);

  PlanReport report;
  for (const ClassicalChannel& c : channels.classical) {
    ChannelFeasibility row{c.channel};
    row.walk_off_ns = walk_off_delay_ps(fiber, channel_wavelength_nm(c.channel), lambda_q) * 1e-3;
    row.required_gap_ns = min_gap_width(row.walk_off_ns, plan.gate_width_ns, guard_ns);
    row.period_limited = row.required_gap_ns >= plan.period_ns;
    // Noise leaks into the gap over [0, walk_off]; the gate plus guards must
    // stay on [walk_off, gap].
    row.feasible = plan.gate_start_ns() - guard_ns >= row.walk_off_ns - kTimeEps &&
                   plan.gate_end_ns() + guard_ns <= plan.gap_width_ns + kTimeEps;
    row.in_window_fraction = in_window_fraction(spread_profile(pattern, row.walk_off_ns), plan);
    report.channels.push_back(row);
  }
  return report;
}

void write_profile_csv(const NoiseProfile& profile, double resolution_ns, std::ostream& out) {
  if (!(resolution_ns > 0.0)) throw Error(ErrorCode::Domain, "resolution must be > 0");
  out << "time_ns,intensity\n";
  const auto n = static_cast<long>(std::floor(profile.period_ns() / resolution_ns + 1e-9));
  char buf[64];
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * resolution_ns;
    std::snprintf(buf, sizeof buf, "%.6f,%.9g\n", t, profile.value_at(t));
    out << buf;
  }
}

}  // namespace qli
