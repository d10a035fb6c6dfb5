#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <vector>

namespace qli {

/// Piecewise-linear spontaneous Raman coefficient versus signed frequency
/// offset of the observed band from the pump (nu_quantum - nu_pump, GHz).
/// Negative offsets are the Stokes side.
class RamanTable {
 public:
  struct Point {
    double offset_ghz;
    double beta;
  };

  /// Throws Error{Domain} unless offsets are strictly increasing and
  /// beta >= 0, with at least two points.
  explicit RamanTable(std::vector<Point> points);

  /// Shape shipped with the library (41 points, relative units).
  static const RamanTable& builtin();

  /// Two-column text: offset_GHz beta. '#' starts a comment; commas are
  /// accepted as separators.
  static RamanTable parse(std::istream& in);
  static RamanTable load(const std::filesystem::path& path);

  /// Linear interpolation; Error{OutOfRange} outside the tabulated span.
  double lookup(double offset_ghz) const;

  /// Trapezoidal integral of beta over [from, to] (must lie inside the table).
  double integrate(double from_ghz, double to_ghz) const;

  std::span<const Point> points() const noexcept { return points_; }
  double min_offset() const noexcept { return points_.front().offset_ghz; }
  double max_offset() const noexcept { return points_.back().offset_ghz; }

 private:
  std::vector<Point> points_;
};

}  // namespace qli
