#include "qli/raman_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "qli/errors.hpp"

namespace qli {
namespace {

// Mirrors core/data/raman_default.txt. Dips sit 200-300 GHz either side of
// the pump; the anti-Stokes half is the Stokes half scaled by
// exp(-offset / 6250 GHz).
const RamanTable::Point kBuiltin[] = {
    {-4000.0, 1.66},   {-3500.0, 1.56},   {-3000.0, 1.46},   {-2500.0, 1.36},
    {-2000.0, 1.25},   {-1500.0, 1.14},   {-1200.0, 1.06},   {-1000.0, 1.0},
    {-800.0, 0.9},     {-600.0, 0.8},     {-500.0, 0.72},    {-400.0, 0.6},
    {-300.0, 0.45},    {-250.0, 0.4},     {-200.0, 0.45},    {-150.0, 0.7},
    {-100.0, 1.2},     {-50.0, 1.9},      {-25.0, 2.4},      {-10.0, 2.8},
    {0.0, 3.0},        {10.0, 2.796},     {25.0, 2.39},      {50.0, 1.885},
    {100.0, 1.181},    {150.0, 0.6834},   {200.0, 0.4358},   {250.0, 0.3843},
    {300.0, 0.4289},   {400.0, 0.5628},   {500.0, 0.6646},   {600.0, 0.7268},
    {800.0, 0.7919},   {1000.0, 0.8521},  {1200.0, 0.8748},  {1500.0, 0.8968},
    {2000.0, 0.9077},  {2500.0, 0.9116},  {3000.0, 0.9034},  {3500.0, 0.8911},
    {4000.0, 0.8753},
};

}  // namespace

RamanTable::RamanTable(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorCode::Domain, "Raman table needs at least two points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].beta >= 0.0) || !std::isfinite(points_[i].offset_ghz)) {
      throw Error(ErrorCode::Domain, "Raman table beta must be non-negative");
    }
    if (i > 0 && !(points_[i].offset_ghz > points_[i - 1].offset_ghz)) {
      throw Error(ErrorCode::Domain, "Raman table offsets must be strictly increasing");
    }
  }
}

const RamanTable& RamanTable::builtin() {
  static const RamanTable table(std::vector<Point>(std::begin(kBuiltin), std::end(kBuiltin)));
  return table;
}

RamanTable RamanTable::parse(std::istream& in) {
  std::vector<Point> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double offset = 0.0;
    double beta = 0.0;
    if (!(fields >> offset)) continue;  // blank or comment-only
    std::string extra;
    if (!(fields >> beta) || (fields >> extra)) {
      throw Error(ErrorCode::InvalidConfig,
                  "Raman table line " + std::to_string(line_no) + ": expected two columns");
    }
    points.push_back({offset, beta});
  }
  return RamanTable(std::move(points));
}

RamanTable RamanTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidConfig, "cannot open Raman table " + path.string());
  }
  return parse(in);
}

double RamanTable::lookup(double offset_ghz) const {
  if (offset_ghz < min_offset() || offset_ghz > max_offset() || std::isnan(offset_ghz)) {
    throw Error(ErrorCode::OutOfRange, "offset " + std::to_string(offset_ghz) +
                                           " GHz outside Raman table range");
  }
  auto hi = std::lower_bound(points_.begin(), points_.end(), offset_ghz,
                             [](const Point& p, double x) { return p.offset_ghz < x; });
  if (hi->offset_ghz == offset_ghz) return hi->beta;
  auto lo = hi - 1;
  const double t = (offset_ghz - lo->offset_ghz) / (hi->offset_ghz - lo->offset_ghz);
  return lo->beta + t * (hi->beta - lo->beta);
}

double RamanTable::integrate(double from_ghz, double to_ghz) const {
  if (from_ghz > to_ghz) return -integrate(to_ghz, from_ghz);
  // Endpoints plus every interior node, trapezoid per segment (exact).
  std::vector<double> xs{from_ghz};
  for (const Point& p : points_) {
    if (p.offset_ghz > from_ghz && p.offset_ghz < to_ghz) xs.push_back(p.offset_ghz);
  }
  xs.push_back(to_ghz);
  double total = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    total += 0.5 * (lookup(xs[i - 1]) + lookup(xs[i])) * (xs[i] - xs[i - 1]);
  }
  return total;
}

}  // namespace qli
