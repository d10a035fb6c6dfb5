#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "qli/calibrate.hpp"
#include "qli/optimize.hpp"
#include "qli/scenario.hpp"

namespace qli {

/// Library version baked in at build time.
std::string_view version();

/// Pretty-printed JSON records, keys in a fixed order so identical inputs
/// give byte-identical text.
std::string result_json(const ScenarioResult& result);
std::string plan_json(const Scenario& scenario, const PlanReport& report);
std::string optimize_json(const OptimizeResult& result);
std::string calibration_json(const AnchorSet& anchors, const CalibrationResult& result);

inline constexpr std::string_view kSweepSchema = "qli.sweep/1";

/// Schema comment, header row, then one row per SweepRow.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

}  // namespace qli
