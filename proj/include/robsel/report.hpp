#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "robsel/robustness.hpp"
#include "robsel/selection.hpp"

namespace robsel {

inline constexpr const char* kReportSchema = "robsel.report/1";

struct TisSummary {
  double indicator = 0.0;  ///< argmax over every row, random init included
  double offline = 0.0;
  double online = 0.0;
};

/// Per-checkpoint robustness plus everything derived from it. Optional
/// fields are present only when every row carries a downstream score.
struct Report {
  RobustnessConfig config;
  std::uint64_t seed = 0;
  CheckpointSeries series;
  SelectionResult offline;
  SelectionResult online;
  std::optional<TisSummary> tis;
  std::optional<double> worst_best_ratio;
  /// Informational; absent when either series is constant.
  std::optional<double> spearman_robustness_downstream;
};

Report make_report(CheckpointSeries series, const RobustnessConfig& cfg, std::uint64_t seed);

nlohmann::json report_to_json(const Report& r);
/// Rebuilds a report from its rows; derived fields are recomputed.
Report report_from_json(const nlohmann::json& j);

/// One row per checkpoint: id,epoch,random_init,robustness,downstream.
std::string report_to_csv(const Report& r);

/// Fixed-format number for CSV output (17 significant digits).
std::string format_number(double v);

}  // namespace robsel
