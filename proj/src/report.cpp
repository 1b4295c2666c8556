#include "robsel/report.hpp"

#include <cmath>
#include <cstdio>

#include "robsel/error.hpp"
#include "robsel/manifest.hpp"
#include "robsel/seg_eval.hpp"

namespace robsel {

using nlohmann::json;

namespace {

json selection_json(const SelectionResult& s) {
  return json{{"id", s.chosen_id}, {"index", s.chosen_index}, {"evaluated_count", s.evaluated_count}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Report make_report(CheckpointSeries series, const RobustnessConfig& cfg, std::uint64_t seed) {
  series.validate();
  Report r;
  r.config = cfg;
  r.seed = seed;
  r.series = std::move(series);
  r.offline = select_offline(r.series);
  r.online = select_online(r.series);
  if (r.series.has_downstream()) {
    const auto down = r.series.downstream();
    const auto rob = r.series.robustness();
    double best = down.front();
    for (double d : down) best = std::max(best, d);
    TisSummary t;
    t.indicator = tis(down, rob);
    t.offline = down[r.offline.chosen_index] / best;
    t.online = down[r.online.chosen_index] / best;
    r.tis = t;
    r.worst_best_ratio = robsel::worst_best_ratio(down);
    if (down.size() >= 2) {
      try {
        r.spearman_robustness_downstream = spearman(rob, down);
      } catch (const Error& e) {
        if (e.category() != ErrorCategory::DegenerateInput) throw;
      }
    }
  }
  return r;
}

json report_to_json(const Report& r) {
  json cfg = config_to_json(r.config);
  cfg["seed"] = r.seed;
  json rows = json::array();
  for (const auto& e : r.series.entries) {
    rows.push_back(json{{"id", e.id},
                        {"epoch", e.epoch},
                        {"random_init", e.random_init},
                        {"robustness", e.robustness},
                        {"downstream", optional_number(e.downstream)}});
  }
  json tis_json = nullptr;
  if (r.tis) tis_json = json{{"indicator", r.tis->indicator}, {"offline", r.tis->offline}, {"online", r.tis->online}};
  return json{{"schema", kReportSchema},
              {"config", cfg},
              {"checkpoints", rows},
              {"selection", {{"offline", selection_json(r.offline)}, {"online", selection_json(r.online)}}},
              {"tis", tis_json},
              {"worst_best_ratio", optional_number(r.worst_best_ratio)},
              {"spearman_robustness_downstream", optional_number(r.spearman_robustness_downstream)}};
}

Report report_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("schema", std::string()) != kReportSchema) {
      fail(ErrorCategory::FileFormat, std::string("not a ") + kReportSchema + " document");
    }
    const json& cfg = j.at("config");
    const RobustnessConfig config = config_from_json(cfg);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    CheckpointSeries series;
    for (const json& row : j.at("checkpoints")) {
      CheckpointEntry e;
      e.id = row.at("id").get<std::string>();
      e.epoch = row.at("epoch").get<int>();
      e.random_init = row.value("random_init", false);
      e.robustness = row.at("robustness").get<double>();
      if (row.contains("downstream") && !row.at("downstream").is_null()) {
        e.downstream = row.at("downstream").get<double>();
      }
      series.entries.push_back(std::move(e));
    }
    return make_report(std::move(series), config, seed);
  } catch (const json::exception& e) {
    fail(ErrorCategory::FileFormat, std::string("malformed report: ") + e.what());
  }
}

std::string report_to_csv(const Report& r) {
  std::string out = "id,epoch,random_init,robustness,downstream\n";
  for (const auto& e : r.series.entries) {
    out += e.id + "," + std::to_string(e.epoch) + "," + (e.random_init ? "1" : "0") + "," +
           format_number(e.robustness) + "," + (e.downstream ? format_number(*e.downstream) : "") + "\n";
  }
  return out;
}

}  // namespace robsel
