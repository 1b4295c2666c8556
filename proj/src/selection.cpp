#include "robsel/selection.hpp"

#include <algorithm>
#include <cmath>

#include "robsel/error.hpp"

namespace robsel {

void CheckpointSeries::validate() const {
  std::size_t random_count = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (i > 0 && e.epoch <= entries[i - 1].epoch) {
      fail(ErrorCategory::InvalidArgument, "checkpoint epochs must strictly increase (at '" + e.id + "')");
    }
    if (e.random_init) ++random_count;
    if (!std::isfinite(e.robustness)) {
      fail(ErrorCategory::DegenerateInput, "non-finite robustness for '" + e.id + "'");
    }
  }
  if (random_count > 1) fail(ErrorCategory::InvalidArgument, "at most one random-init checkpoint");
}

bool CheckpointSeries::has_downstream() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.downstream.has_value(); });
}

std::vector<double> CheckpointSeries::robustness() const {
  std::vector<double> out;
  for (const auto& e : entries) out.push_back(e.robustness);
  return out;
}

std::vector<double> CheckpointSeries::downstream() const {
  std::vector<double> out;
  for (const auto& e : entries) out.push_back(e.downstream.value_or(0.0));
  return out;
}

std::string_view to_string(SelectionMode mode) noexcept {
  return mode == SelectionMode::Offline ? "offline" : "online";
}

SelectionMode parse_selection_mode(std::string_view name) {
  if (name == "offline") return SelectionMode::Offline;
  if (name == "online") return SelectionMode::Online;
  fail(ErrorCategory::InvalidArgument, "unknown selection mode '" + std::string(name) + "'");
}

std::size_t first_argmax(std::span<const double> values) {
  if (values.empty()) fail(ErrorCategory::InvalidArgument, "argmax of an empty list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double tis(std::span<const double> downstream, std::span<const double> indicator) {
  if (downstream.empty() || indicator.empty()) fail(ErrorCategory::InvalidArgument, "TIS of an empty list");
  if (downstream.size() != indicator.size()) {
    fail(ErrorCategory::DimensionMismatch, "downstream and indicator lengths differ");
  }
  for (double d : downstream) {
    if (!(d > 0.0)) fail(ErrorCategory::InvalidArgument, "downstream scores must be positive");
  }
  const double best = *std::max_element(downstream.begin(), downstream.end());
  return downstream[first_argmax(indicator)] / best;
}

SelectionResult select_offline(const CheckpointSeries& series, bool include_random_init) {
  series.validate();
  SelectionResult r;
  r.mode = SelectionMode::Offline;
  r.evaluated_count = series.entries.size();
  bool found = false;
  for (std::size_t i = 0; i < series.entries.size(); ++i) {
    const auto& e = series.entries[i];
    if (e.random_init && !include_random_init) continue;
    if (!found || e.robustness > series.entries[r.chosen_index].robustness) {
      r.chosen_index = i;
      found = true;
    }
  }
  if (!found) fail(ErrorCategory::InvalidArgument, "no eligible checkpoint for selection");
  r.chosen_id = series.entries[r.chosen_index].id;
  return r;
}

bool OnlineSelector::push(double robustness) {
  if (stopped_) return true;
  switch (policy_) {
    case OnlinePolicy::FirstDecrease:
      if (consumed_ > 0 && robustness < previous_) {
        stopped_ = true;
      } else if (consumed_ > 0 && robustness > previous_) {
        plateau_start_ = consumed_;
      }
      break;
  }
  previous_ = robustness;
  ++consumed_;
  return stopped_;
}

std::size_t OnlineSelector::chosen() const {
  if (consumed_ == 0) fail(ErrorCategory::InvalidArgument, "online selector has not consumed any checkpoint");
  return plateau_start_;
}

SelectionResult select_online(const CheckpointSeries& series, OnlinePolicy policy) {
  series.validate();
  std::vector<std::size_t> positions;
  for (std::size_t i = 0; i < series.entries.size(); ++i) {
    if (!series.entries[i].random_init) positions.push_back(i);
  }
  if (positions.empty()) fail(ErrorCategory::InvalidArgument, "empty checkpoint stream");
  OnlineSelector selector(policy);
  for (std::size_t p : positions) {
    if (selector.push(series.entries[p].robustness)) break;
  }
  SelectionResult r;
  r.mode = SelectionMode::Online;
  r.evaluated_count = selector.consumed();
  r.chosen_index = positions[selector.chosen()];
  r.chosen_id = series.entries[r.chosen_index].id;
  return r;
}

double worst_best_ratio(std::span<const double> downstream) {
  if (downstream.empty()) fail(ErrorCategory::InvalidArgument, "ratio of an empty list");
  for (double d : downstream) {
    if (!(d > 0.0)) fail(ErrorCategory::InvalidArgument, "downstream scores must be positive");
  }
  const auto [lo, hi] = std::minmax_element(downstream.begin(), downstream.end());
  return *lo / *hi;
}

}  // namespace robsel
