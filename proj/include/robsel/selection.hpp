#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robsel {

/// Pretraining epochs at which checkpoints are kept; 0 is the random init.
inline constexpr int kDefaultEpochGrid[] = {0, 1, 5, 20, 50, 100, 150, 200, 250, 300};

struct CheckpointEntry {
  std::string id;
  int epoch = 0;
  bool random_init = false;
  double robustness = 0.0;
  std::optional<double> downstream;
};

/// Checkpoints in increasing epoch order; at most one may be the random init.
struct CheckpointSeries {
  std::vector<CheckpointEntry> entries;

  void validate() const;
  bool has_downstream() const;
  std::vector<double> robustness() const;
  std::vector<double> downstream() const;
};

enum class SelectionMode { Offline, Online };

std::string_view to_string(SelectionMode mode) noexcept;
SelectionMode parse_selection_mode(std::string_view name);

struct SelectionResult {
  std::string chosen_id;
  std::size_t chosen_index = 0;  ///< position in the series
  SelectionMode mode = SelectionMode::Offline;
  std::size_t evaluated_count = 0;
};

/// downstream[argmax(indicator)] / max(downstream), earliest index on ties.
double tis(std::span<const double> downstream, std::span<const double> indicator);

/// Index of the first maximum.
std::size_t first_argmax(std::span<const double> values);

/// Highest robustness, earliest epoch on ties. The random-init entry is
/// skipped unless include_random_init is set. Every checkpoint counts as
/// evaluated.
SelectionResult select_offline(const CheckpointSeries& series, bool include_random_init = false);

enum class OnlinePolicy { FirstDecrease };

/// Early-stopping state machine fed one robustness value per checkpoint in
/// epoch order (random init already excluded). Under FirstDecrease it stops
/// at the first value below its predecessor and keeps the predecessor; among
/// a plateau of equal values ending there, the earliest is kept.
class OnlineSelector {
 public:
  explicit OnlineSelector(OnlinePolicy policy = OnlinePolicy::FirstDecrease) : policy_(policy) {}

  /// Returns true once the stream should stop. Further pushes are ignored.
  bool push(double robustness);

  bool stopped() const { return stopped_; }
  std::size_t consumed() const { return consumed_; }
  /// Position (in pushed order) of the kept checkpoint. Requires consumed() > 0.
  std::size_t chosen() const;

 private:
  OnlinePolicy policy_;
  bool stopped_ = false;
  std::size_t consumed_ = 0;
  std::size_t plateau_start_ = 0;
  double previous_ = 0.0;
};

SelectionResult select_online(const CheckpointSeries& series,
                              OnlinePolicy policy = OnlinePolicy::FirstDecrease);

/// min / max of positive scores.
double worst_best_ratio(std::span<const double> downstream);

}  // namespace robsel
