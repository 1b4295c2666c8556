#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace robsel {

enum class TaskMode { Binary, Multiclass };

std::string_view to_string(TaskMode mode) noexcept;
TaskMode parse_task_mode(std::string_view name);

/// Model outputs. Binary: B x H x W sigmoid probabilities of the positive
/// class. Multiclass: B x H x W x K softmax probabilities, K = C + 1 with
/// class 0 the background.
struct PredictionTensor {
  TaskMode mode = TaskMode::Binary;
  std::size_t batch = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t classes = 2;  ///< K including background; always 2 for binary
  std::vector<double> probs;

  std::size_t pixel_count() const { return batch * height * width; }

  /// Probability of class c at flat pixel p (binary derives class 0 as 1 - p).
  double prob(std::size_t pixel, std::size_t c) const;

  void validate() const;
};

/// B x H x W class labels in 0..K-1.
struct MaskTensor {
  std::size_t batch = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::int32_t> labels;

  std::size_t pixel_count() const { return batch * height * width; }
  friend bool operator==(const MaskTensor&, const MaskTensor&) = default;
};

struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// One-vs-rest tallies per class, pooled over the whole batch.
struct ConfusionCounts {
  std::vector<ClassCounts> per_class;
};

/// Multiclass: argmax with ties to the lowest class. Binary: positive iff p > 0.5.
MaskTensor binarize(const PredictionTensor& pred);

ConfusionCounts confusion(const MaskTensor& pred, const MaskTensor& truth, std::size_t num_classes);

/// (2 TP + 1) / (2 TP + FP + FN + 1).
double dice_of(const ClassCounts& c) noexcept;
/// D / (2 - D) with D the smoothed Dice.
double jaccard_of(const ClassCounts& c) noexcept;
/// Matthews correlation; 0 when any marginal is empty.
double mcc_of(const ClassCounts& c) noexcept;

/// Binary: class 1. Multiclass: mean over classes 1..K-1.
double dice_index(const ConfusionCounts& counts, TaskMode mode);
double jaccard_index(const ConfusionCounts& counts, TaskMode mode);
double mcc(const ConfusionCounts& counts, TaskMode mode);

inline constexpr double kDiceSmoothing = 1e-5;

/// Soft Dice loss over all K classes including background:
///   1 - (1/K) sum_c (2 <p_c, y_c> + zeta) / (|p_c|^2 + |y_c|^2 + zeta).
double dice_loss(const PredictionTensor& pred, const MaskTensor& truth,
                 double zeta = kDiceSmoothing);

/// Average ranks (1-based), ties share the mean of their span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson r; throws DegenerateInput on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace robsel
