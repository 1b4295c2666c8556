#include "robsel/seg_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robsel/error.hpp"

namespace robsel {

std::string_view to_string(TaskMode mode) noexcept {
  return mode == TaskMode::Binary ? "binary" : "multiclass";
}

TaskMode parse_task_mode(std::string_view name) {
  if (name == "binary") return TaskMode::Binary;
  if (name == "multiclass") return TaskMode::Multiclass;
  fail(ErrorCategory::InvalidArgument, "unknown task '" + std::string(name) + "'");
}

double PredictionTensor::prob(std::size_t pixel, std::size_t c) const {
  if (mode == TaskMode::Binary) return c == 1 ? probs[pixel] : 1.0 - probs[pixel];
  return probs[pixel * classes + c];
}

void PredictionTensor::validate() const {
  const std::size_t per_pixel = mode == TaskMode::Binary ? 1 : classes;
  if (mode == TaskMode::Binary && classes != 2) {
    fail(ErrorCategory::InvalidArgument, "binary predictions have exactly two classes");
  }
  if (classes < 2) fail(ErrorCategory::InvalidArgument, "need at least two classes");
  if (probs.size() != pixel_count() * per_pixel) {
    fail(ErrorCategory::DimensionMismatch, "prediction tensor size does not match its shape");
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCategory::InvalidArgument, "probability outside [0, 1]");
  }
  if (mode == TaskMode::Multiclass) {
    for (std::size_t px = 0; px < pixel_count(); ++px) {
      double s = 0.0;
      for (std::size_t c = 0; c < classes; ++c) s += probs[px * classes + c];
      if (std::abs(s - 1.0) > 1e-6) {
        fail(ErrorCategory::InvalidArgument, "class probabilities at pixel " + std::to_string(px) +
                                                 " do not sum to 1");
      }
    }
  }
}

MaskTensor binarize(const PredictionTensor& pred) {
  pred.validate();
  MaskTensor out{pred.batch, pred.height, pred.width, std::vector<std::int32_t>(pred.pixel_count())};
  for (std::size_t px = 0; px < pred.pixel_count(); ++px) {
    if (pred.mode == TaskMode::Binary) {
      out.labels[px] = pred.probs[px] > 0.5 ? 1 : 0;
      continue;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < pred.classes; ++c) {
      if (pred.probs[px * pred.classes + c] > pred.probs[px * pred.classes + best]) best = c;
    }
    out.labels[px] = static_cast<std::int32_t>(best);
  }
  return out;
}

ConfusionCounts confusion(const MaskTensor& pred, const MaskTensor& truth, std::size_t num_classes) {
  if (pred.batch != truth.batch || pred.height != truth.height || pred.width != truth.width ||
      pred.labels.size() != truth.labels.size() || pred.labels.size() != pred.pixel_count()) {
    fail(ErrorCategory::DimensionMismatch, "prediction and ground-truth masks differ in shape");
  }
  ConfusionCounts out;
  out.per_class.resize(num_classes);
  std::vector<std::uint64_t> pred_count(num_classes, 0);
  std::vector<std::uint64_t> truth_count(num_classes, 0);
  for (std::size_t px = 0; px < pred.labels.size(); ++px) {
    const auto p = pred.labels[px];
    const auto t = truth.labels[px];
    if (p < 0 || t < 0 || static_cast<std::size_t>(p) >= num_classes ||
        static_cast<std::size_t>(t) >= num_classes) {
      fail(ErrorCategory::InvalidArgument, "label out of range at pixel " + std::to_string(px));
    }
    ++pred_count[static_cast<std::size_t>(p)];
    ++truth_count[static_cast<std::size_t>(t)];
    if (p == t) ++out.per_class[static_cast<std::size_t>(p)].tp;
  }
  const std::uint64_t total = pred.labels.size();
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& k = out.per_class[c];
    k.fp = pred_count[c] - k.tp;
    k.fn = truth_count[c] - k.tp;
    k.tn = total - k.tp - k.fp - k.fn;
  }
  return out;
}

double dice_of(const ClassCounts& c) noexcept {
  const double tp = static_cast<double>(c.tp);
  return (2.0 * tp + 1.0) / (2.0 * tp + static_cast<double>(c.fp) + static_cast<double>(c.fn) + 1.0);
}

double jaccard_of(const ClassCounts& c) noexcept {
  const double d = dice_of(c);
  return d / (2.0 - d);
}

double mcc_of(const ClassCounts& c) noexcept {
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

namespace {

template <typename Fn>
double reduce_classes(const ConfusionCounts& counts, TaskMode mode, Fn per_class) {
  if (counts.per_class.size() < 2) fail(ErrorCategory::InvalidArgument, "need at least two classes");
  if (mode == TaskMode::Binary) return per_class(counts.per_class[1]);
  double acc = 0.0;
  for (std::size_t c = 1; c < counts.per_class.size(); ++c) acc += per_class(counts.per_class[c]);
  return acc / static_cast<double>(counts.per_class.size() - 1);
}

}  // namespace

double dice_index(const ConfusionCounts& counts, TaskMode mode) {
  return reduce_classes(counts, mode, dice_of);
}

double jaccard_index(const ConfusionCounts& counts, TaskMode mode) {
  return reduce_classes(counts, mode, jaccard_of);
}

double mcc(const ConfusionCounts& counts, TaskMode mode) { return reduce_classes(counts, mode, mcc_of); }

double dice_loss(const PredictionTensor& pred, const MaskTensor& truth, double zeta) {
  pred.validate();
  if (truth.batch != pred.batch || truth.height != pred.height || truth.width != pred.width ||
      truth.labels.size() != pred.pixel_count()) {
    fail(ErrorCategory::DimensionMismatch, "prediction and ground-truth shapes differ");
  }
  const std::size_t k = pred.classes;
  std::vector<double> inter(k, 0.0);
  std::vector<double> pred_sq(k, 0.0);
  std::vector<double> truth_sq(k, 0.0);
  for (std::size_t px = 0; px < pred.pixel_count(); ++px) {
    const auto t = truth.labels[px];
    if (t < 0 || static_cast<std::size_t>(t) >= k) {
      fail(ErrorCategory::InvalidArgument, "label out of range at pixel " + std::to_string(px));
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double p = pred.prob(px, c);
      const double y = static_cast<std::size_t>(t) == c ? 1.0 : 0.0;
      inter[c] += p * y;
      pred_sq[c] += p * p;
      truth_sq[c] += y;
    }
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < k; ++c) acc += (2.0 * inter[c] + zeta) / (pred_sq[c] + truth_sq[c] + zeta);
  return 1.0 - acc / static_cast<double>(k);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCategory::DimensionMismatch, "correlation inputs differ in length");
  if (x.size() < 2) fail(ErrorCategory::InvalidArgument, "correlation needs at least two values");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorCategory::DegenerateInput, "correlation of a constant series");
  return sxy / std::sqrt(sxx * syy);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCategory::DimensionMismatch, "correlation inputs differ in length");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace robsel
