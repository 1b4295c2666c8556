#include "robsel/robustness.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "robsel/error.hpp"
#include "robsel/prng.hpp"

namespace robsel {

namespace {

constexpr std::uint64_t kJitterDomain = 0x4A4954;       // "JIT"
constexpr std::uint64_t kPermutationDomain = 0x504552;  // "PER"

}  // namespace

void RobustnessConfig::validate() const {
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    fail(ErrorCategory::InvalidArgument, "margin must be a positive finite number");
  }
}

void TripletSet::validate() const {
  const std::size_t n = queries.size();
  if (n < 2) fail(ErrorCategory::InvalidArgument, "triplet set needs at least two images");
  if (positives.size() != n || negatives.size() != n) {
    fail(ErrorCategory::DimensionMismatch, "query/positive/negative lists differ in length");
  }
  const std::size_t dim = queries.front().size();
  if (dim == 0) fail(ErrorCategory::DimensionMismatch, "empty embedding");
  for (std::size_t i = 0; i < n; ++i) {
    if (queries[i].size() != dim || positives[i].size() != dim || negatives[i].size() != dim) {
      fail(ErrorCategory::DimensionMismatch, "embedding dim differs at triplet " + std::to_string(i));
    }
  }
}

double triplet_hinge(double d_pos, double d_neg, double margin) {
  if (!std::isfinite(d_pos) || !std::isfinite(d_neg) || !std::isfinite(margin)) {
    fail(ErrorCategory::DegenerateInput, "non-finite hinge input");
  }
  if (!(margin > 0.0)) fail(ErrorCategory::InvalidArgument, "margin must be positive");
  const double v = d_pos - d_neg + margin;
  return v > 0.0 ? v : 0.0;
}

double robustness(const TripletSet& triplets, const RobustnessConfig& cfg) {
  cfg.validate();
  triplets.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    try {
      const double d_pos = distance(cfg.distance, triplets.queries[i], triplets.positives[i]);
      const double d_neg = distance(cfg.distance, triplets.queries[i], triplets.negatives[i]);
      sum += triplet_hinge(d_pos, d_neg, cfg.margin);
    } catch (const Error& e) {
      throw Error(e.category(), "triplet " + std::to_string(i) + ": " + e.what());
    }
  }
  return 1.0 - sum / static_cast<double>(triplets.size());
}

Embedding pool_or_flatten(const FeatureMap& fm, bool pooled) {
  if (!pooled) return fm.values;
  Embedding out(fm.channels, 0.0);
  const std::size_t plane = fm.height * fm.width;
  for (std::size_t c = 0; c < fm.channels; ++c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < plane; ++k) acc += fm.values[c * plane + k];
    out[c] = acc / static_cast<double>(plane);
  }
  return out;
}

std::vector<std::size_t> negative_partner(std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCategory::InvalidArgument, "need at least two images for negative keys");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Prng rng(seed, stream_key({kPermutationDomain}));
  for (std::size_t i = n - 1; i >= 1; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
  std::vector<std::size_t> partner(n);
  for (std::size_t p = 0; p < n; ++p) partner[perm[p]] = perm[(p + 1) % n];
  return partner;
}

TripletSet triplets_from_pairs(std::vector<Embedding> queries, std::vector<Embedding> positives,
                               std::uint64_t seed) {
  if (queries.size() != positives.size()) {
    fail(ErrorCategory::DimensionMismatch, "query and positive counts differ");
  }
  const auto partner = negative_partner(queries.size(), seed);
  TripletSet t;
  t.negatives.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) t.negatives.push_back(positives[partner[i]]);
  t.queries = std::move(queries);
  t.positives = std::move(positives);
  t.validate();
  return t;
}

std::uint64_t jitter_stream(std::size_t image_index, std::size_t draw) {
  return stream_key({kJitterDomain, image_index, draw});
}

TripletSet build_triplets(std::span<const Image> images, const Encoder& encoder,
                          const RobustnessConfig& cfg, std::uint64_t seed,
                          const JitterParams& jitter) {
  cfg.validate();
  if (images.size() < 2) fail(ErrorCategory::InvalidArgument, "need at least two images for negative keys");
  std::vector<Embedding> queries;
  std::vector<Embedding> positives;
  queries.reserve(images.size());
  positives.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    Prng q_rng(seed, jitter_stream(i, 0));
    Prng k_rng(seed, jitter_stream(i, 1));
    const Image q = color_jitter(images[i], jitter, q_rng);
    const Image k = color_jitter(images[i], jitter, k_rng);
    queries.push_back(pool_or_flatten(encoder.forward(q, cfg.level), cfg.pooled));
    positives.push_back(pool_or_flatten(encoder.forward(k, cfg.level), cfg.pooled));
  }
  return triplets_from_pairs(std::move(queries), std::move(positives), seed);
}

}  // namespace robsel
