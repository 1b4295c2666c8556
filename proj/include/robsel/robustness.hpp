#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "robsel/augment.hpp"
#include "robsel/distance.hpp"
#include "robsel/encoder.hpp"
#include "robsel/image.hpp"

namespace robsel {

using Embedding = std::vector<double>;

struct RobustnessConfig {
  Distance distance = Distance::Cosine;
  double margin = 0.5;
  Level level = Level::SecondToLast;
  bool pooled = true;

  void validate() const;
};

/// Margins swept in the ablation grid.
inline constexpr double kMarginGrid[] = {0.25, 0.5, 0.75, 1.0};

/// Per-image (query, positive key, negative key) embeddings.
struct TripletSet {
  std::vector<Embedding> queries;
  std::vector<Embedding> positives;
  std::vector<Embedding> negatives;

  std::size_t size() const { return queries.size(); }

  /// Checks n >= 2, equal list lengths and a common dim.
  void validate() const;

  friend bool operator==(const TripletSet&, const TripletSet&) = default;
};

/// max(0, d_pos - d_neg + margin).
double triplet_hinge(double d_pos, double d_neg, double margin);

/// 1 - mean of the per-triplet hinges, summed in index order.
double robustness(const TripletSet& triplets, const RobustnessConfig& cfg);

/// Spatial mean per channel when pooled, else the channel-major flatten.
Embedding pool_or_flatten(const FeatureMap& fm, bool pooled);

/// negative_partner(n, seed)[i] is the image whose positive key serves as the
/// negative key of image i. A Fisher-Yates shuffle pi of 0..n-1 is drawn
/// (for i = n-1 down to 1: swap(pi[i], pi[floor(u (i+1))])) and each image
/// is paired with its cyclic successor in shuffled order.
std::vector<std::size_t> negative_partner(std::size_t n, std::uint64_t seed);

/// Triplets from precomputed (query, positive) embeddings, negatives reused
/// from the positives via negative_partner.
TripletSet triplets_from_pairs(std::vector<Embedding> queries, std::vector<Embedding> positives,
                               std::uint64_t seed);

/// Stream id of the j-th (0 = query, 1 = positive key) jitter of image i.
std::uint64_t jitter_stream(std::size_t image_index, std::size_t draw);

/// Jitters every image twice, encodes both versions (two forward passes per
/// image) and pairs negatives by negative_partner. Augmentations depend only
/// on (seed, image index), so every checkpoint sees the same inputs.
TripletSet build_triplets(std::span<const Image> images, const Encoder& encoder,
                          const RobustnessConfig& cfg, std::uint64_t seed,
                          const JitterParams& jitter = {});

}  // namespace robsel
