#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robsel/image.hpp"
#include "robsel/prng.hpp"

namespace robsel {

/// Which encoder level feeds the robustness embedding.
enum class Level { Last, SecondToLast };

std::string_view to_string(Level level) noexcept;
Level parse_level(std::string_view name);

/// Anything that maps an image to the output of one of its levels.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual FeatureMap forward(const Image& img, Level level) const = 0;
};

/// He initialization: N(0, gamma / fan_in).
std::vector<double> he_init(std::size_t count, std::size_t fan_in, double gamma, Prng& rng);
std::vector<double> he_init(std::size_t count, std::size_t fan_in, double gamma,
                            std::uint64_t seed);

/// Normal(mean, sd) with every draw outside [lo, hi] redrawn.
std::vector<double> trunc_normal_init(std::size_t count, Prng& rng, double mean = 0.0,
                                      double sd = 0.02, double lo = -2.0, double hi = 2.0);
std::vector<double> trunc_normal_init(std::size_t count, std::uint64_t seed);

/// One 3x3 convolution block with zero padding 1 followed by ReLU.
/// Weights are laid out [out][in][ky][kx].
struct ConvLevel {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t stride = 1;
  std::vector<double> weights;
  std::vector<double> bias;

  std::size_t fan_in() const { return in_channels * 9; }
  std::size_t weight_count() const { return out_channels * in_channels * 9; }
  double& weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) {
    return weights[((o * in_channels + i) * 3 + ky) * 3 + kx];
  }
  double weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const {
    return weights[((o * in_channels + i) * 3 + ky) * 3 + kx];
  }
};

/// Applies one conv + ReLU block.
FeatureMap apply_level(const ConvLevel& level, const FeatureMap& input);

/// Image as a 3 x H x W map.
FeatureMap to_feature_map(const Image& img);

/// Small U-Net-style convolutional encoder: level 0 keeps the input
/// resolution, every later level halves it. Channel count at level l is
/// 8 * 2^l. Immutable once built.
class LeveledEncoder final : public Encoder {
 public:
  static constexpr std::size_t kLevels = 4;
  static constexpr std::size_t kBaseWidth = 8;
  static constexpr std::size_t kInputChannels = 3;

  LeveledEncoder(std::vector<ConvLevel> levels, std::string checkpoint_id);

  /// Standard architecture with all weights and biases zero.
  static LeveledEncoder zeros(std::string checkpoint_id = "zeros");

  /// Zero weights and a constant positive bias: every input maps to the
  /// same constant feature map.
  static LeveledEncoder constant(double bias, std::string checkpoint_id = "constant");

  /// He-initialized (gamma = 2) weights, zero biases, drawn from stream
  /// (seed, checkpoint_id).
  static LeveledEncoder random(std::uint64_t seed, std::string checkpoint_id);

  /// Rebuilds the standard architecture from the flat parameter layout of
  /// parameters(): per level, weights then biases.
  static LeveledEncoder from_parameters(std::span<const float> params,
                                        std::string checkpoint_id);
  static std::size_t parameter_count();

  std::vector<float> parameters() const;

  FeatureMap forward(const Image& img, Level level) const override;

  /// Output of level `index` (0-based).
  FeatureMap forward_to(const Image& img, std::size_t index) const;

  std::size_t level_count() const { return levels_.size(); }
  std::size_t level_index(Level level) const;
  const std::vector<ConvLevel>& levels() const { return levels_; }
  const std::string& checkpoint_id() const { return checkpoint_id_; }

 private:
  std::vector<ConvLevel> levels_;
  std::string checkpoint_id_;
};

/// Empty levels with the standard shapes.
std::vector<ConvLevel> standard_levels();

/// Test fixture emulating a pretraining trajectory. Checkpoint t has weights
///   W_t = (1 - a_t) W_random + a_t W_target
/// with a_t = min(1, epoch_t / peak_epoch), and every bias set to b_t, which
/// is zero up to the peak epoch and grows linearly to `collapse_bias` at the
/// last epoch. The growing bias pushes all inputs toward one constant
/// representation, so robustness falls again after the peak.
/// W_random and W_target are He draws number `random_draw` and `target_draw`
/// of the trajectory streams of `seed`. All parameters are rounded to float
/// so the checkpoints survive a float32 round trip.
struct TrajectoryOptions {
  int peak_epoch = 100;
  double collapse_bias = 0.2;
  std::uint64_t random_draw = 0;
  std::uint64_t target_draw = 1;
};

/// He-initialized standard levels from trajectory draw `draw` of `seed`.
std::vector<ConvLevel> trajectory_draw(std::uint64_t seed, std::uint64_t draw);

std::vector<LeveledEncoder> synthesize_checkpoints(std::uint64_t seed, std::span<const int> epochs,
                                                   const TrajectoryOptions& options = {});

}  // namespace robsel
