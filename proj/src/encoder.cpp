#include "robsel/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "robsel/error.hpp"

namespace robsel {

namespace {

constexpr std::uint64_t kRandomEncoderDomain = 0x454E43;  // "ENC"
constexpr std::uint64_t kTrajectoryDomain = 0x545241;     // "TRA"

std::vector<double> quantized(std::vector<double> v) {
  for (double& x : v) x = static_cast<double>(static_cast<float>(x));
  return v;
}

}  // namespace

std::string_view to_string(Level level) noexcept {
  return level == Level::Last ? "last" : "second_to_last";
}

Level parse_level(std::string_view name) {
  if (name == "last") return Level::Last;
  if (name == "second_to_last" || name == "second-to-last") return Level::SecondToLast;
  fail(ErrorCategory::InvalidArgument, "unknown level '" + std::string(name) + "'");
}

std::vector<double> he_init(std::size_t count, std::size_t fan_in, double gamma, Prng& rng) {
  if (fan_in == 0) fail(ErrorCategory::InvalidArgument, "he_init: fan_in must be >= 1");
  if (!(gamma > 0.0)) fail(ErrorCategory::InvalidArgument, "he_init: gamma must be > 0");
  const double sigma = std::sqrt(gamma / static_cast<double>(fan_in));
  std::vector<double> out(count);
  for (double& w : out) w = sigma * rng.normal();
  return out;
}

std::vector<double> he_init(std::size_t count, std::size_t fan_in, double gamma,
                            std::uint64_t seed) {
  Prng rng(seed, 0);
  return he_init(count, fan_in, gamma, rng);
}

std::vector<double> trunc_normal_init(std::size_t count, Prng& rng, double mean, double sd,
                                      double lo, double hi) {
  if (!(sd > 0.0) || !(lo < hi)) fail(ErrorCategory::InvalidArgument, "trunc_normal_init: bad support");
  std::vector<double> out(count);
  for (double& w : out) {
    do {
      w = rng.normal(mean, sd);
    } while (w < lo || w > hi);
  }
  return out;
}

std::vector<double> trunc_normal_init(std::size_t count, std::uint64_t seed) {
  Prng rng(seed, 0);
  return trunc_normal_init(count, rng);
}

FeatureMap to_feature_map(const Image& img) {
  FeatureMap fm(Image::kChannels, img.height, img.width);
  for (std::size_t y = 0; y < img.height; ++y)
    for (std::size_t x = 0; x < img.width; ++x)
      for (std::size_t c = 0; c < Image::kChannels; ++c) fm.at(c, y, x) = img.at(y, x, c);
  return fm;
}

FeatureMap apply_level(const ConvLevel& level, const FeatureMap& input) {
  if (input.channels != level.in_channels) {
    fail(ErrorCategory::DimensionMismatch,
         "conv expects " + std::to_string(level.in_channels) + " channels, got " +
             std::to_string(input.channels));
  }
  const std::size_t s = level.stride;
  const std::size_t out_h = (input.height + 2 - 3) / s + 1;
  const std::size_t out_w = (input.width + 2 - 3) / s + 1;
  FeatureMap out(level.out_channels, out_h, out_w);
  const auto in_h = static_cast<std::ptrdiff_t>(input.height);
  const auto in_w = static_cast<std::ptrdiff_t>(input.width);
  for (std::size_t o = 0; o < level.out_channels; ++o) {
    for (std::size_t oy = 0; oy < out_h; ++oy) {
      for (std::size_t ox = 0; ox < out_w; ++ox) {
        double acc = level.bias[o];
        for (std::size_t i = 0; i < level.in_channels; ++i) {
          for (std::size_t ky = 0; ky < 3; ++ky) {
            const auto iy = static_cast<std::ptrdiff_t>(oy * s + ky) - 1;
            if (iy < 0 || iy >= in_h) continue;
            for (std::size_t kx = 0; kx < 3; ++kx) {
              const auto ix = static_cast<std::ptrdiff_t>(ox * s + kx) - 1;
              if (ix < 0 || ix >= in_w) continue;
              acc += level.weight(o, i, ky, kx) *
                     input.at(i, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
            }
          }
        }
        out.at(o, oy, ox) = acc > 0.0 ? acc : 0.0;
      }
    }
  }
  return out;
}

std::vector<ConvLevel> standard_levels() {
  std::vector<ConvLevel> levels;
  std::size_t in = LeveledEncoder::kInputChannels;
  for (std::size_t l = 0; l < LeveledEncoder::kLevels; ++l) {
    ConvLevel lv;
    lv.in_channels = in;
    lv.out_channels = LeveledEncoder::kBaseWidth << l;
    lv.stride = l == 0 ? 1 : 2;
    lv.weights.assign(lv.weight_count(), 0.0);
    lv.bias.assign(lv.out_channels, 0.0);
    in = lv.out_channels;
    levels.push_back(std::move(lv));
  }
  return levels;
}

LeveledEncoder::LeveledEncoder(std::vector<ConvLevel> levels, std::string checkpoint_id)
    : levels_(std::move(levels)), checkpoint_id_(std::move(checkpoint_id)) {
  if (levels_.size() < 2) fail(ErrorCategory::InvalidArgument, "encoder needs at least two levels");
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const ConvLevel& lv = levels_[l];
    if (lv.weights.size() != lv.weight_count() || lv.bias.size() != lv.out_channels ||
        lv.stride == 0) {
      fail(ErrorCategory::DimensionMismatch, "malformed encoder level " + std::to_string(l));
    }
    if (l > 0 && lv.in_channels != levels_[l - 1].out_channels) {
      fail(ErrorCategory::DimensionMismatch, "channel chain broken at level " + std::to_string(l));
    }
  }
}

LeveledEncoder LeveledEncoder::zeros(std::string checkpoint_id) {
  return LeveledEncoder(standard_levels(), std::move(checkpoint_id));
}

LeveledEncoder LeveledEncoder::constant(double bias, std::string checkpoint_id) {
  auto levels = standard_levels();
  for (auto& lv : levels) lv.bias.assign(lv.out_channels, bias);
  return LeveledEncoder(std::move(levels), std::move(checkpoint_id));
}

LeveledEncoder LeveledEncoder::random(std::uint64_t seed, std::string checkpoint_id) {
  Prng rng(seed, stream_key({kRandomEncoderDomain, hash_label(checkpoint_id)}));
  auto levels = standard_levels();
  for (auto& lv : levels) lv.weights = quantized(he_init(lv.weight_count(), lv.fan_in(), 2.0, rng));
  return LeveledEncoder(std::move(levels), std::move(checkpoint_id));
}

std::size_t LeveledEncoder::parameter_count() {
  std::size_t n = 0;
  for (const auto& lv : standard_levels()) n += lv.weight_count() + lv.out_channels;
  return n;
}

std::vector<float> LeveledEncoder::parameters() const {
  std::vector<float> out;
  for (const auto& lv : levels_) {
    for (double w : lv.weights) out.push_back(static_cast<float>(w));
    for (double b : lv.bias) out.push_back(static_cast<float>(b));
  }
  return out;
}

LeveledEncoder LeveledEncoder::from_parameters(std::span<const float> params,
                                               std::string checkpoint_id) {
  if (params.size() != parameter_count()) {
    fail(ErrorCategory::DimensionMismatch,
         "encoder parameter count " + std::to_string(params.size()) + ", expected " +
             std::to_string(parameter_count()));
  }
  auto levels = standard_levels();
  std::size_t k = 0;
  for (auto& lv : levels) {
    for (double& w : lv.weights) w = params[k++];
    for (double& b : lv.bias) b = params[k++];
  }
  return LeveledEncoder(std::move(levels), std::move(checkpoint_id));
}

std::size_t LeveledEncoder::level_index(Level level) const {
  return level == Level::Last ? levels_.size() - 1 : levels_.size() - 2;
}

FeatureMap LeveledEncoder::forward(const Image& img, Level level) const {
  return forward_to(img, level_index(level));
}

FeatureMap LeveledEncoder::forward_to(const Image& img, std::size_t index) const {
  if (index >= levels_.size()) {
    fail(ErrorCategory::InvalidArgument, "level index " + std::to_string(index) + " out of range");
  }
  std::size_t divisor = 1;
  for (std::size_t l = 0; l <= index; ++l) divisor *= levels_[l].stride;
  if (img.height == 0 || img.width == 0 || img.height % divisor != 0 || img.width % divisor != 0) {
    fail(ErrorCategory::DimensionMismatch,
         "image " + std::to_string(img.height) + "x" + std::to_string(img.width) +
             " not divisible by " + std::to_string(divisor));
  }
  FeatureMap fm = to_feature_map(img);
  for (std::size_t l = 0; l <= index; ++l) fm = apply_level(levels_[l], fm);
  return fm;
}

std::vector<ConvLevel> trajectory_draw(std::uint64_t seed, std::uint64_t draw) {
  Prng rng(seed, stream_key({kTrajectoryDomain, draw}));
  auto levels = standard_levels();
  for (auto& lv : levels) lv.weights = quantized(he_init(lv.weight_count(), lv.fan_in(), 2.0, rng));
  return levels;
}

std::vector<LeveledEncoder> synthesize_checkpoints(std::uint64_t seed, std::span<const int> epochs,
                                                   const TrajectoryOptions& options) {
  if (epochs.size() < 2) fail(ErrorCategory::InvalidArgument, "need at least two checkpoints");
  if (options.peak_epoch <= 0) fail(ErrorCategory::InvalidArgument, "peak_epoch must be positive");
  if (!(options.collapse_bias >= 0.0)) fail(ErrorCategory::InvalidArgument, "collapse_bias must be >= 0");
  for (std::size_t t = 1; t < epochs.size(); ++t) {
    if (epochs[t] <= epochs[t - 1]) fail(ErrorCategory::InvalidArgument, "epochs must increase");
  }

  const auto w_random = trajectory_draw(seed, options.random_draw);
  const auto w_target = trajectory_draw(seed, options.target_draw);
  const double last = epochs.back();
  const double peak = options.peak_epoch;
  std::vector<LeveledEncoder> out;
  out.reserve(epochs.size());
  for (int epoch : epochs) {
    const double alpha = std::clamp(epoch / peak, 0.0, 1.0);
    const double beta = (last > peak && epoch > peak) ? options.collapse_bias * (epoch - peak) / (last - peak) : 0.0;
    auto levels = standard_levels();
    for (std::size_t l = 0; l < levels.size(); ++l) {
      auto& w = levels[l].weights;
      for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = static_cast<float>((1.0 - alpha) * w_random[l].weights[k] + alpha * w_target[l].weights[k]);
      }
      for (double& b : levels[l].bias) b = static_cast<float>(beta);
    }
    out.emplace_back(std::move(levels), "epoch_" + std::to_string(epoch));
  }
  return out;
}

}  // namespace robsel
