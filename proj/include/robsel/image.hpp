#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace robsel {

/// H x W x 3 RGB image, row-major with interleaved channels, values in [0, 1].
struct Image {
  static constexpr std::size_t kChannels = 3;

  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t h, std::size_t w, double fill = 0.0)
      : height(h), width(w), pixels(h * w * kChannels, fill) {}

  double& at(std::size_t y, std::size_t x, std::size_t c) {
    return pixels[(y * width + x) * kChannels + c];
  }
  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels[(y * width + x) * kChannels + c];
  }

  bool same_shape(const Image& other) const {
    return height == other.height && width == other.width;
  }

  friend bool operator==(const Image&, const Image&) = default;
};

/// H x W integer class labels (0 = background).
struct Mask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::int32_t> labels;

  Mask() = default;
  Mask(std::size_t h, std::size_t w, std::int32_t fill = 0)
      : height(h), width(w), labels(h * w, fill) {}

  std::int32_t& at(std::size_t y, std::size_t x) { return labels[y * width + x]; }
  std::int32_t at(std::size_t y, std::size_t x) const { return labels[y * width + x]; }

  friend bool operator==(const Mask&, const Mask&) = default;
};

/// C x H x W activation tensor produced by one encoder level.
struct FeatureMap {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  FeatureMap() = default;
  FeatureMap(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), values(c * h * w, fill) {}

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return values[(c * height + y) * width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values[(c * height + y) * width + x];
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

}  // namespace robsel
