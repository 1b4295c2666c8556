#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "robsel/encoder.hpp"
#include "robsel/image.hpp"
#include "robsel/robustness.hpp"

namespace robsel {

/// Colored sinusoidal gratings with random orientation, frequency, phase and
/// per-channel offset and amplitude. Image i uses stream (seed, i).
std::vector<Image> grating_images(std::uint64_t seed, std::size_t count, std::size_t size = 32);

/// Scores trajectory draws 0..candidates-1 on `images` and returns options
/// that interpolate from the least robust draw to the most robust one.
TrajectoryOptions calibrate_trajectory(std::uint64_t seed, std::span<const Image> images,
                                       std::size_t candidates = 8, const RobustnessConfig& cfg = {});

/// Synthetic target images plus a checkpoint trajectory over the default
/// epoch grid. Epoch 0 is the random init.
struct Fixture {
  std::uint64_t seed = 0;
  std::vector<Image> images;
  std::vector<int> epochs;
  TrajectoryOptions options;
  std::vector<LeveledEncoder> checkpoints;
};

/// Calibration runs on a separate set of images so the fixture images are
/// never used to pick the target draw.
Fixture make_fixture(std::uint64_t seed, std::size_t image_count = 16);

/// Writes images/, weights/ and manifest.json under dir; returns the
/// manifest path.
std::filesystem::path write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace robsel
