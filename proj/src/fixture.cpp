#include "robsel/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "robsel/error.hpp"
#include "robsel/manifest.hpp"
#include "robsel/ptns.hpp"
#include "robsel/selection.hpp"
#include "robsel/tensor_io.hpp"

namespace robsel {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kGratingDomain = 0x475254;  // "GRT"
constexpr std::uint64_t kCalibrationOffset = 0x43414C;

}  // namespace

std::vector<Image> grating_images(std::uint64_t seed, std::size_t count, std::size_t size) {
  std::vector<Image> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Prng rng(seed, stream_key({kGratingDomain, i}));
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double freq = rng.uniform(0.15, 0.6);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double amp[3];
    double base[3];
    for (int c = 0; c < 3; ++c) {
      amp[c] = rng.uniform(0.1, 0.35);
      base[c] = rng.uniform(0.3, 0.7);
    }
    Image img(size, size);
    for (std::size_t y = 0; y < size; ++y) {
      for (std::size_t x = 0; x < size; ++x) {
        const double wave = std::sin(freq * (std::cos(theta) * x + std::sin(theta) * y) + phase);
        for (std::size_t c = 0; c < 3; ++c) {
          const double v = static_cast<float>(std::clamp(base[c] + amp[c] * wave, 0.0, 1.0));
          img.at(y, x, c) = v;
        }
      }
    }
    out.push_back(std::move(img));
  }
  return out;
}

TrajectoryOptions calibrate_trajectory(std::uint64_t seed, std::span<const Image> images,
                                       std::size_t candidates, const RobustnessConfig& cfg) {
  if (candidates < 2) fail(ErrorCategory::InvalidArgument, "calibration needs at least two candidates");
  std::vector<double> scores;
  for (std::size_t d = 0; d < candidates; ++d) {
    const LeveledEncoder enc(trajectory_draw(seed, d), "draw_" + std::to_string(d));
    scores.push_back(robustness(build_triplets(images, enc, cfg, seed), cfg));
  }
  TrajectoryOptions opts;
  opts.target_draw = first_argmax(scores);
  opts.random_draw = static_cast<std::size_t>(std::min_element(scores.begin(), scores.end()) - scores.begin());
  return opts;
}

Fixture make_fixture(std::uint64_t seed, std::size_t image_count) {
  Fixture f;
  f.seed = seed;
  f.images = grating_images(seed, image_count);
  f.epochs.assign(std::begin(kDefaultEpochGrid), std::end(kDefaultEpochGrid));
  const auto calibration = grating_images(seed ^ kCalibrationOffset, image_count);
  f.options = calibrate_trajectory(seed, calibration);
  f.checkpoints = synthesize_checkpoints(seed, f.epochs, f.options);
  return f;
}

fs::path write_fixture(const Fixture& fixture, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "images", ec);
  if (!ec) fs::create_directories(dir / "weights", ec);
  if (ec) fail(ErrorCategory::Io, "cannot create '" + dir.string() + "': " + ec.message());

  RunManifest m;
  m.seed = fixture.seed;
  for (std::size_t i = 0; i < fixture.images.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%03zu.ptns", i);
    write_ptns(dir / "images" / name, image_to_tensor(fixture.images[i]));
    m.images.push_back(fs::path("images") / name);
  }
  for (std::size_t t = 0; t < fixture.checkpoints.size(); ++t) {
    const auto& enc = fixture.checkpoints[t];
    const fs::path rel = fs::path("weights") / (enc.checkpoint_id() + ".ptns");
    write_ptns(dir / rel, encoder_to_tensor(enc));
    ManifestCheckpoint ck;
    ck.id = enc.checkpoint_id();
    ck.epoch = fixture.epochs[t];
    ck.random_init = fixture.epochs[t] == 0;
    ck.weights = rel;
    m.checkpoints.push_back(std::move(ck));
  }
  const fs::path path = dir / "manifest.json";
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCategory::Io, "cannot write '" + path.string() + "'");
  out << manifest_to_json(m).dump(2) << "\n";
  return path;
}

}  // namespace robsel
