#include <gtest/gtest.h>

#include "robsel/commands.hpp"
#include "robsel/fixture.hpp"
#include "robsel/selection.hpp"
#include "scratch.hpp"

using namespace robsel;

namespace {

std::vector<double> curve(const Fixture& f, double margin = 0.5) {
  RobustnessConfig cfg;
  cfg.margin = margin;
  std::vector<double> out;
  for (const auto& enc : f.checkpoints) out.push_back(robustness(build_triplets(f.images, enc, cfg, f.seed), cfg));
  return out;
}

}  // namespace

TEST(Gratings, DeterministicAndInRange) {
  const auto a = grating_images(3, 4);
  EXPECT_EQ(a, grating_images(3, 4));
  EXPECT_NE(a, grating_images(4, 4));
  for (const auto& img : a) {
    EXPECT_EQ(img.height, 32u);
    for (double v : img.pixels) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
      ASSERT_EQ(v, static_cast<double>(static_cast<float>(v)));
    }
  }
}

TEST(Fixture, CalibrationPicksExtremeDraws) {
  const auto images = grating_images(8, 6);
  const auto opts = calibrate_trajectory(8, images, 4);
  EXPECT_NE(opts.random_draw, opts.target_draw);
  RobustnessConfig cfg;
  auto score = [&](std::uint64_t d) {
    return robustness(build_triplets(images, LeveledEncoder(trajectory_draw(8, d), "d"), cfg, 8), cfg);
  };
  for (std::uint64_t d = 0; d < 4; ++d) {
    EXPECT_LE(score(d), score(opts.target_draw));
    EXPECT_GE(score(d), score(opts.random_draw));
  }
}

TEST(Fixture, TrajectoryPeaksInside) {
  const Fixture f = make_fixture(20240501);
  const auto r = curve(f);
  const std::size_t best = first_argmax(r);
  EXPECT_GT(best, 1u);
  EXPECT_LT(best + 1, r.size());
  EXPECT_GT(r[best], r.front());
  EXPECT_GT(r[best], r.back());
}

TEST(Fixture, OfflinePickMatchesExhaustiveRanking) {
  const Fixture f = make_fixture(7);
  const auto r = curve(f);
  CheckpointSeries s;
  for (std::size_t t = 0; t < r.size(); ++t) {
    s.entries.push_back(CheckpointEntry{f.checkpoints[t].checkpoint_id(), f.epochs[t], f.epochs[t] == 0, r[t], {}});
  }
  std::size_t best = 1;
  for (std::size_t t = 1; t < r.size(); ++t) {
    if (r[t] > r[best]) best = t;
  }
  EXPECT_EQ(select_offline(s).chosen_index, best);
  EXPECT_EQ(first_argmax(curve(f, 0.25)), first_argmax(r));
}

TEST(Fixture, WrittenManifestReproducesDirectScores) {
  ScratchDir dir("fixture");
  const Fixture f = make_fixture(11, 6);
  const auto manifest_path = write_fixture(f, dir.path());
  const RunManifest m = load_manifest(manifest_path);
  ASSERT_EQ(m.checkpoints.size(), f.checkpoints.size());
  EXPECT_TRUE(m.checkpoints.front().random_init);
  const Report report = cmd_robustness(m, m.seed);
  const auto direct = curve(f);
  ASSERT_EQ(report.series.entries.size(), direct.size());
  for (std::size_t t = 0; t < direct.size(); ++t) EXPECT_EQ(report.series.entries[t].robustness, direct[t]);
}
