#include <gtest/gtest.h>

#include <cmath>

#include "robsel/encoder.hpp"
#include "robsel/error.hpp"
#include "robsel/selection.hpp"

using namespace robsel;

namespace {

Image random_image(std::uint64_t seed, std::size_t h, std::size_t w) {
  Prng rng(seed, 0);
  Image img(h, w);
  for (auto& v : img.pixels) v = rng.uniform();
  return img;
}

}  // namespace

TEST(HeInit, VarianceMatchesGamma) {
  const auto w = he_init(100000, 8, 2.0, 17);
  double sum = 0.0;
  double sq = 0.0;
  for (double v : w) {
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(w.size());
  const double var = sq / n - (sum / n) * (sum / n);
  EXPECT_NEAR(var, 0.25, 0.25 * 0.02);
  const auto unit = he_init(100000, 5, 5.0, 18);
  double uq = 0.0;
  for (double v : unit) uq += v * v;
  EXPECT_NEAR(uq / 100000.0, 1.0, 0.02);
}

TEST(HeInit, Repeatable) {
  EXPECT_EQ(he_init(500, 27, 2.0, 3), he_init(500, 27, 2.0, 3));
  EXPECT_NE(he_init(500, 27, 2.0, 3), he_init(500, 27, 2.0, 4));
  Prng rng(1, 1);
  EXPECT_THROW(he_init(10, 0, 2.0, rng), Error);
  EXPECT_THROW(he_init(10, 3, 0.0, rng), Error);
}

TEST(TruncNormal, SupportAndMean) {
  const auto w = trunc_normal_init(100000, 21);
  double sum = 0.0;
  for (double v : w) {
    ASSERT_GE(v, -2.0);
    ASSERT_LE(v, 2.0);
    sum += v;
  }
  EXPECT_LE(std::abs(sum / 100000.0), 3.0 * 0.02 / std::sqrt(100000.0));
  EXPECT_EQ(trunc_normal_init(100, 21), trunc_normal_init(100, 21));
}

TEST(TruncNormal, ResamplesOutsideSupport) {
  Prng rng(2, 2);
  const auto w = trunc_normal_init(10000, rng, 0.0, 1.0, -0.5, 0.5);
  for (double v : w) {
    ASSERT_GE(v, -0.5);
    ASSERT_LE(v, 0.5);
  }
}

TEST(Encoder, ShapesPerLevel) {
  const auto enc = LeveledEncoder::random(1, "a");
  const Image img = random_image(1, 32, 32);
  const FeatureMap s2l = enc.forward(img, Level::SecondToLast);
  EXPECT_EQ(s2l.channels, 32u);
  EXPECT_EQ(s2l.height, 8u);
  EXPECT_EQ(s2l.width, 8u);
  const FeatureMap last = enc.forward(img, Level::Last);
  EXPECT_EQ(last.channels, 64u);
  EXPECT_EQ(last.height, 4u);
  EXPECT_EQ(enc.forward_to(img, 0).height, 32u);
  EXPECT_EQ(enc.forward_to(img, 0).channels, 8u);
}

TEST(Encoder, IndivisibleInputIsError) {
  const auto enc = LeveledEncoder::random(1, "a");
  try {
    enc.forward(random_image(1, 30, 32), Level::Last);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::DimensionMismatch);
  }
  EXPECT_NO_THROW(enc.forward(random_image(1, 12, 4), Level::SecondToLast));
}

TEST(Encoder, ZeroWeightsGiveZeroMap) {
  const FeatureMap fm = LeveledEncoder::zeros().forward(random_image(2, 16, 16), Level::Last);
  for (double v : fm.values) EXPECT_EQ(v, 0.0);
}

TEST(Encoder, CentreTapKernelOnConstantImage) {
  // Single level: output o = relu(sum_i k_o,i * c + b) away from the border.
  ConvLevel lv;
  lv.in_channels = 3;
  lv.out_channels = 2;
  lv.stride = 1;
  lv.weights.assign(lv.weight_count(), 0.0);
  lv.bias = {0.1, -5.0};
  lv.weight(0, 0, 1, 1) = 1.0;
  lv.weight(0, 2, 1, 1) = 0.5;
  lv.weight(1, 1, 1, 1) = 2.0;
  FeatureMap in(3, 4, 4, 0.6);
  const FeatureMap out = apply_level(lv, in);
  for (std::size_t k = 0; k < 16; ++k) {
    EXPECT_NEAR(out.values[k], 0.6 + 0.3 + 0.1, 1e-15);
    EXPECT_EQ(out.values[16 + k], 0.0);
  }
}

TEST(Encoder, BorderUsesZeroPadding) {
  ConvLevel lv;
  lv.in_channels = 1;
  lv.out_channels = 1;
  lv.stride = 1;
  lv.weights.assign(9, 1.0);
  lv.bias = {0.0};
  const FeatureMap out = apply_level(lv, FeatureMap(1, 3, 3, 1.0));
  EXPECT_EQ(out.values, (std::vector<double>{4, 6, 4, 6, 9, 6, 4, 6, 4}));
}

TEST(Encoder, FirstLevelPositivelyHomogeneous) {
  const auto base = LeveledEncoder::random(5, "h");
  auto scaled_levels = base.levels();
  for (double& w : scaled_levels[0].weights) w *= 2.5;
  const LeveledEncoder scaled(scaled_levels, "h2");
  const Image img = random_image(3, 8, 8);
  const FeatureMap a = base.forward_to(img, 0);
  const FeatureMap b = scaled.forward_to(img, 0);
  for (std::size_t k = 0; k < a.values.size(); ++k) EXPECT_NEAR(b.values[k], 2.5 * a.values[k], 1e-9);
}

TEST(Encoder, ConstantEncoderIgnoresInput) {
  const auto enc = LeveledEncoder::constant(0.5);
  const FeatureMap a = enc.forward(random_image(1, 16, 16), Level::SecondToLast);
  const FeatureMap b = enc.forward(random_image(2, 16, 16), Level::SecondToLast);
  EXPECT_EQ(a, b);
  EXPECT_GT(a.values[0], 0.0);
}

TEST(Encoder, ForwardIsBitwiseRepeatable) {
  const auto enc = LeveledEncoder::random(9, "r");
  const Image img = random_image(4, 16, 16);
  EXPECT_EQ(enc.forward(img, Level::Last), enc.forward(img, Level::Last));
  EXPECT_EQ(LeveledEncoder::random(9, "r").parameters(), enc.parameters());
  EXPECT_NE(LeveledEncoder::random(9, "s").parameters(), enc.parameters());
}

TEST(Encoder, ParameterRoundTrip) {
  const auto enc = LeveledEncoder::random(10, "p");
  const auto params = enc.parameters();
  EXPECT_EQ(params.size(), LeveledEncoder::parameter_count());
  const auto back = LeveledEncoder::from_parameters(params, "p");
  EXPECT_EQ(back.parameters(), params);
  std::vector<float> short_params(params.begin(), params.end() - 1);
  EXPECT_THROW(LeveledEncoder::from_parameters(short_params, "p"), Error);
}

TEST(Trajectory, EndpointsEqualDraws) {
  const std::vector<int> epochs(std::begin(kDefaultEpochGrid), std::end(kDefaultEpochGrid));
  TrajectoryOptions opts;
  opts.random_draw = 3;
  opts.target_draw = 5;
  const auto cks = synthesize_checkpoints(77, epochs, opts);
  ASSERT_EQ(cks.size(), epochs.size());
  const auto random = trajectory_draw(77, 3);
  const auto target = trajectory_draw(77, 5);
  for (std::size_t l = 0; l < random.size(); ++l) {
    EXPECT_EQ(cks.front().levels()[l].weights, random[l].weights);
    EXPECT_EQ(cks[5].levels()[l].weights, target[l].weights);  // epoch 100 = peak
    for (double b : cks[5].levels()[l].bias) EXPECT_EQ(b, 0.0);
    for (double b : cks.back().levels()[l].bias) EXPECT_EQ(b, static_cast<double>(static_cast<float>(0.2)));
  }
  EXPECT_EQ(cks.front().checkpoint_id(), "epoch_0");
  EXPECT_EQ(cks.back().checkpoint_id(), "epoch_300");
}

TEST(Trajectory, ParametersSurviveFloatRoundTrip) {
  const std::vector<int> epochs{0, 10, 100, 200};
  for (const auto& enc : synthesize_checkpoints(5, epochs)) {
    const auto back = LeveledEncoder::from_parameters(enc.parameters(), enc.checkpoint_id());
    for (std::size_t l = 0; l < enc.levels().size(); ++l) {
      EXPECT_EQ(back.levels()[l].weights, enc.levels()[l].weights);
      EXPECT_EQ(back.levels()[l].bias, enc.levels()[l].bias);
    }
  }
}

TEST(Trajectory, RejectsBadSchedules) {
  EXPECT_THROW(synthesize_checkpoints(1, std::vector<int>{5}), Error);
  EXPECT_THROW(synthesize_checkpoints(1, std::vector<int>{5, 5}), Error);
}

TEST(Level, Parse) {
  EXPECT_EQ(parse_level("last"), Level::Last);
  EXPECT_EQ(parse_level("second-to-last"), Level::SecondToLast);
  EXPECT_EQ(parse_level("second_to_last"), Level::SecondToLast);
  EXPECT_THROW(parse_level("first"), Error);
}
