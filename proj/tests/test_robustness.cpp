#include <gtest/gtest.h>

#include <numeric>

#include "oracle.hpp"
#include "robsel/error.hpp"
#include "robsel/robustness.hpp"

using namespace robsel;

namespace {

TripletSet random_triplets(Prng& rng, std::size_t n, std::size_t dim) {
  TripletSet t;
  auto vec = [&] {
    Embedding v(dim);
    for (auto& x : v) x = rng.normal();
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    t.queries.push_back(vec());
    t.positives.push_back(vec());
    t.negatives.push_back(vec());
  }
  return t;
}

}  // namespace

TEST(Hinge, Examples) {
  EXPECT_EQ(triplet_hinge(0.2, 0.9, 0.5), 0.0);
  EXPECT_NEAR(triplet_hinge(0.9, 0.2, 0.5), 1.2, 1e-15);
  for (double d : {0.0, 0.3, 2.0}) EXPECT_EQ(triplet_hinge(d, d, 0.5), 0.5);
  EXPECT_THROW(triplet_hinge(0.1, 0.2, 0.0), Error);
}

TEST(Robustness, ConstantEmbeddingsGiveOneMinusMargin) {
  TripletSet t;
  for (int i = 0; i < 5; ++i) {
    t.queries.push_back({1.0, 2.0});
    t.positives.push_back({1.0, 2.0});
    t.negatives.push_back({1.0, 2.0});
  }
  for (double eps : kMarginGrid) {
    RobustnessConfig cfg;
    cfg.margin = eps;
    cfg.distance = Distance::L2;
    EXPECT_EQ(robustness(t, cfg), 1.0 - eps);
    cfg.distance = Distance::Cosine;
    EXPECT_NEAR(robustness(t, cfg), 1.0 - eps, 1e-12);
  }
}

TEST(Robustness, SeparatedTripletsGiveOne) {
  TripletSet t;
  t.queries = {{1, 0}, {0, 1}};
  t.positives = {{1, 0}, {0, 1}};
  t.negatives = {{0, 1}, {1, 0}};
  RobustnessConfig cfg;
  EXPECT_EQ(robustness(t, cfg), 1.0);
}

TEST(Robustness, MatchesScalarOracle) {
  Prng rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_triplets(rng, 2 + rng.index(20), 2 + rng.index(30));
    for (int kind = 0; kind < 3; ++kind) {
      for (double eps : kMarginGrid) {
        RobustnessConfig cfg;
        cfg.distance = static_cast<Distance>(kind);
        cfg.margin = eps;
        EXPECT_NEAR(robustness(t, cfg), oracle::robustness(t.queries, t.positives, t.negatives, kind, eps), 1e-12);
      }
    }
  }
}

TEST(Robustness, NonIncreasingInMargin) {
  Prng rng(12, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_triplets(rng, 8, 6);
    double prev = 2.0;
    for (double eps : kMarginGrid) {
      RobustnessConfig cfg;
      cfg.margin = eps;
      const double r = robustness(t, cfg);
      EXPECT_LE(r, prev);
      prev = r;
    }
  }
}

TEST(Robustness, RejectsBadInput) {
  TripletSet one;
  one.queries = one.positives = one.negatives = {{1.0}};
  EXPECT_THROW(robustness(one, RobustnessConfig{}), Error);
  TripletSet ragged;
  ragged.queries = {{1.0, 0.0}, {1.0}};
  ragged.positives = ragged.negatives = ragged.queries;
  try {
    robustness(ragged, RobustnessConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::DimensionMismatch);
  }
  RobustnessConfig cfg;
  cfg.margin = -1.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Robustness, ErrorNamesTriplet) {
  TripletSet t;
  t.queries = {{1.0, 1.0}, {0.0, 0.0}};
  t.positives = t.negatives = {{1.0, 2.0}, {1.0, 2.0}};
  try {
    robustness(t, RobustnessConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::DegenerateInput);
    EXPECT_NE(std::string(e.what()).find("triplet 1"), std::string::npos);
  }
}

FeatureMap map_of(std::size_t c, std::size_t h, std::size_t w, std::vector<double> values) {
  FeatureMap fm(c, h, w);
  fm.values = std::move(values);
  return fm;
}

TEST(Pool, Examples) {
  const auto a = map_of(2, 1, 1, {3.0, -4.0});
  EXPECT_EQ(pool_or_flatten(a, true), (Embedding{3.0, -4.0}));
  const auto b = map_of(1, 2, 2, {0.7, 0.7, 0.7, 0.7});
  EXPECT_NEAR(pool_or_flatten(b, true)[0], 0.7, 1e-15);
  const auto c = map_of(2, 2, 2, {1, 2, 3, 4, 5, 6, 7, 9});
  const auto pooled = pool_or_flatten(c, true);
  EXPECT_EQ(pooled, (Embedding{2.5, 6.75}));
  EXPECT_EQ(pool_or_flatten(c, false), c.values);
}

TEST(NegativePartner, TwoImagesSwap) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(negative_partner(2, seed), (std::vector<std::size_t>{1, 0}));
  }
}

TEST(NegativePartner, ThreeImagesFollowShuffle) {
  const std::uint64_t seed = 99;
  Prng rng(seed, stream_key({0x504552}));
  std::vector<std::size_t> perm{0, 1, 2};
  std::swap(perm[2], perm[rng.index(3)]);
  std::swap(perm[1], perm[rng.index(2)]);
  std::vector<std::size_t> expected(3);
  for (std::size_t p = 0; p < 3; ++p) expected[perm[p]] = perm[(p + 1) % 3];
  EXPECT_EQ(negative_partner(3, seed), expected);
}

TEST(NegativePartner, IsDerangementAndPermutation) {
  for (std::size_t n = 2; n < 40; ++n) {
    const auto p = negative_partner(n, n * 7);
    std::vector<int> hit(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NE(p[i], i);
      ++hit[p[i]];
    }
    for (int h : hit) EXPECT_EQ(h, 1);
  }
}

TEST(BuildTriplets, IdenticalImagesWithIdentityJitter) {
  std::vector<Image> images(4, Image(8, 8, 0.4));
  const auto enc = LeveledEncoder::random(3, "any");
  for (double eps : kMarginGrid) {
    RobustnessConfig cfg;
    cfg.margin = eps;
    const auto t = build_triplets(images, enc, cfg, 5, JitterParams::identity());
    EXPECT_NEAR(robustness(t, cfg), 1.0 - eps, 1e-12);
  }
}

TEST(BuildTriplets, ConstantEncoderYieldsOneMinusMargin) {
  Prng rng(1, 2);
  std::vector<Image> images;
  for (int i = 0; i < 3; ++i) {
    Image img(8, 8);
    for (auto& v : img.pixels) v = rng.uniform();
    images.push_back(img);
  }
  const auto enc = LeveledEncoder::constant(0.5);
  for (double eps : kMarginGrid) {
    RobustnessConfig cfg;
    cfg.margin = eps;
    EXPECT_NEAR(robustness(build_triplets(images, enc, cfg, 8), cfg), 1.0 - eps, 1e-12);
  }
}

TEST(BuildTriplets, DeterministicAndNegativesReusePositives) {
  Prng rng(4, 4);
  std::vector<Image> images;
  for (int i = 0; i < 5; ++i) {
    Image img(8, 8);
    for (auto& v : img.pixels) v = rng.uniform();
    images.push_back(img);
  }
  const auto enc = LeveledEncoder::random(7, "enc");
  RobustnessConfig cfg;
  const auto a = build_triplets(images, enc, cfg, 21);
  const auto b = build_triplets(images, enc, cfg, 21);
  EXPECT_EQ(a, b);
  const auto partner = negative_partner(images.size(), 21);
  for (std::size_t i = 0; i < images.size(); ++i) EXPECT_EQ(a.negatives[i], a.positives[partner[i]]);
  EXPECT_NE(a.queries[0], a.positives[0]);
}

TEST(BuildTriplets, LevelAndPooling) {
  std::vector<Image> images(2, Image(16, 16, 0.3));
  const auto enc = LeveledEncoder::random(1, "x");
  RobustnessConfig cfg;
  cfg.pooled = false;
  auto t = build_triplets(images, enc, cfg, 1);
  EXPECT_EQ(t.queries[0].size(), 32u * 4 * 4);
  cfg.level = Level::Last;
  cfg.pooled = true;
  t = build_triplets(images, enc, cfg, 1);
  EXPECT_EQ(t.queries[0].size(), 64u);
}
