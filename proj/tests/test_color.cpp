#include <gtest/gtest.h>

#include "robsel/color.hpp"
#include "robsel/prng.hpp"

using namespace robsel;

TEST(Hsv, PrimaryRed) {
  const Hsv h = rgb_to_hsv(Rgb{1.0, 0.0, 0.0});
  EXPECT_EQ(h[0], 0.0);
  EXPECT_EQ(h[1], 1.0);
  EXPECT_EQ(h[2], 1.0);
}

TEST(Hsv, GrayHasZeroHueAndSaturation) {
  for (double g : {0.0, 0.3, 1.0}) {
    const Hsv h = rgb_to_hsv(Rgb{g, g, g});
    EXPECT_EQ(h[0], 0.0);
    EXPECT_EQ(h[1], 0.0);
    EXPECT_EQ(h[2], g);
  }
}

TEST(Hsv, KnownValues) {
  // colorsys.rgb_to_hsv(0.2, 0.5, 0.8)
  const Hsv h = rgb_to_hsv(Rgb{0.2, 0.5, 0.8});
  EXPECT_NEAR(h[0], 0.5833333333333334, 1e-15);
  EXPECT_NEAR(h[1], 0.75, 1e-15);
  EXPECT_NEAR(h[2], 0.8, 1e-15);
  const Rgb g = hsv_to_rgb(Hsv{1.0 / 3.0, 1.0, 1.0});
  EXPECT_NEAR(g[0], 0.0, 1e-15);
  EXPECT_NEAR(g[1], 1.0, 1e-15);
  EXPECT_NEAR(g[2], 0.0, 1e-15);
}

TEST(Hsv, RoundTrip) {
  const Rgb back = hsv_to_rgb(rgb_to_hsv(Rgb{0.2, 0.5, 0.8}));
  EXPECT_NEAR(back[0], 0.2, 1e-6);
  EXPECT_NEAR(back[1], 0.5, 1e-6);
  EXPECT_NEAR(back[2], 0.8, 1e-6);
  Prng rng(6, 6);
  for (int i = 0; i < 10000; ++i) {
    const Rgb c{rng.uniform(), rng.uniform(), rng.uniform()};
    const Hsv h = rgb_to_hsv(c);
    ASSERT_GE(h[0], 0.0);
    ASSERT_LT(h[0], 1.0);
    const Rgb r = hsv_to_rgb(h);
    for (int k = 0; k < 3; ++k) ASSERT_NEAR(r[k], c[k], 1e-12);
  }
}

TEST(Hsv, ImageConversions) {
  Image img(1, 2);
  img.pixels = {1.0, 0.0, 0.0, 0.2, 0.5, 0.8};
  const Image hsv = rgb_to_hsv(img);
  EXPECT_EQ(hsv.at(0, 0, 1), 1.0);
  const Image back = hsv_to_rgb(hsv);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) EXPECT_NEAR(back.pixels[i], img.pixels[i], 1e-12);
}
