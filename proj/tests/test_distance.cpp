#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "robsel/distance.hpp"
#include "robsel/error.hpp"

using namespace robsel;

namespace {

using V = std::vector<double>;

ErrorCategory category_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCategory::Io;
}

}  // namespace

TEST(Cosine, Examples) {
  EXPECT_NEAR(cosine_distance(V{1, 2, 3}, V{1, 2, 3}), 0.0, 1e-15);
  EXPECT_NEAR(cosine_distance(V{1, 0}, V{0, 1}), 1.0, 1e-15);
  EXPECT_NEAR(cosine_distance(V{1, 2, 3}, V{4, 5, 6}), 0.025368153802923787, 1e-15);
}

TEST(L2, Examples) {
  EXPECT_EQ(l2_distance(V{1, 2}, V{1, 2}), 0.0);
  EXPECT_NEAR(l2_distance(V{0, 0}, V{3, 4}), 5.0, 1e-15);
  EXPECT_NEAR(l2_distance(V{1, 1, 1}, V{2, 3, 4}), 3.7416573867739413, 1e-15);
}

TEST(Pearson, Examples) {
  EXPECT_NEAR(pearson_distance(V{1, 2, 3}, V{2, 4, 6}), 0.0, 1e-15);
  EXPECT_NEAR(pearson_distance(V{1, 2, 3}, V{3, 2, 1}), 2.0, 1e-15);
  EXPECT_NEAR(pearson_distance(V{1, 2, 3, 4}, V{1, 3, 2, 4}), 0.2, 1e-15);
}

TEST(Distance, Dispatch) {
  const V a{0.3, -1.0, 2.0};
  const V b{1.0, 0.5, -0.25};
  EXPECT_EQ(distance(Distance::Cosine, a, b), cosine_distance(a, b));
  EXPECT_EQ(distance(Distance::L2, a, b), l2_distance(a, b));
  EXPECT_EQ(distance(Distance::Pearson, a, b), pearson_distance(a, b));
}

TEST(Distance, Errors) {
  EXPECT_EQ(category_of([] { cosine_distance(V{1, 2}, V{1, 2, 3}); }), ErrorCategory::DimensionMismatch);
  EXPECT_EQ(category_of([] { l2_distance(V{}, V{}); }), ErrorCategory::DimensionMismatch);
  EXPECT_EQ(category_of([] { cosine_distance(V{0, 0}, V{1, 2}); }), ErrorCategory::DegenerateInput);
  EXPECT_EQ(category_of([] { pearson_distance(V{1, 1, 1}, V{1, 2, 3}); }), ErrorCategory::DegenerateInput);
  EXPECT_EQ(category_of([] { pearson_distance(V{1}, V{2}); }), ErrorCategory::DegenerateInput);
  EXPECT_EQ(category_of([] { l2_distance(V{NAN}, V{1}); }), ErrorCategory::DegenerateInput);
}

TEST(Distance, ParseNames) {
  EXPECT_EQ(parse_distance("cosine"), Distance::Cosine);
  EXPECT_EQ(parse_distance("l2"), Distance::L2);
  EXPECT_EQ(parse_distance("pearson"), Distance::Pearson);
  EXPECT_EQ(category_of([] { parse_distance("manhattan"); }), ErrorCategory::InvalidArgument);
  for (auto d : {Distance::Cosine, Distance::L2, Distance::Pearson}) EXPECT_EQ(parse_distance(to_string(d)), d);
}
