#include <gtest/gtest.h>

#include "orthext/complex.hpp"
#include "support.hpp"

using namespace orthext;

namespace {

Drawing l_shape() {
  return testsupport::polygon_drawing(RectPolygon({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}));
}

}  // namespace

TEST(ElementGrid, IndexingAndLocate) {
  ElementGrid g({Rat(0), Rat(2), Rat(1)}, {Rat(0), Rat(3)});
  EXPECT_EQ(g.ni(), 5);
  EXPECT_EQ(g.nj(), 3);
  EXPECT_EQ(*g.column_of(Rat(1)), 2);
  EXPECT_EQ(*g.column_of(Rat(1, 2)), 1);
  EXPECT_FALSE(g.column_of(Rat(3)).has_value());
  auto e = *g.locate({Rat(3, 2), Rat(1)});
  EXPECT_EQ(g.dim(e), 2);
  EXPECT_EQ(g.rep(e), (Point{Rat(3, 2), Rat(3, 2)}));
  EXPECT_FALSE(g.step(g.id(0, 0), Direction::W).has_value());
  EXPECT_EQ(*g.step(g.id(0, 0), Direction::N), g.id(0, 1));
}

TEST(Region, UnitSquareInterior) {
  auto d = testsupport::polygon_drawing(RectPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  auto r = build_region(d, {Rat(1, 2), Rat(1, 2)});
  EXPECT_TRUE(r.bounded);
  EXPECT_EQ(r.inside_elements().size(), 1u);
  EXPECT_TRUE(reflex_corners(r, d, {}).empty());
}

TEST(Region, LShapeReflexCorner) {
  auto d = l_shape();
  auto r = build_region(d, {1, 1});
  EXPECT_TRUE(r.bounded);
  auto rc = reflex_corners(r, d, {});
  ASSERT_EQ(rc.size(), 1u);
  EXPECT_EQ(rc[0].point, (Point{2, 2}));
  EXPECT_GE(rc[0].vertex, 0);
  EXPECT_FALSE(rc[0].essential);
  ASSERT_EQ(rc[0].projections.size(), 2u);
  std::set<Point> ends;
  for (const auto& s : rc[0].projections) ends.insert(s.b());
  EXPECT_TRUE(ends.count({2, 0}));
  EXPECT_TRUE(ends.count({0, 2}));
  auto ess = reflex_corners(r, d, {rc[0].vertex});
  EXPECT_TRUE(ess[0].essential);
}

TEST(Region, OuterFaceWithPadding) {
  auto d = l_shape();
  auto r = build_region(d, {-1, -1}, {}, {}, true);
  EXPECT_FALSE(r.bounded);
  auto rc = reflex_corners(r, d, {});
  EXPECT_EQ(rc.size(), 5u);
  EXPECT_THROW(build_region(d, {2, 2}), Error);
}

TEST(Region, ElementCountBound) {
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto poly = testsupport::random_polygon(rng, 6, 6, 12);
    auto d = testsupport::polygon_drawing(poly);
    Point inner;
    bool found = false;
    for (int x = 0; x < 12 && !found; ++x)
      for (int y = 0; y < 12 && !found; ++y) {
        Point p{Rat(2 * x + 1, 2), Rat(2 * y + 1, 2)};
        if (point_in_polygon(p, poly) == Location::Interior) inner = p, found = true;
      }
    ASSERT_TRUE(found);
    auto r = build_region(d, inner);
    ASSERT_TRUE(r.bounded);
    auto x = static_cast<std::size_t>(d.feature_points().size());
    EXPECT_LE(r.inside_elements().size(), (2 * x + 1) * (2 * x + 1));
    auto rc = reflex_corners(r, d, {});
    EXPECT_EQ(rc.size(), (poly.size() - 4) / 2);
    for (const auto& c : rc) EXPECT_GE(c.projections.size(), 1u);
  }
}
