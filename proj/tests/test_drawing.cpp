#include <gtest/gtest.h>

#include "orthext/drawing.hpp"
#include "support.hpp"

using namespace orthext;

namespace {

Drawing two_vertices_l() {
  Drawing d;
  d.vertices[1] = {0, 0};
  d.vertices[2] = {2, 2};
  d.add_edge(1, 2, OrthoPolyline{{{0, 0}, {2, 0}, {2, 2}}});
  return d;
}

}  // namespace

TEST(Validate, SingleLEdgeIsValid) { EXPECT_TRUE(validate(two_vertices_l()).ok()); }

TEST(Validate, CrossingEdges) {
  Drawing d;
  d.vertices = {{1, {0, 1}}, {2, {2, 1}}, {3, {1, 0}}, {4, {1, 2}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 1}, {2, 1}}});
  d.add_edge(3, 4, OrthoPolyline{{{1, 0}, {1, 2}}});
  auto r = validate(d);
  EXPECT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.count(ViolationKind::Crossing), 1u);
}

TEST(Validate, DegreeFive) {
  Drawing d;
  d.vertices[0] = {0, 0};
  d.vertices[1] = {0, 2};
  d.vertices[2] = {2, 0};
  d.vertices[3] = {0, -2};
  d.vertices[4] = {-2, 0};
  d.vertices[5] = {3, 3};
  d.add_edge(0, 1, OrthoPolyline{{{0, 0}, {0, 2}}});
  d.add_edge(0, 2, OrthoPolyline{{{0, 0}, {2, 0}}});
  d.add_edge(0, 3, OrthoPolyline{{{0, 0}, {0, -2}}});
  d.add_edge(0, 4, OrthoPolyline{{{0, 0}, {-2, 0}}});
  d.add_edge(0, 5, OrthoPolyline{{{0, 0}, {0, 1}, {3, 1}, {3, 3}}});
  auto r = validate(d);
  EXPECT_EQ(r.count(ViolationKind::DegreeTooHigh), 1u);
}

TEST(Validate, BendOnVertexIsViolation) {
  Drawing d = two_vertices_l();
  d.vertices[3] = {2, 0};
  auto r = validate(d);
  EXPECT_EQ(r.count(ViolationKind::PassesThroughVertex), 1u);
}

TEST(Validate, CollinearInteriorPointIsBadPolyline) {
  Drawing d;
  d.vertices = {{1, {0, 0}}, {2, {2, 0}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 0}, {1, 0}, {2, 0}}});
  EXPECT_EQ(validate(d).count(ViolationKind::BadPolyline), 1u);
}

TEST(Validate, IdempotentAndPure) {
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    Drawing d = testsupport::random_drawing(rng);
    Drawing copy = d;
    auto a = validate(d);
    auto b = validate(d);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_EQ(d, copy);
  }
}

TEST(Bends, Counts) {
  Drawing d;
  d.vertices = {{1, {0, 0}}, {2, {3, 0}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 0}, {3, 0}}});
  EXPECT_EQ(count_bends(d), 0u);

  // An edge a-x drawn with three bends, as a five point polyline.
  Drawing ax;
  ax.vertices = {{1, {0, 0}}, {2, {3, 1}}};
  ax.add_edge(1, 2, OrthoPolyline{{{0, 0}, {0, 2}, {2, 2}, {2, 1}, {3, 1}}});
  EXPECT_TRUE(validate(ax).ok());
  EXPECT_EQ(count_bends(ax), 3u);

  Drawing two;
  two.vertices = {{1, {0, 0}}, {2, {2, 2}}, {3, {4, 0}}};
  two.add_edge(1, 2, OrthoPolyline{{{0, 0}, {2, 0}, {2, 2}}});
  two.add_edge(2, 3, OrthoPolyline{{{2, 2}, {4, 2}, {4, 0}}});
  EXPECT_EQ(count_bends(two, {EdgeKey(1, 2), EdgeKey(2, 3)}), 2u);
  EXPECT_EQ(count_bends(two, {EdgeKey(1, 2)}), 1u);
}

TEST(Strip, NothingAboveLine) {
  Drawing d = two_vertices_l();
  Drawing r = strip_op(d, AxisLine{false, 5}, 1, StripMode::Remove);
  EXPECT_EQ(r, d);
}

TEST(Strip, ShortensCrossedSegment) {
  Drawing d;
  d.vertices = {{1, {0, 0}}, {2, {0, 4}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 0}, {0, 4}}});
  Drawing r = strip_op(d, AxisLine{false, 1}, 2, StripMode::Remove);
  EXPECT_EQ(r.vertices.at(2), (Point{0, 2}));
  EXPECT_EQ(r.edges.at(EdgeKey(1, 2)).points.back(), (Point{0, 2}));
}

TEST(Strip, AddThenRemoveIsIdentity) {
  Drawing d = two_vertices_l();
  AxisLine l{true, 1};
  Drawing r = strip_op(strip_op(d, l, 3, StripMode::Add), l, 3, StripMode::Remove);
  EXPECT_EQ(r, d);
}

TEST(Strip, Errors) {
  Drawing d = two_vertices_l();
  try {
    strip_op(d, AxisLine{false, 0}, 1, StripMode::Remove);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LineHitsFeature);
  }
  try {
    strip_op(d, AxisLine{false, 1}, 1, StripMode::Remove);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SigmaTooLarge);
  }
}

TEST(Shape, StraightEdgeHasNoTurns) {
  Drawing d;
  d.vertices = {{1, {0, 0}}, {2, {3, 0}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 0}, {3, 0}}});
  EXPECT_EQ(shape_descriptor(d).edge_turns.at(EdgeKey(1, 2)).size(), 1u);
  EXPECT_EQ(shape_descriptor(d).edge_turns.at(EdgeKey(1, 2)), "E");
}

TEST(Shape, MirrorDiffers) {
  Drawing d = two_vertices_l();
  Drawing m;
  m.vertices = {{1, {0, 0}}, {2, {-2, 2}}};
  m.add_edge(1, 2, OrthoPolyline{{{0, 0}, {-2, 0}, {-2, 2}}});
  EXPECT_NE(shape_descriptor(d), shape_descriptor(m));
  // The turn at the single bend goes left in one drawing and right in the other.
  EXPECT_EQ(shape_descriptor(d).edge_turns.at(EdgeKey(1, 2)), "EN");
  EXPECT_EQ(shape_descriptor(m).edge_turns.at(EdgeKey(1, 2)), "WN");
}

TEST(Shape, StripImageHasEqualDescriptor) {
  Drawing d = two_vertices_l();
  Drawing r = strip_op(d, AxisLine{true, 1}, 5, StripMode::Add);
  EXPECT_EQ(shape_descriptor(d), shape_descriptor(r));
}

TEST(Strip, RandomOperationsPreserveShape) {
  std::mt19937 rng(99);
  int ok = 0;
  for (int i = 0; i < 200; ++i) {
    Drawing d = testsupport::random_drawing(rng);
    ASSERT_TRUE(validate(d).ok()) << validate(d).str();
    // Features sit on even coordinates, so odd lines never contain one.
    AxisLine l{rng() % 2 == 0, Rat(2 * static_cast<int>(rng() % 10) - 1)};
    StripMode mode = rng() % 2 ? StripMode::Add : StripMode::Remove;
    Rat sigma(1 + static_cast<int>(rng() % 5));
    if (mode == StripMode::Remove) {
      auto lim = removal_limit(d, l);
      if (lim) sigma = *lim * Rat(1 + static_cast<int>(rng() % 9), 10);
    }
    Drawing r = strip_op(d, l, sigma, mode);
    bool good = validate(r).ok() && shape_descriptor(r) == shape_descriptor(d);
    for (const auto& [k, line] : d.edges) good = good && r.edges.at(k).bends() == line.bends();
    EXPECT_TRUE(good) << "iteration " << i;
    ok += good;
  }
  EXPECT_EQ(ok, 200);
}

TEST(Compress, EmptySelectionUnchanged) {
  Drawing d = two_vertices_l();
  EXPECT_THROW(Selection::make(d, {5, 5}, {6, 6}), Error);
  Selection sel{{5, 5}, {6, 6}, SelectionKind::V, AxisSegment({5, 5}, {5, 6})};
  EXPECT_EQ(compress_selection(d, sel, Rat(1, 10)), d);
}

TEST(Compress, ThreeColumnsFitInEps) {
  // Edge enters the box through its left side and carries feature columns at x = 4, 6, 8.
  Drawing d;
  d.vertices = {{1, {0, 2}}, {2, {8, 4}}, {3, {20, 0}}, {4, {20, 10}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 2}, {4, 2}, {4, 3}, {6, 3}, {6, 4}, {8, 4}}});
  d.add_edge(3, 4, OrthoPolyline{{{20, 0}, {20, 10}}});
  ASSERT_TRUE(validate(d).ok());
  auto sel = Selection::make(d, {2, 1}, {10, 5});
  ASSERT_EQ(sel.kind, SelectionKind::V);
  Drawing r = compress_selection(d, sel, 1);
  EXPECT_TRUE(validate(r).ok());
  EXPECT_EQ(shape_descriptor(r), shape_descriptor(d));
  EXPECT_EQ(count_bends(r), count_bends(d));
  Rat lo = r.vertices.at(2).x, hi = lo;
  for (const auto& p : r.edges.at(EdgeKey(1, 2)).points) {
    if (p.x <= Rat(2)) continue;
    lo = min(lo, p.x);
    hi = max(hi, p.x);
  }
  EXPECT_LE(hi - Rat(2), Rat(1));
  // Heights are untouched by a v-selection compression.
  EXPECT_EQ(r.vertices.at(2).y, Rat(4));
}

TEST(Compress, AlreadyNarrowUnchanged) {
  Drawing d;
  d.vertices = {{1, {0, 2}}, {2, {3, 2}}};
  d.add_edge(1, 2, OrthoPolyline{{{0, 2}, {3, 2}}});
  auto sel = Selection::make(d, {2, 1}, {4, 5});
  Drawing r = compress_selection(d, sel, 5);
  EXPECT_EQ(r, d);
}

TEST(Compress, RandomSelectionsPreserveShape) {
  std::mt19937 rng(41);
  int ok = 0, tried = 0;
  while (tried < 200) {
    Drawing d = testsupport::random_drawing(rng);
    // Random box with odd coordinates; keep only those with exactly one crossed side.
    auto c = [&] { return Rat(2 * static_cast<int>(rng() % 12) - 1); };
    Rat x0 = c(), x1 = c(), y0 = c(), y1 = c();
    if (x0 >= x1 || y0 >= y1) continue;
    std::optional<Selection> sel;
    try {
      sel = Selection::make(d, {x0, y0}, {x1, y1});
    } catch (const Error&) {
      continue;
    }
    ++tried;
    Rat eps(1, 1 + static_cast<int>(rng() % 4));
    Drawing r = compress_selection(d, *sel, eps);
    bool good = validate(r).ok() && shape_descriptor(r) == shape_descriptor(d);
    for (const auto& [k, line] : d.edges) good = good && r.edges.at(k).bends() == line.bends();
    EXPECT_TRUE(good) << "case " << tried;
    ok += good;
  }
  EXPECT_EQ(ok, 200);
}
