#include <gtest/gtest.h>

#include "orthext/oracle.hpp"
#include "orthext/sectors.hpp"
#include "support.hpp"

using namespace orthext;

namespace {

RectPolygon rect(int w, int h) { return RectPolygon({{0, 0}, {w, 0}, {w, h}, {0, h}}); }

/// Rectangle 4x2 with a vertex in the middle of the top side and a port pointing down.
FaceInstance rect_top_port() {
  std::vector<Point> pts = {{0, 0}, {4, 0}, {4, 2}, {2, 2}, {0, 2}};
  FaceInstance fi;
  fi.h = testsupport::cycle_drawing(pts, {true, true, true, true, true});
  fi.seed = {1, 1};
  fi.missing_vertices = {10};
  fi.ports = {{3, 10, Direction::S}};
  fi.missing_edges = {{3, 10}};
  return fi;
}

SectorDecomposition decompose(const FaceInstance& fi, std::size_t prefix = 1000) {
  std::vector<PortCandidate> ports(fi.ports.begin(), fi.ports.begin() + static_cast<long>(std::min(prefix, fi.ports.size())));
  return decompose_sectors(build_complex(fi).region, fi.h, ports);
}

void expect_oracle_match(const FaceInstance& fi) {
  auto c = build_complex(fi);
  const auto& g = c.grid();
  std::vector<Point> reps;
  for (int e : c.region.inside_elements()) reps.push_back(g.rep(e));
  auto fine = FineGrid::build(fi, 3, reps);
  for (const auto& port : fi.ports) {
    const auto& anchor = fi.h.vertices.at(port.anchor);
    auto field = bend_field(c.region, anchor, port);
    BdistOracle oracle(fine, anchor, port.side);
    for (int e : c.region.inside_elements()) ASSERT_EQ(field.at(e), oracle.at(g.rep(e))) << g.rep(e);
  }
}

}  // namespace

TEST(Formula, SubgridSize) {
  EXPECT_EQ(subgridsize(1), 399);
  EXPECT_EQ(subgridsize(2), 1874);
}

TEST(BendField, RectangleTopPort) {
  auto fi = rect_top_port();
  auto c = build_complex(fi);
  auto f = bend_field(c.region, {2, 2}, fi.ports[0]);
  const auto& g = c.grid();
  for (int e : c.region.inside_elements()) {
    auto p = g.rep(e);
    EXPECT_EQ(f.at(e), p.x == 2 ? 0 : 1) << p;
  }
  EXPECT_EQ(oracle_bdist(fi, {2, Rat(1, 3)}, fi.ports[0]), 0);
  EXPECT_EQ(oracle_bdist(fi, {Rat(1, 2), Rat(1, 3)}, fi.ports[0]), 1);
  EXPECT_EQ(oracle_bdist(fi, {0, 1}, fi.ports[0]), kInfDist);
}

TEST(BendField, LShapeHiddenArm) {
  // Port at the top of the vertical arm pointing down; the far end of the horizontal arm needs 2 bends?
  // Here the horizontal arm is seen from the vertical ray after one bend, so take a U shape.
  std::vector<Point> pts = {{0, 0}, {6, 0}, {6, 4}, {4, 4}, {4, 2}, {2, 2}, {2, 4}, {1, 4}, {0, 4}};
  FaceInstance fi;
  fi.h = testsupport::cycle_drawing(pts, std::vector<bool>(pts.size(), true));
  fi.seed = {1, 1};
  fi.missing_vertices = {20};
  fi.ports = {{7, 20, Direction::S}};
  fi.missing_edges = {{7, 20}};
  auto c = build_complex(fi);
  auto f = bend_field(c.region, {1, 4}, fi.ports[0]);
  auto far = *c.grid().locate({5, 3});
  EXPECT_EQ(f.at(far), 2);
  EXPECT_EQ(oracle_bdist(fi, {5, 3}, fi.ports[0]), 2);
  expect_oracle_match(fi);
}

TEST(BendField, PortBlocked) {
  auto fi = rect_top_port();
  auto c = build_complex(fi);
  EXPECT_THROW(bend_field(c.region, {2, 2}, {3, 10, Direction::N}), Error);
}

TEST(BendField, MatchesOracleOnRandomFaces) {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) expect_oracle_match(testsupport::random_face(rng, 1 + t % 3));
}

TEST(Sectors, RectangleOnePort) {
  auto fi = rect_top_port();
  auto dec = decompose(fi);
  ASSERT_EQ(dec.sectors.size(), 3u);
  EXPECT_TRUE(dec.graph.is_tree());
  int degenerate = 0;
  for (const auto& s : dec.sectors) {
    degenerate += s.degenerate == Degeneracy::Segment;
    EXPECT_EQ(local_maxima(dec, s.id), 1);
  }
  EXPECT_EQ(degenerate, 1);
}

TEST(Sectors, NoPortsSingleSector) {
  auto fi = testsupport::polygon_face(rect(3, 2), {});
  auto dec = decompose(fi);
  EXPECT_EQ(dec.sectors.size(), 1u);
  EXPECT_EQ(dec.sectors[0].xi_max, 1);
}

TEST(Histogram, LocalMaxima) {
  EXPECT_EQ(count_local_maxima({2, 2, 2}), 1);
  EXPECT_EQ(count_local_maxima({1, 3, 2, 4, 4, 1, 5, 2, 6, 1, 3, 2, 7}), 6);
  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> hs;
    int n = 1 + static_cast<int>(rng() % 12);
    for (int a = 0; a < n; ++a) hs.push_back(1 + static_cast<int>(rng() % 5));
    EXPECT_EQ(count_local_maxima(hs), count_local_minima(hs) + 1);
  }
}

TEST(Sectors, RandomInvariants) {
  std::mt19937 rng(5);
  for (int t = 0; t < 40; ++t) {
    auto fi = testsupport::random_face(rng, 1 + t % 4);
    auto c = build_complex(fi);
    auto dec = decompose(fi);
    auto x = c.feature_count;
    EXPECT_LE(static_cast<int>(dec.sectors.size()), 9 * x * x);
    EXPECT_TRUE(dec.graph.connected());
    if (fi.ports.size() == 1) EXPECT_TRUE(dec.graph.is_tree());
    int k = fi.k();
    for (const auto& s : dec.sectors) {
      EXPECT_TRUE(s.has_baseline);
      EXPECT_LE(s.xi_max, static_cast<int>(fi.ports.size()));
    }
    auto crit = critical_corners(dec, reflex_corners(c.region, fi.h, fi.anchors()));
    for (const auto& per : crit)
      for (const auto& list : per) EXPECT_LE(static_cast<int>(list.size()), 4 * k);
    auto ref = refine_subsectors(dec, crit);
    for (const auto& subs : ref.of_sector) EXPECT_LE(static_cast<int>(subs.size()), 64 * k * k);
    auto grid = sector_grid(dec, ref, 3);
    for (const auto& v : ref.subsectors) {
      for (const auto& p : grid.points[static_cast<std::size_t>(v.id)]) {
        auto e = c.grid().locate(p);
        ASSERT_TRUE(e.has_value());
        // Grid points share the open element of the center, which lies in the subsector.
        EXPECT_EQ(*c.grid().locate(grid.center[static_cast<std::size_t>(v.id)]), *e);
        EXPECT_EQ(ref.subsector_of[static_cast<std::size_t>(*e)], v.id);
      }
    }
  }
}

TEST(Sectors, PrefixRefinement) {
  std::mt19937 rng(9);
  for (int t = 0; t < 30; ++t) {
    auto fi = testsupport::random_face(rng, 2 + t % 3);
    for (std::size_t q = 1; q < fi.ports.size(); ++q) {
      auto parent = decompose(fi, q);
      auto child = decompose(fi, q + 1);
      std::map<int, std::set<int>> kids;
      for (const auto& s : child.sectors) {
        std::set<int> owners;
        for (int e : s.elements) owners.insert(parent.sector_of[static_cast<std::size_t>(e)]);
        ASSERT_EQ(owners.size(), 1u);
        kids[*owners.begin()].insert(s.id);
      }
      for (const auto& [f, ch] : kids) {
        const auto& ps = parent.sectors[static_cast<std::size_t>(f)];
        EXPECT_LE(static_cast<int>(ch.size()), 4 + ps.xi_max);
        int lo = kInfDist, hi = 0;
        for (int s : ch) {
          int b = child.sectors[static_cast<std::size_t>(s)].bvect.back();
          lo = std::min(lo, b), hi = std::max(hi, b);
          EXPECT_LE(child.sectors[static_cast<std::size_t>(s)].xi_max, ps.xi_max);
        }
        EXPECT_LE(hi - lo, 3);
      }
    }
  }
}
