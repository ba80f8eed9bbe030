#include "corpus.hpp"

#include "support.hpp"

namespace testsupport {

using namespace orthext;

namespace {

FaceInstance face(const std::vector<Point>& pts, Point seed, bool outer = false) {
  FaceInstance fi;
  fi.h = cycle_drawing(pts, std::vector<bool>(pts.size(), true));
  fi.seed = seed;
  fi.outer = outer;
  return fi;
}

/// Adds missing vertices, edges and ports; ports are (anchor, other, side).
FaceInstance with(FaceInstance fi, std::vector<VertexId> missing, std::vector<PortCandidate> ports,
                  std::vector<EdgeKey> edges, std::set<VertexId> must_bend = {}) {
  fi.missing_vertices = std::move(missing);
  fi.must_bend = std::move(must_bend);
  fi.ports = std::move(ports);
  std::sort(fi.ports.begin(), fi.ports.end());
  fi.missing_edges = std::move(edges);
  std::sort(fi.missing_edges.begin(), fi.missing_edges.end());
  return fi;
}

// 6x4 rectangle: 1 (3,0), 3 (6,2), 5 (3,4), 7 (0,2).
FaceInstance box() {
  return face({{0, 0}, {3, 0}, {6, 0}, {6, 2}, {6, 4}, {3, 4}, {0, 4}, {0, 2}}, {1, 1});
}

// 8x4 rectangle: 1 (2,0), 2 (4,0), 3 (6,0), 5 (8,2), 7 (6,4), 8 (4,4), 9 (2,4), 11 (0,2).
FaceInstance wide_box() {
  return face({{0, 0}, {2, 0}, {4, 0}, {6, 0}, {8, 0}, {8, 2}, {8, 4}, {6, 4}, {4, 4}, {2, 4}, {0, 4}, {0, 2}},
              {1, 1});
}

// L-shape: lower arm [0,6]x[0,2], upper arm [0,2]x[2,6].
// 1 (3,0), 3 (6,1), 5 (4,2), 7 (2,4), 9 (1,6), 11 (0,3).
FaceInstance ell() {
  return face({{0, 0}, {3, 0}, {6, 0}, {6, 1}, {6, 2}, {4, 2}, {2, 2}, {2, 4}, {2, 6}, {1, 6}, {0, 6}, {0, 3}},
              {1, 1});
}

// U-shape opening upwards: prongs [0,2]x[2,6] and [4,6]x[2,6] on the base [0,6]x[0,2].
// 1 (3,0), 4 (6,4), 6 (5,6), 9 (3,2), 12 (1,6), 14 (0,4), 15 (0,2).
FaceInstance cup() {
  return face({{0, 0}, {3, 0}, {6, 0}, {6, 2}, {6, 4}, {6, 6}, {5, 6}, {4, 6}, {4, 2}, {3, 2}, {2, 2}, {2, 6},
               {1, 6}, {0, 6}, {0, 4}, {0, 2}},
              {1, 1});
}

// Rectangle with a notch from the top; the part left of the notch is redundant.
// 1 (3,0), 3 (6,2), 10 (0,2).
FaceInstance notched() {
  return face({{0, 0}, {3, 0}, {6, 0}, {6, 2}, {6, 4}, {4, 4}, {4, 3}, {2, 3}, {2, 4}, {0, 4}, {0, 2}}, {1, 1});
}

// Rectangle with a step in the top right corner; the region next to the step is redundant.
// 1 (2,0), 3 (6,1), 8 (0,2).
FaceInstance stepped() {
  return face({{0, 0}, {2, 0}, {6, 0}, {6, 1}, {6, 2}, {4, 2}, {4, 4}, {0, 4}, {0, 2}}, {1, 1});
}

// Square 0..4 seen from outside: 1 (2,0), 3 (4,2), 5 (2,4), 7 (0,2).
FaceInstance square_outside() {
  return face({{0, 0}, {2, 0}, {4, 0}, {4, 2}, {4, 4}, {2, 4}, {0, 4}, {0, 2}}, {-1, -1}, true);
}

using D = Direction;

}  // namespace

const char* kind_name(CaseKind k) {
  switch (k) {
    case CaseKind::Inner: return "inner";
    case CaseKind::Outer: return "outer";
    case CaseKind::Prune: return "prune";
  }
  return "?";
}

std::vector<FaceInstance> outer_faces() {
  std::vector<FaceInstance> out;
  out.push_back(with(square_outside(), {20}, {{1, 20, D::S}}, {{1, 20}}));
  // Edges between drawn vertices reach a face instance subdivided by a must-bend vertex.
  out.push_back(with(square_outside(), {20}, {{1, 20, D::S}, {5, 20, D::N}}, {{1, 20}, {5, 20}}, {20}));
  out.push_back(with(square_outside(), {20}, {{3, 20, D::E}, {5, 20, D::N}}, {{3, 20}, {5, 20}}, {20}));
  out.push_back(with(square_outside(), {20}, {{1, 20, D::S}, {5, 20, D::N}}, {{1, 20}, {5, 20}}));
  auto l = face({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}, {-1, -1}, true);
  out.push_back(with(l, {20}, {{1, 20, D::S}, {4, 20, D::E}}, {{1, 20}, {4, 20}}));
  return out;
}

std::vector<FaceCase> handcrafted_faces() {
  std::vector<FaceCase> c;
  auto add = [&](std::string name, CaseKind kind, FaceInstance fi) { c.push_back({std::move(name), kind, std::move(fi)}); };
  using K = CaseKind;

  add("box-facing", K::Inner, with(box(), {}, {{1, 5, D::N}, {5, 1, D::S}}, {{1, 5}}));
  add("box-perpendicular", K::Inner, with(box(), {}, {{1, 3, D::N}, {3, 1, D::W}}, {{1, 3}}));
  add("box-leaf", K::Inner, with(box(), {20}, {{3, 20, D::W}}, {{3, 20}}));
  add("box-star", K::Inner,
      with(box(), {20}, {{1, 20, D::N}, {3, 20, D::W}, {5, 20, D::S}, {7, 20, D::E}},
           {{1, 20}, {3, 20}, {5, 20}, {7, 20}}));
  add("box-corner-vertex", K::Inner, with(box(), {20}, {{1, 20, D::N}, {3, 20, D::W}}, {{1, 20}, {3, 20}}));
  add("box-must-bend", K::Inner, with(box(), {20}, {{1, 20, D::N}, {5, 20, D::S}}, {{1, 20}, {5, 20}}, {20}));
  add("box-must-bend-turn", K::Inner, with(box(), {20}, {{1, 20, D::N}, {3, 20, D::W}}, {{1, 20}, {3, 20}}, {20}));
  add("box-path", K::Inner,
      with(box(), {20, 21}, {{7, 20, D::E}, {3, 21, D::W}}, {{7, 20}, {20, 21}, {3, 21}}));
  add("box-two-hubs", K::Inner,
      with(box(), {20, 21}, {{1, 20, D::N}, {7, 20, D::E}, {3, 21, D::W}, {5, 21, D::S}},
           {{1, 20}, {7, 20}, {3, 21}, {5, 21}}));
  add("box-same-side", K::Inner, with(wide_box(), {20}, {{1, 20, D::N}, {3, 20, D::N}}, {{1, 20}, {3, 20}}));
  add("box-same-side-bend", K::Inner,
      with(wide_box(), {20}, {{1, 20, D::N}, {3, 20, D::N}}, {{1, 20}, {3, 20}}, {20}));
  add("box-fork", K::Inner,
      with(wide_box(), {20, 21}, {{2, 20, D::N}, {8, 21, D::S}, {11, 20, D::E}},
           {{2, 20}, {8, 21}, {20, 21}, {11, 20}}));
  add("ell-around", K::Inner, with(ell(), {20}, {{3, 20, D::W}, {9, 20, D::S}}, {{3, 20}, {9, 20}}));
  add("ell-around-bend", K::Inner, with(ell(), {20}, {{3, 20, D::W}, {9, 20, D::S}}, {{3, 20}, {9, 20}}, {20}));
  add("ell-hidden", K::Inner, with(ell(), {20}, {{1, 20, D::N}, {7, 20, D::W}}, {{1, 20}, {7, 20}}));
  add("cup-prongs", K::Inner, with(cup(), {20}, {{6, 20, D::S}, {12, 20, D::S}}, {{6, 20}, {12, 20}}));
  add("cup-leaf", K::Inner, with(cup(), {20}, {{4, 20, D::W}}, {{4, 20}}));
  add("cup-prong-to-side", K::Inner, with(cup(), {20}, {{9, 20, D::S}, {15, 20, D::E}}, {{9, 20}, {15, 20}}));
  add("notch-corner", K::Prune, with(notched(), {20}, {{1, 20, D::N}, {3, 20, D::W}}, {{1, 20}, {3, 20}}));
  add("notch-must-bend", K::Prune,
      with(notched(), {20}, {{3, 20, D::W}, {10, 20, D::E}}, {{3, 20}, {10, 20}}, {20}));
  add("step-leaf", K::Prune, with(stepped(), {20}, {{1, 20, D::N}, {8, 20, D::E}}, {{1, 20}, {8, 20}}));
  add("step-two", K::Prune,
      with(stepped(), {20, 21}, {{1, 20, D::N}, {3, 21, D::W}, {8, 20, D::E}}, {{1, 20}, {3, 21}, {8, 20}, {20, 21}}));
  int i = 0;
  for (auto& fi : outer_faces()) add("outer-" + std::to_string(i++), K::Outer, std::move(fi));
  add("outer-around", K::Outer,
      with(square_outside(), {20}, {{3, 20, D::E}, {7, 20, D::W}}, {{3, 20}, {7, 20}}));
  return c;
}

}  // namespace testsupport
