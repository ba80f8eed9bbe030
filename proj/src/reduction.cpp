#include "orthext/reduction.hpp"

#include <algorithm>
#include <functional>

namespace orthext {

namespace {

FaceRegion region_of(const FaceInstance& fi) { return build_region(fi.h, fi.seed, {}, {}, fi.outer); }

/// Components of the inside elements that are not blocked.
std::vector<std::vector<int>> inside_components(const FaceRegion& r, const std::vector<char>& blocked) {
  const auto& g = r.grid;
  std::vector<int> comp(static_cast<std::size_t>(g.size()), -1);
  std::vector<std::vector<int>> out;
  for (int e = 0; e < g.size(); ++e) {
    if (!r.in(e) || blocked[static_cast<std::size_t>(e)] || comp[static_cast<std::size_t>(e)] >= 0) continue;
    out.emplace_back();
    std::vector<int> stack = {e};
    comp[static_cast<std::size_t>(e)] = static_cast<int>(out.size()) - 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      out.back().push_back(x);
      for (Direction d : kDirections) {
        auto n = g.step(x, d);
        if (!n || !r.in(*n) || blocked[static_cast<std::size_t>(*n)] || comp[static_cast<std::size_t>(*n)] >= 0) continue;
        comp[static_cast<std::size_t>(*n)] = comp[static_cast<std::size_t>(e)];
        stack.push_back(*n);
      }
    }
  }
  return out;
}

bool on_border(const ElementGrid& g, int e) {
  int i = g.i_of(e), j = g.j_of(e);
  return i == 0 || j == 0 || i == g.ni() - 1 || j == g.nj() - 1;
}

/// First element of every port ray.
std::vector<int> port_starts(const FaceRegion& r, const FaceInstance& fi) {
  std::vector<int> out;
  for (const auto& p : fi.ports) {
    auto a = r.grid.locate(fi.h.vertices.at(p.anchor));
    if (!a) continue;
    if (auto s = r.grid.step(*a, p.side)) out.push_back(*s);
  }
  return out;
}

RectPolygon bounding_rectangle(const ElementGrid& g, const std::vector<int>& elements) {
  Rat x0 = g.xs().back(), x1 = g.xs().front(), y0 = g.ys().back(), y1 = g.ys().front();
  for (int e : elements) {
    int i = g.i_of(e), j = g.j_of(e);
    x0 = min(x0, g.xs()[static_cast<std::size_t>(i / 2)]);
    x1 = max(x1, g.xs()[static_cast<std::size_t>((i + 1) / 2)]);
    y0 = min(y0, g.ys()[static_cast<std::size_t>(j / 2)]);
    y1 = max(y1, g.ys()[static_cast<std::size_t>((j + 1) / 2)]);
  }
  return RectPolygon::rectangle(x0, y0, x1, y1);
}

Point cell_point(const ElementGrid& g, const std::vector<int>& elements) {
  for (int e : elements)
    if (g.dim(e) == 2) return g.rep(e);
  return g.rep(elements.front());
}

struct Split {
  std::vector<int> line;  ///< open elements of the projection
  std::vector<std::vector<int>> parts;
};

Split split_at(const FaceRegion& r, const ReflexCorner& rc, Direction d) {
  Split s;
  s.line = r.ray(rc.element, d);
  std::vector<char> blocked(static_cast<std::size_t>(r.grid.size()), 0);
  for (int e : s.line) blocked[static_cast<std::size_t>(e)] = 1;
  s.parts = inside_components(r, blocked);
  return s;
}

/// Existing vertex at p, or a new dummy subdividing the edge through p.
VertexId vertex_at(FaceInstance& fi, const Point& p) {
  for (const auto& [id, q] : fi.h.vertices)
    if (q == p) return id;
  auto e = edge_through(fi.h, p);
  if (!e) throw Error(ErrorCode::InvalidCut, "projection end is not on the drawing");
  VertexId id = fi.fresh_id();
  subdivide_edge(fi.h, *e, p, id);
  fi.dummies.insert(id);
  return id;
}

/// Drops edges not bounding the marked face and isolated non-anchor vertices.
void restrict_to_face(FaceInstance& fi) {
  auto r = region_of(fi);
  const auto& g = r.grid;
  auto anchors = fi.anchors();
  std::map<EdgeKey, OrthoPolyline> keep;
  for (const auto& [key, line] : fi.h.edges) {
    bool adjacent = false;
    for (const auto& s : line.segments()) {
      int i0 = *g.column_of(s.lo().x), i1 = *g.column_of(s.hi().x);
      int j0 = *g.row_of(s.lo().y), j1 = *g.row_of(s.hi().y);
      for (int i = i0; i <= i1 && !adjacent; ++i)
        for (int j = j0; j <= j1 && !adjacent; ++j) {
          int e = g.id(i, j);
          if (g.dim(e) != 1) continue;
          for (Direction d : kDirections) {
            auto n = g.step(e, d);
            if (n && r.in(*n)) adjacent = true;
          }
        }
    }
    if (adjacent) keep.emplace(key, line);
  }
  fi.h.edges = std::move(keep);
  for (auto it = fi.h.vertices.begin(); it != fi.h.vertices.end();) {
    if (fi.h.degree(it->first) == 0 && !anchors.count(it->first)) {
      fi.dummies.erase(it->first);
      it = fi.h.vertices.erase(it);
    } else {
      ++it;
    }
  }
}

void sort_ports(std::vector<PortCandidate>& ports) {
  std::sort(ports.begin(), ports.end(), [](const PortCandidate& a, const PortCandidate& b) {
    return std::tie(a.anchor, a.other, a.side) < std::tie(b.anchor, b.other, b.side);
  });
}

/// Replaces edge e by `pieces` (ordered from e.u) inside every chain that contains it, or
/// records a new chain for e.
void splice_chain(std::map<EdgeKey, std::vector<EdgeKey>>& chains, const EdgeKey& e, const std::vector<EdgeKey>& pieces) {
  for (auto& [orig, list] : chains) {
    auto it = std::find(list.begin(), list.end(), e);
    if (it == list.end()) continue;
    VertexId cur = orig.u;
    for (auto jt = list.begin(); jt != it; ++jt) cur = jt->other(cur);
    std::vector<EdgeKey> ins = pieces;
    if (cur != e.u) std::reverse(ins.begin(), ins.end());
    it = list.erase(it);
    list.insert(it, ins.begin(), ins.end());
    return;
  }
  chains[e] = pieces;
}

}  // namespace

int projection_count(const FaceInstance& fi) {
  auto r = region_of(fi);
  int n = 0;
  for (const auto& rc : reflex_corners(r, fi.h, fi.anchors())) n += static_cast<int>(rc.projections.size());
  return n;
}

std::optional<RedundantRegion> find_redundant_region(const FaceInstance& fi) {
  auto r = region_of(fi);
  const auto& g = r.grid;
  auto starts = port_starts(r, fi);
  for (const auto& rc : reflex_corners(r, fi.h, fi.anchors())) {
    if (rc.essential) continue;
    for (std::size_t k = 0; k < rc.directions.size(); ++k) {
      auto s = split_at(r, rc, rc.directions[k]);
      if (s.parts.size() != 2) continue;
      bool port_on_line = std::any_of(s.line.begin(), s.line.end(), [&](int e) {
        return std::find(starts.begin(), starts.end(), e) != starts.end();
      });
      if (port_on_line) continue;
      for (std::size_t side = 0; side < 2; ++side) {
        const auto& part = s.parts[side];
        if (std::any_of(part.begin(), part.end(), [&](int e) { return on_border(g, e); }) && !r.bounded) continue;
        bool entered = std::any_of(starts.begin(), starts.end(), [&](int e) {
          return std::find(part.begin(), part.end(), e) != part.end();
        });
        if (entered) continue;
        FaceRegion sub = r;
        std::fill(sub.inside.begin(), sub.inside.end(), 0);
        for (int e : part) sub.inside[static_cast<std::size_t>(e)] = 1;
        for (int e : s.line) sub.wall[static_cast<std::size_t>(e)] = 1;
        if (!reflex_corners(sub, fi.h, {}).empty()) continue;
        return RedundantRegion{rc, rc.directions[k], rc.projections[k], bounding_rectangle(g, part),
                               cell_point(g, s.parts[1 - side])};
      }
    }
  }
  return std::nullopt;
}

FaceInstance prune(const FaceInstance& fi, const RedundantRegion& r) {
  FaceInstance out = fi;
  VertexId p = vertex_at(out, r.projection.a());
  VertexId u = vertex_at(out, r.projection.b());
  if (out.h.edges.count({p, u})) throw Error(ErrorCode::InvalidCut, "projection duplicates an edge");
  out.h.add_edge(p, u, OrthoPolyline{{r.projection.a(), r.projection.b()}});
  out.seed = r.keep;
  restrict_to_face(out);
  return out;
}

FaceInstance make_clean(const FaceInstance& fi, int* steps) {
  FaceInstance cur = fi;
  const int limit = 3 * static_cast<int>(reflex_corners(region_of(fi), fi.h, fi.anchors()).size());
  int n = 0;
  while (auto r = find_redundant_region(cur)) {
    int before = projection_count(cur);
    cur = prune(cur, *r);
    if (projection_count(cur) >= before)
      throw Error(ErrorCode::InternalInconsistency, "pruning did not reduce the number of projections");
    if (++n > limit) throw Error(ErrorCode::InternalInconsistency, "pruning exceeded its step bound");
  }
  if (steps) *steps = n;
  return cur;
}

bool is_clean(const FaceInstance& fi) {
  auto r = region_of(fi);
  const auto& g = r.grid;
  auto starts = port_starts(r, fi);
  for (const auto& rc : reflex_corners(r, fi.h, fi.anchors())) {
    if (rc.essential) continue;
    for (Direction d : rc.directions) {
      auto s = split_at(r, rc, d);
      if (s.parts.size() != 2) continue;
      // A port ray along the projection borders both parts.
      bool port_on_line = std::any_of(s.line.begin(), s.line.end(), [&](int e) {
        return std::find(starts.begin(), starts.end(), e) != starts.end();
      });
      if (port_on_line) continue;
      for (const auto& part : s.parts) {
        if (!r.bounded && std::any_of(part.begin(), part.end(), [&](int e) { return on_border(g, e); })) continue;
        bool entered = std::any_of(starts.begin(), starts.end(), [&](int e) {
          return std::find(part.begin(), part.end(), e) != part.end();
        });
        if (!entered) return false;
      }
    }
  }
  return true;
}

FaceInstance frame_outer(const FaceInstance& fi) {
  if (!fi.outer) throw Error(ErrorCode::InvalidArgument, "only the outer face is framed");
  auto pts = fi.h.feature_points();
  if (pts.empty()) throw Error(ErrorCode::InvalidArgument, "empty drawing");
  Rat x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const auto& p : pts) x0 = min(x0, p.x), x1 = max(x1, p.x), y0 = min(y0, p.y), y1 = max(y1, p.y);
  Rat span = max(max(x1 - x0, y1 - y0), Rat(1));
  FaceInstance out = fi;
  VertexId id = fi.fresh_id();
  std::vector<Point> c = {{x0 - span, y0 - span}, {x1 + span, y0 - span}, {x1 + span, y1 + span}, {x0 - span, y1 + span}};
  for (int a = 0; a < 4; ++a) {
    out.h.vertices[id + a] = c[static_cast<std::size_t>(a)];
    out.dummies.insert(id + a);
  }
  for (int a = 0; a < 4; ++a)
    out.h.add_edge(id + a, id + (a + 1) % 4, OrthoPolyline{{c[static_cast<std::size_t>(a)], c[static_cast<std::size_t>((a + 1) % 4)]}});
  out.outer = false;
  out.seed = {x0 - span / 2, y0 - span / 2};
  return out;
}

int cut_slots(int k) { return 4 * k * (k + 1); }

CutLine choose_cut(const FaceInstance& framed) {
  auto pts = framed.h.feature_points();
  Rat top = pts[0].y, bottom = pts[0].y, left = pts[0].x, right = pts[0].x;
  for (const auto& p : pts) top = max(top, p.y), bottom = min(bottom, p.y), left = min(left, p.x), right = max(right, p.x);
  auto in_hole = [&](const Point& p) { return p.y < top && p.y > bottom && p.x > left && p.x < right; };
  std::optional<Rat> ytop;
  for (const auto& p : pts)
    if (in_hole(p)) ytop = ytop ? max(*ytop, p.y) : p.y;
  if (!ytop) throw Error(ErrorCode::NoCutLine, "framed instance has no hole");
  std::optional<AxisSegment> seg;
  for (const auto& [_, line] : framed.h.edges)
    for (const auto& s : line.segments())
      if (s.horizontal() && s.a().y == *ytop && in_hole(s.a()) && (!seg || s.lo().x < seg->lo().x)) seg = s;
  auto top_edge_at = [&](const Rat& x) {
    auto e = edge_through(framed.h, {x, top});
    if (!e) throw Error(ErrorCode::NoCutLine, "frame top not found");
    return *e;
  };
  int slots = cut_slots(framed.k());
  if (seg) {
    Rat a = seg->lo().x, next = seg->hi().x;
    for (const auto& p : pts)
      if (p.x > a && p.x < next) next = p.x;
    Rat x = (a + next) / 2;
    Point b{x, *ytop};
    CutLine c{AxisSegment(b, {x, top}), edge_through(framed.h, b), std::nullopt, top_edge_at(x), slots};
    return c;
  }
  for (const auto& [id, p] : framed.h.vertices) {
    if (!in_hole(p) || p.y != *ytop) continue;
    if (framed.h.ports(id).count(Direction::N)) continue;
    bool used = std::any_of(framed.ports.begin(), framed.ports.end(),
                            [&](const PortCandidate& q) { return q.anchor == id && q.side == Direction::N; });
    if (used) continue;
    return CutLine{AxisSegment(p, {p.x, top}), std::nullopt, id, top_edge_at(p.x), slots};
  }
  throw Error(ErrorCode::NoCutLine, "no admissible cut segment");
}

std::vector<FaceInstance> enumerate_cut_branches(const FaceInstance& framed, std::size_t max_branches) {
  auto cut = choose_cut(framed);
  FaceInstance base = framed;
  const Point b = cut.zeta.a(), t = cut.zeta.b();
  VertexId vb = cut.bottom_vertex ? *cut.bottom_vertex : base.fresh_id();
  if (!cut.bottom_vertex) {
    subdivide_edge(base.h, *cut.bottom_edge, b, vb);
    base.dummies.insert(vb);
  }
  VertexId vt = base.fresh_id();
  subdivide_edge(base.h, cut.top_edge, t, vt);
  base.dummies.insert(vt);

  const auto edges = framed.missing_edges;
  const int per_edge = std::max(framed.k(), 1);
  std::vector<std::vector<int>> sequences;
  std::vector<int> seq, count(edges.size(), 0);
  std::function<void()> grow = [&]() {
    sequences.push_back(seq);
    if (static_cast<int>(seq.size()) == cut.slots) return;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (count[e] == per_edge) continue;
      ++count[e];
      seq.push_back(static_cast<int>(e));
      grow();
      seq.pop_back();
      --count[e];
    }
  };
  grow();
  std::stable_sort(sequences.begin(), sequences.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });

  std::vector<FaceInstance> out;
  for (const auto& sq : sequences) {
    std::vector<std::size_t> used;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (std::find(sq.begin(), sq.end(), static_cast<int>(e)) != sq.end()) used.push_back(e);
    // Two bits per crossing edge: traversal order along the cut and arrival side.
    const std::size_t choices = std::size_t{1} << (2 * used.size());
    for (std::size_t mask = 0; mask < choices; ++mask) {
      bool redundant = false;
      for (std::size_t a = 0; a < used.size(); ++a) {
        int q = static_cast<int>(std::count(sq.begin(), sq.end(), static_cast<int>(used[a])));
        if (q == 1 && ((mask >> (2 * a)) & 1)) redundant = true;
      }
      if (redundant) continue;
      if (out.size() == max_branches) throw Error(ErrorCode::GuardExceeded, "too many cut branches");
      FaceInstance fi = base;
      const Rat height = t.y - b.y;
      std::vector<VertexId> z;
      for (std::size_t s = 0; s < sq.size(); ++s) {
        VertexId id = fi.fresh_id();
        fi.h.vertices[id] = {b.x, b.y + height * Rat(static_cast<long long>(s) + 1, cut.slots + 1)};
        fi.dummies.insert(id);
        z.push_back(id);
      }
      std::vector<VertexId> column = {vb};
      column.insert(column.end(), z.begin(), z.end());
      column.push_back(vt);
      for (std::size_t s = 0; s + 1 < column.size(); ++s)
        fi.h.add_edge(column[s], column[s + 1], OrthoPolyline{{fi.h.vertices.at(column[s]), fi.h.vertices.at(column[s + 1])}});
      for (std::size_t a = 0; a < used.size(); ++a) {
        const EdgeKey e = edges[used[a]];
        bool descending = (mask >> (2 * a)) & 1;
        Direction arrive = ((mask >> (2 * a + 1)) & 1) ? Direction::E : Direction::W;
        std::vector<VertexId> path = {e.u};
        std::vector<VertexId> cross;
        for (std::size_t s = 0; s < sq.size(); ++s)
          if (sq[s] == static_cast<int>(used[a])) cross.push_back(z[s]);
        if (descending) std::reverse(cross.begin(), cross.end());
        path.insert(path.end(), cross.begin(), cross.end());
        path.push_back(e.v);
        fi.missing_edges.erase(std::find(fi.missing_edges.begin(), fi.missing_edges.end(), e));
        std::vector<EdgeKey> pieces;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
          pieces.push_back({path[s], path[s + 1]});
          fi.missing_edges.push_back(pieces.back());
        }
        for (auto& p : fi.ports) {
          if (p.anchor == e.u && p.other == e.v) p.other = path[1];
          if (p.anchor == e.v && p.other == e.u) p.other = path[path.size() - 2];
        }
        for (std::size_t s = 1; s + 1 < path.size(); ++s) {
          fi.ports.push_back({path[s], path[s - 1], arrive});
          fi.ports.push_back({path[s], path[s + 1], opposite(arrive)});
        }
        splice_chain(fi.chains, e, pieces);
      }
      std::sort(fi.missing_edges.begin(), fi.missing_edges.end());
      sort_ports(fi.ports);
      out.push_back(std::move(fi));
    }
  }
  return out;
}

}  // namespace orthext

namespace orthext {

namespace {

/// Faces of a drawing as components of non-wall elements of its padded arrangement.
struct FaceMap {
  FaceRegion region;        ///< region of the outer face; `wall` is shared by all faces
  std::vector<int> label;   ///< per element, -1 on the drawing
  int count = 0;
  int outer = -1;
  std::vector<Point> seed;

  FaceMap(const Drawing& d) {
    auto pts = d.feature_points();
    Point far = pts.front();
    for (const auto& p : pts) far = {min(far.x, p.x), min(far.y, p.y)};
    // A seed below-left of everything lies in the outer face and inside the padding ring.
    Rat span = Rat(1);
    for (const auto& p : pts) span = max(span, max(p.x - far.x, p.y - far.y));
    region = build_region(d, {far.x - span / 2, far.y - span / 2}, {}, {}, true);
    const auto& g = region.grid;
    label.assign(static_cast<std::size_t>(g.size()), -1);
    for (int e = 0; e < g.size(); ++e) {
      if (region.is_wall(e) || label[static_cast<std::size_t>(e)] >= 0) continue;
      int id = count++;
      std::vector<int> stack = {e};
      label[static_cast<std::size_t>(e)] = id;
      std::optional<Point> cell;
      bool border = false;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (!cell && g.dim(x) == 2) cell = g.rep(x);
        border = border || on_border(g, x);
        for (Direction dir : kDirections) {
          auto n = g.step(x, dir);
          if (!n || region.is_wall(*n) || label[static_cast<std::size_t>(*n)] >= 0) continue;
          label[static_cast<std::size_t>(*n)] = id;
          stack.push_back(*n);
        }
      }
      if (border) outer = id;
      seed.push_back(*cell);
    }
  }

  int face_of(int e) const { return label[static_cast<std::size_t>(e)]; }

  /// Free sides of a drawn vertex pointing into face f.
  std::vector<Direction> free_sides(const Drawing& d, VertexId v, int f) const {
    std::vector<Direction> out;
    auto used = d.ports(v);
    auto at = *region.grid.locate(d.vertices.at(v));
    for (Direction dir : kDirections) {
      if (used.count(dir)) continue;
      auto n = region.grid.step(at, dir);
      if (n && face_of(*n) == f) out.push_back(dir);
    }
    return out;
  }

  std::set<int> faces_at(const Drawing& d, VertexId v) const {
    std::set<int> out;
    const auto& g = region.grid;
    int at = *g.locate(d.vertices.at(v));
    int i = g.i_of(at), j = g.j_of(at);
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        if (g.valid(i + di, j + dj) && face_of(g.id(i + di, j + dj)) >= 0) out.insert(face_of(g.id(i + di, j + dj)));
    return out;
  }

  /// The part of the drawing on the boundary of face f.
  Drawing boundary(const Drawing& d, int f) const {
    const auto& g = region.grid;
    Drawing out;
    for (const auto& [key, line] : d.edges) {
      bool adjacent = false;
      for (const auto& s : line.segments()) {
        int i0 = *g.column_of(s.lo().x), i1 = *g.column_of(s.hi().x);
        int j0 = *g.row_of(s.lo().y), j1 = *g.row_of(s.hi().y);
        for (int i = i0; i <= i1 && !adjacent; ++i)
          for (int j = j0; j <= j1 && !adjacent; ++j) {
            int e = g.id(i, j);
            if (g.dim(e) != 1) continue;
            for (Direction dir : kDirections) {
              auto n = g.step(e, dir);
              if (n && face_of(*n) == f) adjacent = true;
            }
          }
      }
      if (adjacent) {
        out.edges.emplace(key, line);
        out.vertices[key.u] = d.vertices.at(key.u);
        out.vertices[key.v] = d.vertices.at(key.v);
      }
    }
    for (const auto& [v, p] : d.vertices)
      if (d.degree(v) == 0 && faces_at(d, v).count(f)) out.vertices[v] = p;
    return out;
  }
};

/// True if the open segment between two drawn vertices avoids the drawing and both ends can
/// use the facing sides.
bool straight_possible(const Drawing& d, VertexId u, VertexId v) {
  const Point& a = d.vertices.at(u);
  const Point& b = d.vertices.at(v);
  if (a == b || (a.x != b.x && a.y != b.y)) return false;
  Direction dir = direction_between(a, b);
  if (d.ports(u).count(dir) || d.ports(v).count(opposite(dir))) return false;
  AxisSegment s(a, b);
  for (const auto& [w, p] : d.vertices)
    if (s.contains_in_interior(p)) return false;
  for (const auto& [_, line] : d.edges)
    for (const auto& seg : line.segments()) {
      auto x = segments_intersect(s, seg);
      if (std::holds_alternative<NoIntersection>(x)) continue;
      if (auto* p = std::get_if<Point>(&x); p && (*p == a || *p == b)) continue;
      return false;
    }
  return true;
}

struct Partial {
  Drawing base;
  std::set<VertexId> missing;
  std::set<VertexId> must_bend;
  std::vector<EdgeKey> edges;  ///< missing edges with at least one missing end
  std::map<EdgeKey, std::vector<EdgeKey>> chains;
  int offset = 0;
  std::string label;
};

}  // namespace

std::vector<FaceBranch> reduce_to_faces(const BmoeInstance& inst, const ReduceOptions& opt) {
  inst.check();
  if (inst.drawing.vertices.empty()) throw Error(ErrorCode::InvalidArgument, "the drawn part must contain a vertex");
  std::vector<EdgeKey> hh;
  Partial start;
  start.base = inst.drawing;
  for (auto v : inst.missing_vertices()) start.missing.insert(v);
  VertexId next_id = *inst.vertices.rbegin() + 1;
  for (const auto& e : inst.missing_edges()) {
    if (inst.drawing.vertices.count(e.u) && inst.drawing.vertices.count(e.v))
      hh.push_back(e);
    else
      start.edges.push_back(e);
  }
  auto hint = [&](VertexId a, VertexId other) -> std::optional<Direction> {
    for (const auto& p : inst.port_hints)
      if (p.anchor == a && p.other == other) return p.side;
    return std::nullopt;
  };

  std::vector<Partial> partials;
  std::function<void(std::size_t, Partial)> decide = [&](std::size_t i, Partial cur) {
    if (i == hh.size()) {
      partials.push_back(std::move(cur));
      return;
    }
    const EdgeKey e = hh[i];
    if (straight_possible(cur.base, e.u, e.v)) {
      const Point& a = cur.base.vertices.at(e.u);
      const Point& b = cur.base.vertices.at(e.v);
      auto ha = hint(e.u, e.v), hb = hint(e.v, e.u);
      Direction dir = direction_between(a, b);
      if ((!ha || *ha == dir) && (!hb || *hb == opposite(dir))) {
        Partial s = cur;
        s.base.add_edge(e.u, e.v, OrthoPolyline{{a, b}});
        s.label += "s";
        decide(i + 1, std::move(s));
      }
    }
    Partial b = std::move(cur);
    VertexId w = next_id + static_cast<VertexId>(i);
    b.missing.insert(w);
    b.must_bend.insert(w);
    b.edges.push_back({e.u, w});
    b.edges.push_back({w, e.v});
    b.chains[e] = {{e.u, w}, {w, e.v}};
    ++b.offset;
    b.label += "b";
    decide(i + 1, std::move(b));
  };
  decide(0, start);

  std::vector<FaceBranch> out;
  for (const auto& part : partials) {
    FaceMap faces(part.base);
    // Components of missing vertices joined by missing edges between missing vertices.
    std::map<VertexId, int> comp;
    std::vector<std::vector<VertexId>> comps;
    for (auto v : part.missing) {
      if (comp.count(v)) continue;
      comps.emplace_back();
      std::vector<VertexId> stack = {v};
      comp[v] = static_cast<int>(comps.size()) - 1;
      while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        comps.back().push_back(x);
        for (const auto& e : part.edges) {
          if (!e.has(x)) continue;
          auto y = e.other(x);
          if (!part.missing.count(y) || comp.count(y)) continue;
          comp[y] = comp[v];
          stack.push_back(y);
        }
      }
    }
    // Attachments per component: (anchor, missing end).
    std::vector<std::vector<std::pair<VertexId, VertexId>>> attach(comps.size());
    for (const auto& e : part.edges) {
      bool mu = part.missing.count(e.u), mv = part.missing.count(e.v);
      if (mu && mv) continue;
      VertexId a = mu ? e.v : e.u, x = mu ? e.u : e.v;
      attach[static_cast<std::size_t>(comp.at(x))].emplace_back(a, x);
    }
    std::vector<std::vector<int>> candidates(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (attach[c].empty()) throw Error(ErrorCode::InvalidArgument, "missing component without drawn neighbour");
      for (int f = 0; f < faces.count; ++f) {
        bool ok = true;
        for (const auto& [a, _] : attach[c]) ok = ok && !faces.free_sides(part.base, a, f).empty();
        if (ok) candidates[c].push_back(f);
      }
    }
    std::vector<int> face_of(comps.size(), -1);
    std::function<void(std::size_t)> assign = [&](std::size_t c) {
      if (c < comps.size()) {
        for (int f : candidates[c]) {
          face_of[c] = f;
          assign(c + 1);
        }
        return;
      }
      // Port choice for every attachment, distinct sides per anchor.
      std::vector<std::pair<VertexId, VertexId>> all;
      std::vector<int> all_face;
      for (std::size_t k = 0; k < comps.size(); ++k)
        for (const auto& at : attach[k]) all.push_back(at), all_face.push_back(face_of[k]);
      std::vector<Direction> side(all.size());
      std::map<VertexId, std::set<Direction>> taken;
      std::function<void(std::size_t)> ports = [&](std::size_t k) {
        if (k < all.size()) {
          auto [a, x] = all[k];
          auto h = hint(a, x);
          for (Direction d : faces.free_sides(part.base, a, all_face[k])) {
            if ((h && *h != d) || taken[a].count(d)) continue;
            side[k] = d;
            taken[a].insert(d);
            ports(k + 1);
            taken[a].erase(d);
          }
          return;
        }
        if (out.size() == opt.max_branches) throw Error(ErrorCode::GuardExceeded, "too many reduction branches");
        FaceBranch br;
        br.base = part.base;
        br.offset = part.offset;
        br.label = part.label;
        std::map<int, FaceInstance> per_face;
        for (std::size_t c = 0; c < comps.size(); ++c) {
          int f = face_of[c];
          auto& fi = per_face[f];
          for (auto v : comps[c]) {
            fi.missing_vertices.push_back(v);
            if (part.must_bend.count(v)) fi.must_bend.insert(v), ++fi.bend_offset;
          }
          br.label += "|f" + std::to_string(f);
        }
        for (const auto& e : part.edges) {
          VertexId x = part.missing.count(e.u) ? e.u : e.v;
          per_face[face_of[static_cast<std::size_t>(comp.at(x))]].missing_edges.push_back(e);
        }
        for (std::size_t k = 0; k < all.size(); ++k) {
          per_face[all_face[k]].ports.push_back({all[k].first, all[k].second, side[k]});
          br.label += to_char(side[k]);
        }
        for (auto& [f, fi] : per_face) {
          fi.h = faces.boundary(part.base, f);
          fi.seed = faces.seed[static_cast<std::size_t>(f)];
          fi.outer = f == faces.outer;
          std::sort(fi.missing_vertices.begin(), fi.missing_vertices.end());
          std::sort(fi.missing_edges.begin(), fi.missing_edges.end());
          sort_ports(fi.ports);
          for (const auto& [orig, pieces] : part.chains)
            if (std::find(fi.missing_edges.begin(), fi.missing_edges.end(), pieces.front()) != fi.missing_edges.end())
              fi.chains[orig] = pieces;
          br.faces.push_back(std::move(fi));
        }
        out.push_back(std::move(br));
      };
      ports(0);
    };
    assign(0);
  }
  if (out.empty()) throw Error(ErrorCode::NoValidBranch, "no branch of the reduction is feasible");
  return out;
}

}  // namespace orthext
