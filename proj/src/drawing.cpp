#include "orthext/drawing.hpp"

#include <algorithm>
#include <sstream>

namespace orthext {

std::ostream& operator<<(std::ostream& os, const EdgeKey& e) { return os << e.u << '-' << e.v; }

std::vector<AxisSegment> OrthoPolyline::segments() const {
  std::vector<AxisSegment> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) out.emplace_back(points[i], points[i + 1]);
  return out;
}

OrthoPolyline OrthoPolyline::reversed() const {
  OrthoPolyline r{points};
  std::reverse(r.points.begin(), r.points.end());
  return r;
}

OrthoPolyline OrthoPolyline::simplified(std::vector<Point> pts) {
  std::vector<Point> out;
  for (auto& p : pts) {
    if (!out.empty() && out.back() == p) continue;
    if (out.size() >= 2) {
      const Point& a = out[out.size() - 2];
      const Point& b = out.back();
      if ((a.x == b.x && b.x == p.x) || (a.y == b.y && b.y == p.y)) out.pop_back();
    }
    out.push_back(p);
  }
  return OrthoPolyline{std::move(out)};
}

void Drawing::add_edge(VertexId a, VertexId b, OrthoPolyline line) {
  EdgeKey k(a, b);
  if (a != k.u) line = line.reversed();
  edges[k] = std::move(line);
}

OrthoPolyline Drawing::polyline_from(VertexId a, VertexId b) const {
  EdgeKey k(a, b);
  const auto& line = edges.at(k);
  return a == k.u ? line : line.reversed();
}

int Drawing::degree(VertexId v) const {
  int d = 0;
  for (const auto& [k, _] : edges) d += k.has(v) ? 1 : 0;
  return d;
}

std::vector<VertexId> Drawing::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for (const auto& [k, _] : edges)
    if (k.has(v)) out.push_back(k.other(v));
  return out;
}

std::map<Direction, EdgeKey> Drawing::ports(VertexId v) const {
  std::map<Direction, EdgeKey> out;
  for (const auto& [k, line] : edges) {
    if (!k.has(v) || line.points.size() < 2) continue;
    if (k.u == v) out[direction_between(line.points[0], line.points[1])] = k;
    if (k.v == v) {
      const auto& p = line.points;
      out[direction_between(p[p.size() - 1], p[p.size() - 2])] = k;
    }
  }
  return out;
}

std::vector<Point> Drawing::feature_points() const {
  std::vector<Point> out;
  for (const auto& [_, p] : vertices) out.push_back(p);
  for (const auto& [_, line] : edges)
    for (std::size_t i = 1; i + 1 < line.points.size(); ++i) out.push_back(line.points[i]);
  return out;
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::BadPolyline: return "BadPolyline";
    case ViolationKind::EndpointMismatch: return "EndpointMismatch";
    case ViolationKind::UnknownVertex: return "UnknownVertex";
    case ViolationKind::DegreeTooHigh: return "DegreeTooHigh";
    case ViolationKind::DuplicateVertexPoint: return "DuplicateVertexPoint";
    case ViolationKind::PassesThroughVertex: return "PassesThroughVertex";
    case ViolationKind::SelfIntersection: return "SelfIntersection";
    case ViolationKind::Crossing: return "Crossing";
  }
  return "?";
}

std::size_t ValidationReport::count(ViolationKind k) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << to_string(v.kind);
    for (auto id : v.vertices) os << " v" << id;
    for (auto e : v.edges) os << " e" << e;
    if (!v.message.empty()) os << ": " << v.message;
    os << '\n';
  }
  return os.str();
}

namespace {

// Returns an error message if the polyline is not a proper orthogonal polyline.
std::string check_polyline(const OrthoPolyline& line) {
  const auto& p = line.points;
  if (p.size() < 2) return "fewer than two points";
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i] == p[i + 1]) return "repeated point";
    if (p[i].x != p[i + 1].x && p[i].y != p[i + 1].y) return "segment not axis-aligned";
  }
  for (std::size_t i = 0; i + 2 < p.size(); ++i) {
    bool h1 = p[i].y == p[i + 1].y;
    bool h2 = p[i + 1].y == p[i + 2].y;
    if (h1 == h2) return "consecutive segments are collinear";
  }
  return {};
}

bool self_intersects(const OrthoPolyline& line) {
  auto segs = line.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      auto x = segments_intersect(segs[i], segs[j]);
      if (std::holds_alternative<NoIntersection>(x)) continue;
      if (j == i + 1 && std::holds_alternative<Point>(x)) continue;
      return true;
    }
  }
  return false;
}

}  // namespace

ValidationReport validate(const Drawing& d) {
  ValidationReport rep;
  auto add = [&](ViolationKind k, std::vector<VertexId> vs, std::vector<EdgeKey> es, std::string msg) {
    rep.violations.push_back({k, std::move(vs), std::move(es), std::move(msg)});
  };

  {
    std::map<Point, VertexId> seen;
    for (const auto& [id, p] : d.vertices) {
      auto [it, fresh] = seen.emplace(p, id);
      if (!fresh) add(ViolationKind::DuplicateVertexPoint, {it->second, id}, {}, "");
    }
  }
  {
    std::map<VertexId, int> deg;
    for (const auto& [k, _] : d.edges) {
      ++deg[k.u];
      ++deg[k.v];
    }
    for (const auto& [id, dg] : deg)
      if (dg > 4) add(ViolationKind::DegreeTooHigh, {id}, {}, "degree " + std::to_string(dg));
  }

  std::vector<EdgeKey> good;
  for (const auto& [k, line] : d.edges) {
    if (!d.vertices.count(k.u) || !d.vertices.count(k.v) || k.u == k.v) {
      add(ViolationKind::UnknownVertex, {k.u, k.v}, {k}, "edge endpoint is not a vertex");
      continue;
    }
    if (auto msg = check_polyline(line); !msg.empty()) {
      add(ViolationKind::BadPolyline, {}, {k}, msg);
      continue;
    }
    if (line.points.front() != d.vertices.at(k.u) || line.points.back() != d.vertices.at(k.v)) {
      add(ViolationKind::EndpointMismatch, {k.u, k.v}, {k}, "");
      continue;
    }
    if (self_intersects(line)) {
      add(ViolationKind::SelfIntersection, {}, {k}, "");
      continue;
    }
    good.push_back(k);
  }

  std::map<EdgeKey, std::vector<AxisSegment>> segs;
  for (const auto& k : good) segs.emplace(k, d.edges.at(k).segments());

  for (const auto& k : good) {
    for (const auto& [id, p] : d.vertices) {
      if (k.has(id)) continue;
      for (const auto& s : segs[k]) {
        if (s.contains(p)) {
          add(ViolationKind::PassesThroughVertex, {id}, {k}, "");
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < good.size(); ++i) {
    for (std::size_t j = i + 1; j < good.size(); ++j) {
      const EdgeKey& e = good[i];
      const EdgeKey& f = good[j];
      std::optional<Point> shared;
      if (e.has(f.u)) shared = d.vertices.at(f.u);
      else if (e.has(f.v)) shared = d.vertices.at(f.v);
      bool bad = false;
      for (const auto& s : segs[e]) {
        for (const auto& t : segs[f]) {
          auto x = segments_intersect(s, t);
          if (std::holds_alternative<NoIntersection>(x)) continue;
          const Point* p = std::get_if<Point>(&x);
          if (p && shared && *p == *shared) continue;
          bad = true;
        }
      }
      if (bad) add(ViolationKind::Crossing, {}, {e, f}, "");
    }
  }
  return rep;
}

std::size_t count_bends(const Drawing& d) {
  std::size_t n = 0;
  for (const auto& [_, line] : d.edges) n += line.bends();
  return n;
}

std::size_t count_bends(const Drawing& d, const std::set<EdgeKey>& filter) {
  std::size_t n = 0;
  for (const auto& k : filter)
    if (auto it = d.edges.find(k); it != d.edges.end()) n += it->second.bends();
  return n;
}

namespace {

const Rat& coord_of(const Point& p, bool vertical) { return vertical ? p.x : p.y; }

}  // namespace

std::optional<Rat> removal_limit(const Drawing& d, const AxisLine& line) {
  std::optional<Rat> best;
  for (const auto& p : d.feature_points()) {
    const Rat& c = coord_of(p, line.vertical);
    if (c > line.coord) {
      Rat dist = c - line.coord;
      if (!best || dist < *best) best = dist;
    }
  }
  return best;
}

std::optional<Rat> min_feature_clearance(const Drawing& d, const AxisLine& line) {
  std::optional<Rat> best;
  for (const auto& p : d.feature_points()) {
    Rat dist = abs(coord_of(p, line.vertical) - line.coord);
    if (!best || dist < *best) best = dist;
  }
  return best;
}

Drawing strip_op(const Drawing& d, const AxisLine& line, const Rat& sigma, StripMode mode) {
  if (sigma.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "strip width must be positive");
  for (const auto& p : d.feature_points())
    if (coord_of(p, line.vertical) == line.coord)
      throw Error(ErrorCode::LineHitsFeature, "strip line contains a feature point");
  if (mode == StripMode::Remove) {
    auto lim = removal_limit(d, line);
    if (lim && sigma >= *lim) throw Error(ErrorCode::SigmaTooLarge, "strip removal wider than clearance");
  }
  const Rat shift = mode == StripMode::Remove ? -sigma : sigma;
  auto move = [&](Point p) {
    Rat& c = line.vertical ? p.x : p.y;
    if (c > line.coord) c += shift;
    return p;
  };
  Drawing out;
  for (const auto& [id, p] : d.vertices) out.vertices[id] = move(p);
  for (const auto& [k, l] : d.edges) {
    OrthoPolyline nl;
    for (const auto& p : l.points) nl.points.push_back(move(p));
    out.edges[k] = std::move(nl);
  }
  return out;
}

Selection Selection::make(const Drawing& d, const Point& lo, const Point& hi) {
  if (!(lo.x < hi.x && lo.y < hi.y)) throw Error(ErrorCode::InvalidSelection, "empty selection rectangle");
  std::vector<AxisSegment> sides = {
      AxisSegment({lo.x, lo.y}, {lo.x, hi.y}),  // left
      AxisSegment({hi.x, lo.y}, {hi.x, hi.y}),  // right
      AxisSegment({lo.x, lo.y}, {hi.x, lo.y}),  // bottom
      AxisSegment({lo.x, hi.y}, {hi.x, hi.y}),  // top
  };
  std::vector<std::size_t> crossed;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    bool hit = false;
    for (const auto& [_, line] : d.edges) {
      for (const auto& s : line.segments())
        if (!std::holds_alternative<NoIntersection>(segments_intersect(s, sides[i]))) hit = true;
    }
    if (hit) crossed.push_back(i);
  }
  if (crossed.size() != 1) throw Error(ErrorCode::InvalidSelection, "selection must have exactly one crossed side");
  const std::size_t c = crossed.front();
  return Selection{lo, hi, c < 2 ? SelectionKind::V : SelectionKind::H, sides[c]};
}

Drawing compress_selection(const Drawing& d, const Selection& sel, const Rat& eps) {
  if (eps.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  const bool vertical = sel.kind == SelectionKind::V;
  auto inside = [&](const Point& p) { return sel.lo.x <= p.x && p.x <= sel.hi.x && sel.lo.y <= p.y && p.y <= sel.hi.y; };
  const Rat side = vertical ? sel.crossed_side.a().x : sel.crossed_side.a().y;

  Drawing cur = d;
  const std::size_t features = cur.feature_points().size();
  if (features == 0) return cur;
  const Rat sigma = eps / Rat(static_cast<std::int64_t>(features));

  // The selected columns (rows) are tracked by identity so their shifted positions stay known.
  auto selected_range = [&](const Drawing& dr, Rat base) {
    Rat lo = base, hi = base;
    bool any = false;
    for (const auto& p : dr.feature_points()) {
      if (!inside(p)) continue;
      any = true;
      lo = min(lo, coord_of(p, vertical));
      hi = max(hi, coord_of(p, vertical));
    }
    return std::make_tuple(any, lo, hi);
  };

  // Feature points keep their relative order, so "inside B" is decided once on the input drawing.
  std::vector<bool> in_sel;
  for (const auto& p : d.feature_points()) in_sel.push_back(inside(p));
  auto [any, lo, hi] = selected_range(d, side);
  if (!any || hi - lo <= eps) return cur;

  // Compress every gap between consecutive feature coordinates within [lo, hi] to at most sigma.
  // The side of B is tracked as a phantom coordinate that moves only if it lies right of the strip.
  Rat side_pos = side;
  for (int guard = 0; guard < 100000; ++guard) {
    auto pts = cur.feature_points();
    Rat clo = side_pos, chi = side_pos;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!in_sel[i]) continue;
      clo = min(clo, coord_of(pts[i], vertical));
      chi = max(chi, coord_of(pts[i], vertical));
    }
    std::vector<Rat> cs;
    for (const auto& p : pts) {
      const Rat& c = coord_of(p, vertical);
      if (clo <= c && c <= chi) cs.push_back(c);
    }
    cs.push_back(side_pos);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    bool changed = false;
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      Rat w = cs[i + 1] - cs[i];
      if (w <= sigma) continue;
      Rat step = (w - sigma < w / 2) ? w - sigma : w / 2 - sigma / 4;
      AxisLine l{vertical, cs[i] + w / 2};
      cur = strip_op(cur, l, step, StripMode::Remove);
      if (side_pos > l.coord) side_pos -= step;
      changed = true;
      break;
    }
    if (!changed) return cur;
  }
  throw Error(ErrorCode::InternalInconsistency, "selection compression did not converge");
}

ShapeDescriptor shape_descriptor(const Drawing& d) {
  ShapeDescriptor sd;
  for (const auto& [k, line] : d.edges) {
    std::string s;
    for (std::size_t i = 0; i + 1 < line.points.size(); ++i)
      s += to_char(direction_between(line.points[i], line.points[i + 1]));
    sd.edge_turns[k] = s;
  }
  for (const auto& [id, _] : d.vertices) {
    auto ports = d.ports(id);
    std::ostringstream os;
    bool first = true;
    for (Direction dir : kDirections) {
      if (!first) os << '|';
      first = false;
      if (auto it = ports.find(dir); it != ports.end()) os << it->second;
      else os << '-';
    }
    sd.vertex_ports[id] = os.str();
  }
  return sd;
}

}  // namespace orthext

namespace orthext {

std::optional<EdgeKey> edge_through(const Drawing& d, const Point& p) {
  for (const auto& [key, line] : d.edges) {
    if (line.points.front() == p || line.points.back() == p) continue;
    for (const auto& s : line.segments())
      if (s.contains(p)) return key;
  }
  return std::nullopt;
}

void subdivide_edge(Drawing& d, const EdgeKey& e, const Point& p, VertexId id) {
  const auto line = d.edges.at(e);
  std::vector<Point> first, second;
  bool split = false;
  first.push_back(line.points.front());
  for (std::size_t i = 1; i < line.points.size(); ++i) {
    const auto& a = line.points[i - 1];
    const auto& b = line.points[i];
    if (!split && AxisSegment(a, b).contains(p)) {
      if (first.back() != p) first.push_back(p);
      second.push_back(p);
      split = true;
      if (b != p) second.push_back(b);
      continue;
    }
    (split ? second : first).push_back(b);
  }
  if (!split) throw Error(ErrorCode::InvalidArgument, "point is not on the edge");
  d.edges.erase(e);
  d.vertices[id] = p;
  d.add_edge(e.u, id, OrthoPolyline{first});
  d.add_edge(id, e.v, OrthoPolyline{second});
}

}  // namespace orthext
