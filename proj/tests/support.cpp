#include "support.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>
#include <set>

namespace testsupport {

namespace {

using Cell = std::pair<int, int>;

bool has_bad_shape(const std::set<Cell>& cells, int w, int h) {
  // Corner-only contact between two occupied cells makes the boundary non-simple.
  for (auto [x, y] : cells) {
    for (int dx : {-1, 1}) {
      for (int dy : {-1, 1}) {
        bool diag = cells.count({x + dx, y + dy});
        bool a = cells.count({x + dx, y});
        bool b = cells.count({x, y + dy});
        if (diag && !a && !b) return true;
      }
    }
  }
  // Holes: flood fill the complement from outside a padded box.
  std::set<Cell> seen;
  std::vector<Cell> stack = {{-1, -1}};
  seen.insert({-1, -1});
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (auto [dx, dy] : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
      Cell n{x + dx, y + dy};
      if (n.first < -1 || n.second < -1 || n.first > w || n.second > h) continue;
      if (cells.count(n) || seen.count(n)) continue;
      seen.insert(n);
      stack.push_back(n);
    }
  }
  std::size_t empty = static_cast<std::size_t>((w + 2) * (h + 2)) - cells.size();
  if (seen.size() != empty) return true;
  // Empty cells touching only at a corner also pinch the boundary.
  for (int x = -1; x <= w; ++x) {
    for (int y = -1; y <= h; ++y) {
      if (cells.count({x, y})) continue;
      for (int dx : {-1, 1}) {
        for (int dy : {-1, 1}) {
          bool diag = !cells.count({x + dx, y + dy});
          bool a = !cells.count({x + dx, y});
          bool b = !cells.count({x, y + dy});
          if (diag && !a && !b) return true;
        }
      }
    }
  }
  return false;
}

std::vector<Point> trace(const std::set<Cell>& cells, int scale) {
  // Directed boundary edges with the shape on the left (counterclockwise).
  std::map<Cell, Cell> next;
  for (auto [x, y] : cells) {
    if (!cells.count({x, y - 1})) next[{x, y}] = {x + 1, y};
    if (!cells.count({x + 1, y})) next[{x + 1, y}] = {x + 1, y + 1};
    if (!cells.count({x, y + 1})) next[{x + 1, y + 1}] = {x, y + 1};
    if (!cells.count({x - 1, y})) next[{x, y + 1}] = {x, y};
  }
  std::vector<Cell> loop;
  Cell start = next.begin()->first;
  Cell cur = start;
  do {
    loop.push_back(cur);
    cur = next.at(cur);
  } while (cur != start);
  std::vector<Point> corners;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    Cell a = loop[(i + n - 1) % n], b = loop[i], c = loop[(i + 1) % n];
    bool straight = (a.first == b.first && b.first == c.first) || (a.second == b.second && b.second == c.second);
    if (!straight) corners.push_back({b.first * scale, b.second * scale});
  }
  return corners;
}

}  // namespace

RectPolygon random_polygon(std::mt19937& rng, int w, int h, int ncells, std::size_t max_corners, int scale) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::set<Cell> cells;
    std::uniform_int_distribution<int> rx(0, w - 1), ry(0, h - 1);
    cells.insert({rx(rng), ry(rng)});
    int guard = 0;
    while (static_cast<int>(cells.size()) < ncells && guard++ < 10000) {
      auto it = cells.begin();
      std::advance(it, std::uniform_int_distribution<int>(0, static_cast<int>(cells.size()) - 1)(rng));
      static const Cell dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      Cell d = dirs[std::uniform_int_distribution<int>(0, 3)(rng)];
      Cell n{it->first + d.first, it->second + d.second};
      if (n.first < 0 || n.second < 0 || n.first >= w || n.second >= h) continue;
      cells.insert(n);
    }
    if (has_bad_shape(cells, w, h)) continue;
    auto corners = trace(cells, scale);
    if (corners.size() > max_corners) continue;
    return RectPolygon(corners);
  }
  return RectPolygon::rectangle(0, 0, scale, scale);
}

orthext::Drawing polygon_drawing(const RectPolygon& poly) {
  orthext::Drawing d;
  const auto& c = poly.corners();
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < n; ++i) d.vertices[i] = c[static_cast<std::size_t>(i)];
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    d.add_edge(i, j, orthext::OrthoPolyline{{c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]}});
  }
  return d;
}

}  // namespace testsupport

namespace testsupport {

orthext::Drawing random_drawing(std::mt19937& rng, int scale) {
  orthext::Drawing d;
  int next_id = 0;
  int parts = 1 + static_cast<int>(rng() % 2);
  for (int part = 0; part < parts; ++part) {
    auto poly = random_polygon(rng, 5, 5, 3 + static_cast<int>(rng() % 8), 14, scale);
    const auto& c = poly.corners();
    const std::size_t n = c.size();
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n; ++i)
      if (rng() % 2 == 0) chosen.push_back(i);
    while (chosen.size() < 3) {
      chosen.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (rng() % 2 == 0) chosen.push_back(i);
    }
    orthext::Rat shift(part * 7 * scale);
    auto at = [&](std::size_t i) { return Point{c[i % n].x + shift, c[i % n].y}; };
    std::vector<int> ids;
    for (auto i : chosen) {
      d.vertices[next_id] = at(i);
      ids.push_back(next_id++);
    }
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      std::size_t a = chosen[j];
      std::size_t b = chosen[(j + 1) % chosen.size()];
      if (b <= a) b += n;
      orthext::OrthoPolyline line;
      for (std::size_t i = a; i <= b; ++i) line.points.push_back(at(i));
      d.add_edge(ids[j], ids[(j + 1) % ids.size()], line);
    }
  }
  return d;
}

}  // namespace testsupport

namespace testsupport {

orthext::Drawing cycle_drawing(const std::vector<Point>& pts, const std::vector<bool>& is_vertex, int first_id) {
  orthext::Drawing d;
  const std::size_t n = pts.size();
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < n; ++i)
    if (is_vertex[i]) chosen.push_back(i);
  std::vector<int> ids;
  for (auto i : chosen) {
    ids.push_back(first_id + static_cast<int>(ids.size()));
    d.vertices[ids.back()] = pts[i];
  }
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    std::size_t a = chosen[j], b = chosen[(j + 1) % chosen.size()];
    if (b <= a) b += n;
    orthext::OrthoPolyline line;
    for (std::size_t i = a; i <= b; ++i) line.points.push_back(pts[i % n]);
    d.add_edge(ids[j], ids[(j + 1) % ids.size()], line);
  }
  return d;
}

Point interior_point(const RectPolygon& poly) {
  auto lo = poly.min_corner(), hi = poly.max_corner();
  for (auto x = lo.x + orthext::Rat(1, 4); x < hi.x; x += orthext::Rat(1, 2))
    for (auto y = lo.y + orthext::Rat(1, 4); y < hi.y; y += orthext::Rat(1, 2))
      if (orthext::point_in_polygon({x, y}, poly) == orthext::Location::Interior) return {x, y};
  throw std::runtime_error("polygon has no interior point");
}

std::vector<orthext::Direction> inward_sides(const orthext::Drawing& d, const RectPolygon& poly, orthext::VertexId v) {
  std::vector<orthext::Direction> out;
  auto used = d.ports(v);
  const auto& p = d.vertices.at(v);
  for (auto dir : orthext::kDirections) {
    if (used.count(dir)) continue;
    Point q{p.x + orthext::Rat(orthext::dx(dir), 2), p.y + orthext::Rat(orthext::dy(dir), 2)};
    if (orthext::point_in_polygon(q, poly) == orthext::Location::Interior) out.push_back(dir);
  }
  return out;
}

orthext::FaceInstance random_face(std::mt19937& rng, int ports, std::size_t max_corners, int cells) {
  for (;;) {
    auto poly = random_polygon(rng, 6, 6, cells, max_corners, 2);
    std::vector<Point> pts;
    std::vector<bool> flag;
    const auto& c = poly.corners();
    for (std::size_t i = 0; i < c.size(); ++i) {
      pts.push_back(c[i]);
      flag.push_back(true);
      const auto& nx = c[(i + 1) % c.size()];
      if (rng() % 2) {
        pts.push_back({(c[i].x + nx.x) / 2, (c[i].y + nx.y) / 2});
        flag.push_back(true);
      }
    }
    orthext::FaceInstance fi;
    fi.h = cycle_drawing(pts, flag);
    fi.seed = interior_point(poly);
    std::vector<std::pair<orthext::VertexId, orthext::Direction>> cand;
    for (const auto& [v, _] : fi.h.vertices) {
      auto sides = inward_sides(fi.h, poly, v);
      if (!sides.empty()) cand.emplace_back(v, sides[rng() % sides.size()]);
    }
    if (static_cast<int>(cand.size()) < ports) continue;
    std::shuffle(cand.begin(), cand.end(), rng);
    int k = (ports + 3) / 4;
    int next = fi.h.max_vertex_id() + 1;
    for (int a = 0; a < k; ++a) fi.missing_vertices.push_back(next + a);
    for (int a = 0; a < ports; ++a) {
      orthext::VertexId x = next + a % k;
      fi.ports.push_back({cand[static_cast<std::size_t>(a)].first, x, cand[static_cast<std::size_t>(a)].second});
      fi.missing_edges.push_back({cand[static_cast<std::size_t>(a)].first, x});
    }
    std::sort(fi.ports.begin(), fi.ports.end(), [](const auto& a, const auto& b) {
      return std::tie(a.anchor, a.other) < std::tie(b.anchor, b.other);
    });
    std::sort(fi.missing_edges.begin(), fi.missing_edges.end());
    return fi;
  }
}

orthext::FaceInstance polygon_face(const RectPolygon& poly, const std::vector<orthext::PortCandidate>& ports,
                                   int missing) {
  orthext::FaceInstance fi;
  fi.h = polygon_drawing(poly);
  fi.seed = interior_point(poly);
  int next = fi.h.max_vertex_id() + 1;
  for (int a = 0; a < missing; ++a) fi.missing_vertices.push_back(next + a);
  fi.ports = ports;
  for (const auto& p : ports) fi.missing_edges.push_back(p.edge());
  std::sort(fi.ports.begin(), fi.ports.end(), [](const auto& a, const auto& b) {
    return std::tie(a.anchor, a.other) < std::tie(b.anchor, b.other);
  });
  std::sort(fi.missing_edges.begin(), fi.missing_edges.end());
  return fi;
}

}  // namespace testsupport
