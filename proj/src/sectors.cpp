#include "orthext/sectors.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace orthext {

namespace {

/// Elements incident to e in the closure sense: the four axis neighbours, plus the diagonal
/// ones when one of the pair is a node and the other an open rectangle.
template <class F>
void for_incident(const ElementGrid& g, int e, F&& f) {
  const int i = g.i_of(e), j = g.j_of(e);
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      if (!di && !dj) continue;
      int a = i + di, b = j + dj;
      if (!g.valid(a, b)) continue;
      if (di && dj && ((i & 1) != (j & 1) || (i & 1) == (a & 1))) continue;
      f(g.id(a, b));
    }
  }
}

Degeneracy degeneracy_of(const ElementGrid& g, const std::vector<int>& elements) {
  for (int e : elements)
    if (g.dim(e) == 2) return Degeneracy::None;
  if (elements.size() == 1 && g.dim(elements[0]) == 0) return Degeneracy::Point;
  return Degeneracy::Segment;
}

/// Heights of the sector profile above a baseline on `side`, or nullopt if that side is no
/// baseline. Rows and columns are measured in line units so that an open gap and the line
/// closing it have the same height.
std::optional<std::vector<int>> histogram(const ElementGrid& g, const std::vector<int>& elements, Direction side) {
  std::map<int, std::pair<int, int>> span;  // along-baseline index -> (min, max) away index
  std::map<int, int> count;
  for (int e : elements) {
    int i = g.i_of(e), j = g.j_of(e);
    int u = 0, v = 0;
    switch (side) {
      case Direction::S: u = i, v = j; break;
      case Direction::N: u = i, v = g.nj() - 1 - j; break;
      case Direction::W: u = j, v = i; break;
      case Direction::E: u = j, v = g.ni() - 1 - i; break;
    }
    auto it = span.find(u);
    if (it == span.end())
      span[u] = {v, v};
    else
      it->second = {std::min(it->second.first, v), std::max(it->second.second, v)};
    ++count[u];
  }
  std::vector<int> heights;
  std::optional<int> base;
  int prev_u = 0;
  bool first = true;
  for (const auto& [u, mm] : span) {
    if (!first && u != prev_u + 1) return std::nullopt;
    first = false;
    prev_u = u;
    if (count[u] != mm.second - mm.first + 1) return std::nullopt;
    int b = mm.first / 2;
    if (base && *base != b) return std::nullopt;
    base = b;
    heights.push_back((mm.second + 1) / 2);
  }
  return heights;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

/// Connected components of `members` (sorted) under closure incidence, restricted to elements
/// with equal `key`.
template <class Key>
std::vector<std::vector<int>> components(const ElementGrid& g, const std::vector<int>& members, Key&& key) {
  std::map<int, int> comp;
  for (int e : members) comp[e] = -1;
  std::vector<std::vector<int>> out;
  for (int e : members) {
    if (comp[e] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack = {e};
    comp[e] = id;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      out.back().push_back(x);
      for_incident(g, x, [&](int n) {
        auto it = comp.find(n);
        if (it == comp.end() || it->second >= 0 || key(n) != key(x)) return;
        it->second = id;
        stack.push_back(n);
      });
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

std::pair<Rat, Rat> closed_extent(const std::vector<Rat>& lines, int index) {
  if (index % 2 == 0) return {lines[static_cast<std::size_t>(index / 2)], lines[static_cast<std::size_t>(index / 2)]};
  return {lines[static_cast<std::size_t>(index / 2)], lines[static_cast<std::size_t>(index / 2 + 1)]};
}

/// Representative coordinate of an extent: the line itself, or the middle of the middle gap.
Rat pick_coordinate(const std::vector<Rat>& lines, const Rat& lo, const Rat& hi) {
  if (lo == hi) return lo;
  std::vector<Rat> within;
  for (const auto& l : lines)
    if (lo <= l && l <= hi) within.push_back(l);
  std::size_t g = (within.size() - 2) / 2;
  return (within[g] + within[g + 1]) / 2;
}

}  // namespace

BendField bend_field(const FaceRegion& region, const Point& anchor, const PortCandidate& port) {
  const auto& g = region.grid;
  auto a = g.locate(anchor);
  if (!a) throw Error(ErrorCode::InvalidArgument, "anchor outside the arrangement");
  BendField f;
  f.port = port;
  f.anchor_element = *a;
  f.dist.assign(static_cast<std::size_t>(g.size()), kInfDist);
  f.dist[static_cast<std::size_t>(*a)] = 0;
  auto frontier = region.ray(*a, port.side);
  if (frontier.empty()) throw Error(ErrorCode::PortBlocked, "port ray leaves the face immediately");
  for (int e : frontier) f.dist[static_cast<std::size_t>(e)] = 0;
  std::vector<char> row_done(static_cast<std::size_t>(g.size()), 0), col_done(static_cast<std::size_t>(g.size()), 0);
  int level = 0;
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int e : frontier) {
      for (Direction d : {Direction::E, Direction::N}) {
        auto& done = d == Direction::E ? row_done : col_done;
        if (done[static_cast<std::size_t>(e)]) continue;
        std::vector<int> run = region.ray(e, d);
        auto back = region.ray(e, opposite(d));
        run.insert(run.end(), back.begin(), back.end());
        run.push_back(e);
        for (int x : run) {
          done[static_cast<std::size_t>(x)] = 1;
          if (f.dist[static_cast<std::size_t>(x)] == kInfDist) {
            f.dist[static_cast<std::size_t>(x)] = level + 1;
            next.push_back(x);
          }
        }
      }
    }
    if (!next.empty()) f.max_level = level + 1;
    frontier = std::move(next);
    ++level;
  }
  return f;
}

std::vector<int> SectorGraph::neighbors(int s) const {
  std::vector<int> out;
  for (auto it = adjacent.lower_bound({s, -1}); it != adjacent.end() && it->first.first == s; ++it)
    out.push_back(it->first.second);
  return out;
}

bool SectorGraph::connected() const {
  if (size == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(size), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int n = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : neighbors(s))
      if (!seen[static_cast<std::size_t>(t)]) seen[static_cast<std::size_t>(t)] = 1, ++n, stack.push_back(t);
  }
  return n == size;
}

SectorDecomposition decompose_sectors(const FaceRegion& region, const Drawing& h,
                                      const std::vector<PortCandidate>& ports) {
  SectorDecomposition dec;
  dec.region = region;
  dec.ports = ports;
  for (const auto& p : ports) dec.fields.push_back(bend_field(region, h.vertices.at(p.anchor), p));
  const auto& g = region.grid;
  auto bvect = [&](int e) {
    std::vector<int> v;
    for (const auto& f : dec.fields) v.push_back(f.at(e));
    return v;
  };
  auto comps = components(g, region.inside_elements(), bvect);
  dec.sector_of.assign(static_cast<std::size_t>(g.size()), -1);
  for (auto& c : comps) {
    Sector s;
    s.id = static_cast<int>(dec.sectors.size());
    s.bvect = bvect(c.front());
    s.elements = std::move(c);
    s.degenerate = degeneracy_of(g, s.elements);
    for (int e : s.elements) dec.sector_of[static_cast<std::size_t>(e)] = s.id;
    dec.sectors.push_back(std::move(s));
  }
  dec.graph.size = static_cast<int>(dec.sectors.size());
  for (int e = 0; e < g.size(); ++e) {
    int s = dec.sector_of[static_cast<std::size_t>(e)];
    if (s < 0) continue;
    for (Direction d : kDirections) {
      auto n = g.step(e, d);
      if (!n) continue;
      int t = dec.sector_of[static_cast<std::size_t>(*n)];
      if (t < 0 || t == s) continue;
      dec.graph.adjacent[{s, t}].insert(d);
      dec.graph.adjacent[{t, s}].insert(opposite(d));
    }
  }
  for (auto& s : dec.sectors) {
    if (s.degenerate != Degeneracy::None) {
      s.has_baseline = true;
      s.xi_max = 1;
      continue;
    }
    int best = kInfDist;
    for (Direction side : kDirections) {
      auto hs = histogram(g, s.elements, side);
      if (!hs) continue;
      int xi = count_local_maxima(*hs);
      if (xi < best) best = xi, s.baseline_side = side;
    }
    s.has_baseline = best != kInfDist;
    s.xi_max = s.has_baseline ? best : -1;
  }
  return dec;
}

int count_local_maxima(const std::vector<int>& heights) {
  std::vector<int> runs;
  for (int x : heights)
    if (runs.empty() || runs.back() != x) runs.push_back(x);
  int n = 0;
  for (std::size_t a = 0; a < runs.size(); ++a) {
    bool left = a == 0 || runs[a - 1] < runs[a];
    bool right = a + 1 == runs.size() || runs[a + 1] < runs[a];
    n += left && right;
  }
  return n;
}

int count_local_minima(const std::vector<int>& heights) {
  std::vector<int> runs;
  for (int x : heights)
    if (runs.empty() || runs.back() != x) runs.push_back(x);
  int n = 0;
  for (std::size_t a = 1; a + 1 < runs.size(); ++a) n += runs[a - 1] > runs[a] && runs[a + 1] > runs[a];
  return n;
}

int local_maxima(const SectorDecomposition& dec, int sector) {
  const auto& s = dec.sectors.at(static_cast<std::size_t>(sector));
  if (!s.has_baseline) throw Error(ErrorCode::NoBaseline, "sector " + std::to_string(sector) + " has no baseline");
  return s.xi_max;
}

CriticalCorners critical_corners(const SectorDecomposition& dec, const std::vector<ReflexCorner>& corners) {
  const auto& g = dec.region.grid;
  CriticalCorners out(dec.sectors.size());
  for (const auto& rc : corners) {
    std::set<int> touching;
    for_incident(g, rc.element, [&](int n) {
      int s = dec.sector_of[static_cast<std::size_t>(n)];
      if (s >= 0) touching.insert(s);
    });
    if (touching.size() < 2) continue;
    for (Direction d : kDirections) {
      std::set<int> seen;
      for (int e : dec.region.ray(rc.element, opposite(d))) seen.insert(dec.sector_of[static_cast<std::size_t>(e)]);
      for (int s : seen) out[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)].push_back(rc.point);
    }
  }
  return out;
}

Refinement refine_subsectors(const SectorDecomposition& dec, const CriticalCorners& critical) {
  const auto& g = dec.region.grid;
  Refinement ref;
  ref.subsector_of.assign(static_cast<std::size_t>(g.size()), -1);
  ref.of_sector.resize(dec.sectors.size());
  for (const auto& s : dec.sectors) {
    std::vector<Rat> hcuts, vcuts;
    const auto& cc = critical[static_cast<std::size_t>(s.id)];
    for (Direction d : kDirections)
      for (const auto& p : cc[static_cast<std::size_t>(d)]) (is_vertical(d) ? vcuts : hcuts).push_back(is_vertical(d) ? p.x : p.y);
    std::sort(hcuts.begin(), hcuts.end());
    std::sort(vcuts.begin(), vcuts.end());
    auto band = [&](int e) {
      auto x = g.x_at(g.i_of(e)), y = g.y_at(g.j_of(e));
      auto xb = std::lower_bound(vcuts.begin(), vcuts.end(), x) - vcuts.begin();
      auto yb = std::lower_bound(hcuts.begin(), hcuts.end(), y) - hcuts.begin();
      return std::pair<long, long>(xb, yb);
    };
    for (auto& c : components(g, s.elements, band)) {
      Subsector v;
      v.id = static_cast<int>(ref.subsectors.size());
      v.sector = s.id;
      v.degenerate = degeneracy_of(g, c);
      bool first = true;
      for (int e : c) {
        auto [xl, xh] = closed_extent(g.xs(), g.i_of(e));
        auto [yl, yh] = closed_extent(g.ys(), g.j_of(e));
        if (first) {
          v.x_lo = xl, v.x_hi = xh, v.y_lo = yl, v.y_hi = yh;
          first = false;
        } else {
          v.x_lo = min(v.x_lo, xl), v.x_hi = max(v.x_hi, xh), v.y_lo = min(v.y_lo, yl), v.y_hi = max(v.y_hi, yh);
        }
        ref.subsector_of[static_cast<std::size_t>(e)] = v.id;
      }
      v.elements = std::move(c);
      ref.of_sector[static_cast<std::size_t>(s.id)].push_back(v.id);
      ref.subsectors.push_back(std::move(v));
    }
  }
  const int n = static_cast<int>(ref.subsectors.size());
  UnionFind rows(n), cols(n);
  for (int e = 0; e < g.size(); ++e) {
    int a = ref.subsector_of[static_cast<std::size_t>(e)];
    if (a < 0) continue;
    for (Direction d : {Direction::E, Direction::N}) {
      auto nb = g.step(e, d);
      if (!nb) continue;
      int b = ref.subsector_of[static_cast<std::size_t>(*nb)];
      if (b < 0 || b == a) continue;
      const auto& va = ref.subsectors[static_cast<std::size_t>(a)];
      const auto& vb = ref.subsectors[static_cast<std::size_t>(b)];
      if (d == Direction::E && va.y_lo == vb.y_lo && va.y_hi == vb.y_hi) rows.unite(a, b);
      if (d == Direction::N && va.x_lo == vb.x_lo && va.x_hi == vb.x_hi) cols.unite(a, b);
    }
  }
  std::map<int, int> row_id, col_id;
  for (auto& v : ref.subsectors) {
    v.row = row_id.try_emplace(rows.find(v.id), static_cast<int>(row_id.size())).first->second;
    v.col = col_id.try_emplace(cols.find(v.id), static_cast<int>(col_id.size())).first->second;
  }
  ref.rows = static_cast<int>(row_id.size());
  ref.cols = static_cast<int>(col_id.size());
  return ref;
}

SectorGrid sector_grid(const SectorDecomposition& dec, const Refinement& ref, int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "grid scale must be positive");
  const auto& g = dec.region.grid;
  SectorGrid grid;
  grid.m = m;
  for (const auto& v : ref.subsectors) {
    Point p{pick_coordinate(g.xs(), v.x_lo, v.x_hi), pick_coordinate(g.ys(), v.y_lo, v.y_hi)};
    auto at = g.locate(p);
    if (!at || ref.subsector_of[static_cast<std::size_t>(*at)] != v.id) {
      int best = v.elements.front();
      for (int e : v.elements)
        if (g.dim(e) > g.dim(best)) best = e;
      p = g.rep(best);
      at = best;
    }
    int i = g.i_of(*at), j = g.j_of(*at);
    auto [xl, xh] = closed_extent(g.xs(), i);
    auto [yl, yh] = closed_extent(g.ys(), j);
    std::optional<Rat> clear;
    if (i & 1) clear = min(p.x - xl, xh - p.x);
    if (j & 1) clear = clear ? min(*clear, min(p.y - yl, yh - p.y)) : min(p.y - yl, yh - p.y);
    Rat eps = clear ? *clear / 4 : Rat(0);
    std::vector<Point> pts;
    auto offsets = [&](bool active) {
      std::vector<Rat> o;
      if (!active || m == 1) return std::vector<Rat>{Rat(0)};
      for (int a = 0; a < m; ++a) o.push_back(eps * Rat(a, m - 1) - eps / 2);
      return o;
    };
    for (const auto& oy : offsets(j & 1))
      for (const auto& ox : offsets(i & 1)) pts.push_back({p.x + ox, p.y + oy});
    grid.center.push_back(p);
    grid.eps.push_back(eps);
    grid.points.push_back(std::move(pts));
  }
  return grid;
}

long long subgridsize(int k) {
  long long kk = k;
  return 112 * kk * kk * kk + 202 * kk * kk + 85 * kk;
}

}  // namespace orthext
