#include "orthext/complex.hpp"

#include <algorithm>

namespace orthext {

namespace {

void sort_unique(std::vector<Rat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::optional<int> index_in(const std::vector<Rat>& lines, const Rat& c) {
  if (lines.empty() || c < lines.front() || c > lines.back()) return std::nullopt;
  auto it = std::lower_bound(lines.begin(), lines.end(), c);
  int k = static_cast<int>(it - lines.begin());
  if (*it == c) return 2 * k;
  return 2 * k - 1;
}

}  // namespace

ElementGrid::ElementGrid(std::vector<Rat> xs, std::vector<Rat> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  sort_unique(xs_);
  sort_unique(ys_);
  if (xs_.empty() || ys_.empty()) throw Error(ErrorCode::InvalidArgument, "element grid needs lines");
  ni_ = 2 * static_cast<int>(xs_.size()) - 1;
  nj_ = 2 * static_cast<int>(ys_.size()) - 1;
}

Rat ElementGrid::x_at(int i) const {
  if (i % 2 == 0) return xs_[static_cast<std::size_t>(i / 2)];
  return (xs_[static_cast<std::size_t>(i / 2)] + xs_[static_cast<std::size_t>(i / 2 + 1)]) / 2;
}

Rat ElementGrid::y_at(int j) const {
  if (j % 2 == 0) return ys_[static_cast<std::size_t>(j / 2)];
  return (ys_[static_cast<std::size_t>(j / 2)] + ys_[static_cast<std::size_t>(j / 2 + 1)]) / 2;
}

std::optional<int> ElementGrid::column_of(const Rat& x) const { return index_in(xs_, x); }
std::optional<int> ElementGrid::row_of(const Rat& y) const { return index_in(ys_, y); }

std::optional<int> ElementGrid::locate(const Point& p) const {
  auto i = column_of(p.x);
  auto j = row_of(p.y);
  if (!i || !j) return std::nullopt;
  return id(*i, *j);
}

std::optional<int> ElementGrid::step(int e, Direction d) const {
  int i = i_of(e) + dx(d);
  int j = j_of(e) + dy(d);
  if (!valid(i, j)) return std::nullopt;
  return id(i, j);
}

std::vector<int> FaceRegion::ray(int from, Direction d) const {
  std::vector<int> out;
  auto cur = grid.step(from, d);
  while (cur && in(*cur)) {
    out.push_back(*cur);
    cur = grid.step(*cur, d);
  }
  return out;
}

std::optional<int> FaceRegion::ray_end(int from, Direction d) const {
  auto cur = grid.step(from, d);
  while (cur && in(*cur)) cur = grid.step(*cur, d);
  return cur;
}

bool FaceRegion::touches_inside(int e) const {
  const int i = grid.i_of(e), j = grid.j_of(e);
  for (int di = -1; di <= 1; ++di) {
    for (int dj = -1; dj <= 1; ++dj) {
      if (!di && !dj) continue;
      int a = i + di, b = j + dj;
      if (!grid.valid(a, b) || !in(grid.id(a, b))) continue;
      // Diagonal neighbours are incident only between a node and an open rectangle.
      if (di && dj && ((i & 1) != (j & 1) || (i & 1) == (a & 1))) continue;
      return true;
    }
  }
  return false;
}

std::vector<int> FaceRegion::inside_elements() const {
  std::vector<int> out;
  for (int e = 0; e < grid.size(); ++e)
    if (in(e)) out.push_back(e);
  return out;
}

FaceRegion build_region(const Drawing& h, const Point& seed, const std::vector<Rat>& extra_x,
                        const std::vector<Rat>& extra_y, bool pad) {
  std::vector<Rat> xs = extra_x, ys = extra_y;
  for (const auto& p : h.feature_points()) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  if (pad) {
    // The seed only widens the box; it does not get lines of its own.
    auto lx = seed.x, hx = seed.x, ly = seed.y, hy = seed.y;
    for (const auto& x : xs) lx = min(lx, x), hx = max(hx, x);
    for (const auto& y : ys) ly = min(ly, y), hy = max(hy, y);
    Rat span = max(max(hx - lx, hy - ly), Rat(1));
    xs.push_back(lx - span);
    xs.push_back(hx + span);
    ys.push_back(ly - span);
    ys.push_back(hy + span);
  }
  FaceRegion r;
  r.grid = ElementGrid(std::move(xs), std::move(ys));
  const auto& grid = r.grid;
  r.wall.assign(static_cast<std::size_t>(grid.size()), 0);
  r.inside.assign(static_cast<std::size_t>(grid.size()), 0);
  for (const auto& [_, p] : h.vertices)
    if (auto e = grid.locate(p)) r.wall[static_cast<std::size_t>(*e)] = 1;
  for (const auto& [_, line] : h.edges) {
    for (const auto& s : line.segments()) {
      int i0 = *grid.column_of(s.lo().x), i1 = *grid.column_of(s.hi().x);
      int j0 = *grid.row_of(s.lo().y), j1 = *grid.row_of(s.hi().y);
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) r.wall[static_cast<std::size_t>(grid.id(i, j))] = 1;
    }
  }
  auto start = grid.locate(seed);
  if (!start || r.is_wall(*start)) throw Error(ErrorCode::InvalidArgument, "face seed is not inside a face");
  std::vector<int> stack = {*start};
  r.inside[static_cast<std::size_t>(*start)] = 1;
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    for (Direction d : kDirections) {
      auto n = grid.step(e, d);
      if (!n || r.is_wall(*n) || r.in(*n)) continue;
      r.inside[static_cast<std::size_t>(*n)] = 1;
      stack.push_back(*n);
    }
  }
  for (int e = 0; e < grid.size(); ++e) {
    if (!r.in(e)) continue;
    int i = grid.i_of(e), j = grid.j_of(e);
    if (i == 0 || j == 0 || i == grid.ni() - 1 || j == grid.nj() - 1) r.bounded = false;
  }
  return r;
}

CellComplex build_complex(const FaceInstance& fi) {
  CellComplex c;
  c.region = build_region(fi.h, fi.seed);
  if (!c.region.bounded) throw Error(ErrorCode::InvalidArgument, "cell complex needs a bounded face");
  c.feature_count = static_cast<int>(fi.h.feature_points().size());
  return c;
}

std::vector<ReflexCorner> reflex_corners(const FaceRegion& region, const Drawing& h,
                                         const std::set<VertexId>& anchors) {
  const auto& g = region.grid;
  std::map<Point, VertexId> at;
  for (const auto& [id, p] : h.vertices) at[p] = id;
  std::vector<ReflexCorner> out;
  // Cyclic neighbourhood of a node: arm N, quadrant NE, arm E, ... (clockwise).
  static const int di[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  static const int dj[8] = {1, 1, 0, -1, -1, -1, 0, 1};
  static const Direction arm_dir[4] = {Direction::N, Direction::E, Direction::S, Direction::W};
  for (int e = 0; e < g.size(); ++e) {
    int i = g.i_of(e), j = g.j_of(e);
    if ((i & 1) || (j & 1) || !region.is_wall(e) || !region.touches_inside(e)) continue;
    bool inside[8];
    int count = 0;
    for (int t = 0; t < 8; ++t) {
      int a = i + di[t], b = j + dj[t];
      inside[t] = g.valid(a, b) && region.in(g.id(a, b));
      count += inside[t];
    }
    std::vector<int> run;
    if (count == 8) {
      for (int t = 0; t < 8; ++t) run.push_back(t);
    } else {
      int start = 0;
      while (inside[start]) ++start;
      std::vector<int> cur;
      for (int s = 1; s <= 8; ++s) {
        int t = (start + s) % 8;
        if (inside[t]) {
          cur.push_back(t);
        } else {
          int quads = static_cast<int>(std::count_if(cur.begin(), cur.end(), [](int x) { return x % 2 == 1; }));
          if (quads >= 3) run = cur;
          cur.clear();
        }
      }
    }
    int quads = static_cast<int>(std::count_if(run.begin(), run.end(), [](int x) { return x % 2 == 1; }));
    if (quads < 3) continue;
    ReflexCorner rc;
    rc.point = g.rep(e);
    rc.element = e;
    if (auto it = at.find(rc.point); it != at.end()) rc.vertex = it->second;
    rc.essential = rc.vertex >= 0 && anchors.count(rc.vertex);
    for (int t : run) {
      if (t % 2 == 1) continue;
      Direction d = arm_dir[t / 2];
      auto end = region.ray_end(e, d);
      if (!end) continue;
      rc.directions.push_back(d);
      rc.projections.emplace_back(rc.point, g.rep(*end));
    }
    out.push_back(std::move(rc));
  }
  return out;
}

}  // namespace orthext
