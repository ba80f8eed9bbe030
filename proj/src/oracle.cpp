#include "orthext/oracle.hpp"

#include <algorithm>
#include <deque>

#include "orthext/reduction.hpp"

namespace orthext {

namespace {

std::vector<Rat> refine(const std::vector<Rat>& lines, int r) {
  std::vector<Rat> out = lines;
  for (std::size_t a = 0; a + 1 < lines.size(); ++a)
    for (int t = 1; t < r; ++t) out.push_back(lines[a] + (lines[a + 1] - lines[a]) * Rat(t, r));
  return out;
}

}  // namespace

FineGrid FineGrid::build(const FaceInstance& fi, int r, const std::vector<Point>& queries) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "lattice resolution must be positive");
  auto base = build_region(fi.h, fi.seed, {}, {}, fi.outer).grid;
  auto xs = refine(base.xs(), r);
  auto ys = refine(base.ys(), r);
  for (const auto& q : queries) {
    xs.push_back(q.x);
    ys.push_back(q.y);
  }
  FineGrid g;
  g.resolution = r;
  g.region = build_region(fi.h, fi.seed, xs, ys, false);
  return g;
}

bool FineGrid::lattice_point(int e) const {
  const auto& g = region.grid;
  return g.i_of(e) % 2 == 0 && g.j_of(e) % 2 == 0;
}

BdistOracle::BdistOracle(const FineGrid& grid, const Point& anchor, Direction side) : grid_(&grid) {
  const auto& region = grid.region;
  const auto& g = region.grid;
  auto a = g.locate(anchor);
  if (!a) throw Error(ErrorCode::InvalidArgument, "anchor outside the lattice");
  anchor_ = *a;
  dist_.assign(static_cast<std::size_t>(g.size()) * 4, kInfDist);
  auto idx = [](int e, Direction h) { return static_cast<std::size_t>(e) * 4 + static_cast<std::size_t>(h); };
  std::deque<std::pair<int, Direction>> queue;
  auto relax = [&](int e, Direction h, int d, bool front) {
    if (dist_[idx(e, h)] <= d) return;
    dist_[idx(e, h)] = d;
    if (front)
      queue.emplace_front(e, h);
    else
      queue.emplace_back(e, h);
  };
  auto forward = [&](int e, Direction h) -> std::optional<int> {
    auto edge = g.step(e, h);
    if (!edge || !region.in(*edge)) return std::nullopt;
    auto node = g.step(*edge, h);
    if (!node || !region.in(*node)) return std::nullopt;
    return node;
  };
  if (auto first = forward(anchor_, side)) relax(*first, side, 0, true);
  while (!queue.empty()) {
    auto [e, h] = queue.front();
    queue.pop_front();
    int d = dist_[idx(e, h)];
    if (auto n = forward(e, h)) relax(*n, h, d, true);
    relax(e, rotate_cw(h), d + 1, false);
    relax(e, rotate_ccw(h), d + 1, false);
  }
}

int BdistOracle::at(const Point& p) const {
  const auto& g = grid_->region.grid;
  auto e = g.locate(p);
  if (!e || !grid_->lattice_point(*e)) throw Error(ErrorCode::InvalidArgument, "query point is not a lattice point");
  if (*e == anchor_) return 0;
  int best = kInfDist;
  for (int h = 0; h < 4; ++h) best = std::min(best, dist_[static_cast<std::size_t>(*e) * 4 + static_cast<std::size_t>(h)]);
  return best;
}

int oracle_bdist(const FaceInstance& fi, const Point& p, const PortCandidate& port) {
  auto grid = FineGrid::build(fi, 3, {p});
  BdistOracle o(grid, fi.h.vertices.at(port.anchor), port.side);
  return o.at(p);
}

}  // namespace orthext

namespace orthext {

namespace {

class ExtensionSearch {
 public:
  ExtensionSearch(const FaceInstance& fi, const FineGrid& grid, long long max_steps)
      : fi_(fi), grid_(grid), g_(grid.region.grid), max_steps_(max_steps) {
    for (const auto& p : fi.ports) {
      int a = *g_.locate(fi.h.vertices.at(p.anchor));
      element_of_[p.anchor] = a;
      side_of_[{p.anchor, p.other}] = p.side;
      fields_[{p.anchor, p.other}] = forward_field(a, p.side);
    }
    for (auto v : fi.missing_vertices) missing_.insert(v);
    edges_ = fi.missing_edges;
    occ_.assign(static_cast<std::size_t>(g_.size()), 0);
  }

  /// True if the last failed run explored everything without the budget cutting it off.
  bool exhausted() const { return !budget_cut_; }

  std::optional<OracleResult> run(int budget) {
    budget_ = budget;
    budget_cut_ = false;
    used_ = 0;
    done_.assign(edges_.size(), 0);
    routes_.assign(edges_.size(), {});
    placed_.clear();
    sides_.clear();
    if (!solve_rest()) return std::nullopt;
    OracleResult r;
    r.beta = used_;
    r.drawing = fi_.h;
    for (const auto& [v, e] : placed_) r.drawing.vertices[v] = g_.rep(e);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      std::vector<Point> pts;
      for (int e : best_routes_[i].nodes) pts.push_back(g_.rep(e));
      r.drawing.add_edge(best_routes_[i].from, best_routes_[i].to, OrthoPolyline::simplified(pts));
    }
    for (const auto& [v, e] : best_placed_) r.drawing.vertices[v] = g_.rep(e);
    r.beta = best_used_;
    return r;
  }

 private:
  struct Route {
    VertexId from = 0, to = 0;
    std::vector<int> nodes;
    int bends = 0;
  };

  std::optional<int> forward(int e, Direction h) const {
    auto edge = g_.step(e, h);
    if (!edge || !grid_.region.in(*edge)) return std::nullopt;
    return g_.step(*edge, h);
  }

  std::vector<int> forward_field(int anchor, Direction side) const {
    std::vector<int> dist(static_cast<std::size_t>(g_.size()) * 4, kInfDist);
    std::deque<std::pair<int, Direction>> queue;
    auto idx = [](int e, Direction h) { return static_cast<std::size_t>(e) * 4 + static_cast<std::size_t>(h); };
    auto relax = [&](int e, Direction h, int d, bool front) {
      if (dist[idx(e, h)] <= d) return;
      dist[idx(e, h)] = d;
      if (front)
        queue.emplace_front(e, h);
      else
        queue.emplace_back(e, h);
    };
    if (auto n = forward(anchor, side); n && grid_.region.in(*n)) relax(*n, side, 0, true);
    while (!queue.empty()) {
      auto [e, h] = queue.front();
      queue.pop_front();
      int d = dist[idx(e, h)];
      if (auto n = forward(e, h); n && grid_.region.in(*n)) relax(*n, h, d, true);
      relax(e, rotate_cw(h), d + 1, false);
      relax(e, rotate_ccw(h), d + 1, false);
    }
    return dist;
  }

  /// Least bends from arriving at node e with heading h to the anchor end of port `key`.
  int remaining_to_anchor(const std::pair<VertexId, VertexId>& key, int e, Direction h) const {
    const auto& f = fields_.at(key);
    auto at = [&](Direction d) { return f[static_cast<std::size_t>(e) * 4 + static_cast<std::size_t>(opposite(d))]; };
    int best = at(h);
    for (Direction d : {rotate_cw(h), rotate_ccw(h)})
      if (at(d) != kInfDist) best = std::min(best, at(d) + 1);
    return best;
  }

  int remaining_to_point(int e, Direction h, int target) const {
    int di = g_.i_of(target) - g_.i_of(e), dj = g_.j_of(target) - g_.j_of(e);
    int along = di * dx(h) + dj * dy(h);
    int perp = is_vertical(h) ? di : dj;
    if (perp == 0 && along > 0) return 0;
    return along >= 0 ? 1 : 2;
  }

  /// Budget test that remembers whether the budget ever cut the search.
  bool over(int total) {
    if (total <= budget_) return false;
    budget_cut_ = true;
    return true;
  }

  bool fixed(VertexId v) const { return !missing_.count(v) || placed_.count(v); }

  bool side_ok(VertexId v, Direction side) const {
    auto it = sides_.find(v);
    if (it == sides_.end()) return true;
    if (it->second.count(side)) return false;
    if (fi_.must_bend.count(v))
      for (Direction s : it->second)
        if (is_vertical(s) == is_vertical(side)) return false;
    return true;
  }

  int edge_lower_bound(std::size_t i) const {
    const auto& e = edges_[i];
    if (!fixed(e.u) || !fixed(e.v)) return 0;
    auto anchor = [&](VertexId a) { return !missing_.count(a); };
    if (anchor(e.u) || anchor(e.v)) {
      VertexId a = anchor(e.u) ? e.u : e.v, b = e.other(a);
      int target = anchor(b) ? element_of_.at(b) : placed_.at(b);
      const auto& f = fields_.at({a, b});
      int best = kInfDist;
      if (anchor(b)) {
        // Arrive at the far anchor along its port ray.
        Direction s = side_of_.at({b, a});
        auto n = forward(target, s);
        if (!n || !grid_.region.in(*n)) return kInfDist;
        return std::min(kInfDist - 1, f[static_cast<std::size_t>(*n) * 4 + static_cast<std::size_t>(opposite(s))]);
      }
      for (int h = 0; h < 4; ++h) best = std::min(best, f[static_cast<std::size_t>(target) * 4 + static_cast<std::size_t>(h)]);
      return best;
    }
    return 0;
  }

  int rest_lower_bound(std::size_t skip) const {
    int sum = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (done_[i] || i == skip) continue;
      int lb = edge_lower_bound(i);
      if (lb == kInfDist) return kInfDist;
      sum += lb;
    }
    return sum;
  }

  bool solve_rest() {
    std::optional<std::size_t> pick;
    int pick_rank = -1;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (done_[i]) continue;
      int rank = static_cast<int>(fixed(edges_[i].u)) + static_cast<int>(fixed(edges_[i].v));
      if (rank > pick_rank) pick = i, pick_rank = rank;
    }
    if (!pick) {
      best_routes_ = routes_;
      best_placed_ = placed_;
      best_used_ = used_;
      return true;
    }
    if (pick_rank == 0) return false;
    const std::size_t i = *pick;
    const EdgeKey e = edges_[i];
    int rest = rest_lower_bound(i);
    if (rest == kInfDist) return false;
    if (over(used_ + rest)) return false;
    // Route from a fixed end, preferring an anchor so that the port ray starts the walk.
    VertexId s = fixed(e.u) ? e.u : e.v;
    if (fixed(e.u) && fixed(e.v) && missing_.count(e.u) && !missing_.count(e.v)) s = e.v;
    VertexId t = e.other(s);
    Route r;
    r.from = s;
    r.to = t;
    if (!missing_.count(s)) {
      int a = element_of_.at(s);
      r.nodes = {a};
      return walk(i, r, a, side_of_.at({s, t}), 0, rest, std::nullopt);
    }
    int p = placed_.at(s);
    r.nodes = {p};
    for (Direction d : kDirections) {
      if (!side_ok(s, d)) continue;
      sides_[s].insert(d);
      bool ok = walk(i, r, p, d, 0, rest, d);
      sides_[s].erase(d);
      if (ok) return true;
    }
    return false;
  }

  bool complete(std::size_t i, Route& r, Direction arrive_heading, int bends) {
    const VertexId t = r.to;
    bool t_missing = missing_.count(t) > 0;
    if (t_missing) sides_[t].insert(opposite(arrive_heading));
    r.bends = bends;
    routes_[i] = r;
    done_[i] = 1;
    used_ += bends;
    bool ok = solve_rest();
    used_ -= bends;
    done_[i] = 0;
    if (t_missing) sides_[t].erase(opposite(arrive_heading));
    return ok;
  }

  bool walk(std::size_t i, Route& r, int cur, Direction h, int bends, int rest, std::optional<Direction>) {
    if (++steps_ > max_steps_) throw Error(ErrorCode::GuardExceeded, "oracle search exceeded its step budget");
    auto n = forward(cur, h);
    if (!n) return false;
    const VertexId t = r.to;
    const bool t_anchor = !missing_.count(t);
    const bool t_placed = !t_anchor && placed_.count(t);
    int target = t_anchor ? element_of_.at(t) : (t_placed ? placed_.at(t) : -1);
    if (*n == target) {
      bool arrive_ok = t_anchor ? h == opposite(side_of_.at({t, r.from})) : side_ok(t, opposite(h));
      if (!arrive_ok) return false;
      r.nodes.push_back(*n);
      bool ok = complete(i, r, h, bends);
      r.nodes.pop_back();
      return ok;
    }
    if (!grid_.region.in(*n) || occ_[static_cast<std::size_t>(*n)]) return false;
    occ_[static_cast<std::size_t>(*n)] = 1;
    r.nodes.push_back(*n);
    bool ok = false;
    if (target < 0) {
      // Place the free end here.
      int lb = 0;
      placed_[t] = *n;
      for (std::size_t j = 0; j < edges_.size(); ++j)
        if (j != i && !done_[j] && edges_[j].has(t)) {
          int x = edge_lower_bound(j);
          lb = x == kInfDist ? kInfDist : lb + x;
          if (lb == kInfDist) break;
        }
      int rest_now = lb == kInfDist ? kInfDist : rest_lower_bound(i);
      if (rest_now != kInfDist && !over(used_ + bends + rest_now)) ok = complete(i, r, h, bends);
      placed_.erase(t);
    }
    if (!ok) {
      auto lb = [&](Direction d) {
        if (target < 0) return 0;
        return t_anchor ? remaining_to_anchor({t, r.from}, *n, d) : remaining_to_point(*n, d, target);
      };
      int l = lb(h);
      if (l != kInfDist && !over(used_ + bends + l + rest)) ok = walk(i, r, *n, h, bends, rest, std::nullopt);
      for (Direction d : {rotate_cw(h), rotate_ccw(h)}) {
        if (ok) break;
        int ld = lb(d);
        if (ld != kInfDist && !over(used_ + bends + 1 + ld + rest)) ok = walk(i, r, *n, d, bends + 1, rest, std::nullopt);
      }
    }
    r.nodes.pop_back();
    occ_[static_cast<std::size_t>(*n)] = 0;
    return ok;
  }

  const FaceInstance& fi_;
  const FineGrid& grid_;
  const ElementGrid& g_;
  long long max_steps_;
  long long steps_ = 0;
  std::map<VertexId, int> element_of_;
  std::map<std::pair<VertexId, VertexId>, Direction> side_of_;
  std::map<std::pair<VertexId, VertexId>, std::vector<int>> fields_;
  std::set<VertexId> missing_;
  std::vector<EdgeKey> edges_;
  std::vector<char> occ_;
  int budget_ = 0;
  bool budget_cut_ = false;
  int used_ = 0;
  std::vector<char> done_;
  std::vector<Route> routes_;
  std::map<VertexId, int> placed_;
  std::map<VertexId, std::set<Direction>> sides_;
  std::vector<Route> best_routes_;
  std::map<VertexId, int> best_placed_;
  int best_used_ = 0;
};

}  // namespace

std::optional<OracleResult> oracle_solve(const FaceInstance& fi, const OracleOptions& opt) {
  if (fi.k() > opt.max_missing_vertices || static_cast<int>(fi.missing_edges.size()) > opt.max_missing_edges)
    throw Error(ErrorCode::GuardExceeded, "instance too large for the oracle");
  fi.check();
  int r = opt.resolution > 0 ? opt.resolution : std::max(3, static_cast<int>(fi.missing_edges.size()) + 1);
  auto grid = FineGrid::build(fi, r);
  int points = 0;
  for (int e : grid.region.inside_elements()) points += grid.lattice_point(e);
  if (points > opt.max_lattice_points) throw Error(ErrorCode::GuardExceeded, "oracle lattice too large");
  ExtensionSearch search(fi, grid, opt.max_steps);
  for (int b = 0; b <= opt.bend_cap; ++b) {
    if (auto r = search.run(b)) return r;
    if (search.exhausted()) break;
  }
  return std::nullopt;
}

std::optional<int> oracle_bmoe(const BmoeInstance& inst, const OracleOptions& opt) {
  inst.check();
  int cap = opt.bend_cap;
  if (inst.budget) cap = std::min(cap, *inst.budget);
  if (inst.missing_edges().empty()) return 0;
  std::optional<int> best;
  for (const auto& br : reduce_to_faces(inst)) {
    int total = br.offset;
    const int limit = best ? *best - 1 : cap;
    for (const auto& fi : br.faces) {
      if (total > limit) break;
      OracleOptions o = opt;
      o.bend_cap = limit - total;
      auto r = oracle_solve(fi, o);
      total = r ? total + r->beta : limit + 1;
    }
    if (total <= limit) best = total;
  }
  return best;
}

}  // namespace orthext
