#include "orthext/dp.hpp"

#include <algorithm>
#include <deque>
#include <iostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "orthext/error.hpp"

namespace orthext {

void SolveStats::add(const SolveStats& o) {
  branches += o.branches;
  faces += o.faces;
  bags += o.bags;
  configs += o.configs;
  local_solutions += o.local_solutions;
  max_width = std::max(max_width, o.max_width);
  max_sectors = std::max(max_sectors, o.max_sectors);
}

DpModel::DpModel(const FaceInstance& fi, const SectorDecomposition& dec, const SectorGrid& grid) : fi_(fi) {
  const auto& ag = dec.region.grid;
  std::vector<Rat> xs = ag.xs(), ys = ag.ys();
  std::set<Rat> ux, uy;
  for (const auto& pts : grid.points)
    for (const auto& p : pts) {
      xs.push_back(p.x);
      ys.push_back(p.y);
      ux.insert(p.x);
      uy.insert(p.y);
    }
  for (const auto& port : fi.ports) {
    const auto& p = fi.h.vertices.at(port.anchor);
    ux.insert(p.x);
    uy.insert(p.y);
  }
  lattice_ = ElementGrid(std::move(xs), std::move(ys));
  const auto& L = lattice_;
  sectors_ = static_cast<int>(dec.sectors.size());
  owner_.assign(static_cast<std::size_t>(L.size()), -1);
  bend_ok_.assign(static_cast<std::size_t>(L.size()), 0);
  items_.resize(static_cast<std::size_t>(sectors_));
  for (int e = 0; e < L.size(); ++e) {
    if ((L.i_of(e) & 1) && (L.j_of(e) & 1)) continue;
    auto at = ag.locate(L.rep(e));
    if (!at) continue;
    int s = dec.sector_of[static_cast<std::size_t>(*at)];
    owner_[static_cast<std::size_t>(e)] = s;
    if (s >= 0) items_[static_cast<std::size_t>(s)].push_back(e);
  }
  usable_col_.assign(static_cast<std::size_t>(L.ni()), 0);
  usable_row_.assign(static_cast<std::size_t>(L.nj()), 0);
  for (int i = 0; i < L.ni(); i += 2) usable_col_[static_cast<std::size_t>(i)] = ux.count(L.x_at(i)) > 0;
  for (int j = 0; j < L.nj(); j += 2) usable_row_[static_cast<std::size_t>(j)] = uy.count(L.y_at(j)) > 0;
  for (const auto& pts : grid.points)
    for (const auto& p : pts) {
      int n = *L.locate(p);
      if (owner_[static_cast<std::size_t>(n)] >= 0) bend_ok_[static_cast<std::size_t>(n)] = 1;
    }

  vertices_ = fi.missing_vertices;
  must_bend_.assign(vertices_.size(), 0);
  incident_.resize(vertices_.size());
  anchor_ends_.resize(static_cast<std::size_t>(sectors_));
  std::map<VertexId, int> index;
  for (std::size_t a = 0; a < vertices_.size(); ++a) {
    index[vertices_[a]] = static_cast<int>(a);
    must_bend_[a] = fi.must_bend.count(vertices_[a]) > 0;
  }
  if (vertices_.size() > 64 || fi.missing_edges.size() > 64)
    throw Error(ErrorCode::GuardExceeded, "too many missing elements for the dynamic program");
  for (const auto& key : fi.missing_edges) {
    Edge e;
    e.key = key;
    const int ei = static_cast<int>(edges_.size());
    for (int j = 0; j < 2; ++j) {
      VertexId id = j == 0 ? key.u : key.v;
      End& end = e.end[j];
      end.id = id;
      if (auto it = index.find(id); it != index.end()) {
        end.vertex = it->second;
        incident_[static_cast<std::size_t>(it->second)].push_back({ei, j});
        continue;
      }
      auto port = fi.port_of(id, key.other(id));
      if (!port) throw Error(ErrorCode::ValidationError, "missing edge end has no port");
      end.anchor = true;
      end.side = port->side;
      end.node = *L.locate(fi.h.vertices.at(id));
      auto first = L.step(end.node, end.side);
      end.owner = first ? owner_[static_cast<std::size_t>(*first)] : -1;
      if (end.owner < 0)
        blocked_ = true;
      else
        anchor_ends_[static_cast<std::size_t>(end.owner)].push_back({ei, j});
    }
    edges_.push_back(e);
  }
  reach_.resize(edges_.size() * 2);
  for (std::size_t ei = 0; ei < edges_.size(); ++ei)
    for (int j = 0; j < 2; ++j) {
      const End& end = edges_[ei].end[j];
      if (end.anchor && end.owner >= 0) reach_[ei * 2 + static_cast<std::size_t>(j)] = reach_field(end.node, end.side);
    }
}

std::vector<int> DpModel::reach_field(int anchor, Direction side) const {
  const auto& L = lattice_;
  std::vector<int> dist(static_cast<std::size_t>(L.size()) * 4, kInfDist);
  std::deque<std::pair<int, Direction>> queue;
  auto relax = [&](int n, Direction h, int d, bool front) {
    int& cur = dist[static_cast<std::size_t>(n) * 4 + static_cast<std::size_t>(h)];
    if (d >= cur) return;
    cur = d;
    if (front)
      queue.emplace_front(n, h);
    else
      queue.emplace_back(n, h);
  };
  auto forward = [&](int n, Direction h) -> std::optional<int> {
    auto e = L.step(n, h);
    if (!e || owner(*e) < 0) return std::nullopt;
    auto next = L.step(*e, h);
    if (!next || owner(*next) < 0) return std::nullopt;
    return next;
  };
  if (auto first = forward(anchor, side)) relax(*first, side, 0, true);
  while (!queue.empty()) {
    auto [n, h] = queue.front();
    queue.pop_front();
    const int d = dist[static_cast<std::size_t>(n) * 4 + static_cast<std::size_t>(h)];
    if (auto next = forward(n, h)) relax(*next, h, d, true);
    if (bend_ok(n)) {
      relax(n, rotate_cw(h), d + 1, false);
      relax(n, rotate_ccw(h), d + 1, false);
    }
  }
  return dist;
}

int DpModel::reach(int edge, int end, int node, Direction h) const {
  const auto& f = reach_[static_cast<std::size_t>(edge) * 2 + static_cast<std::size_t>(end)];
  if (f.empty()) return 0;
  return f[static_cast<std::size_t>(node) * 4 + static_cast<std::size_t>(h)];
}

int DpModel::other_side(const CrossingToken& t, int sector) const {
  int a = owner(t.node);
  int b = owner(*lattice_.step(t.node, t.dir));
  return a == sector ? b : a;
}

namespace {

using Signature = std::tuple<std::vector<CrossingToken>, std::uint64_t, std::uint64_t>;

Signature signature_of(const LocalSolution& s) { return {s.tokens, s.placed, s.edges}; }

struct Caps {
  int budget = 0;  ///< bends left for this sector
  int total = 0;   ///< cap on the whole extension
  int fragments = 1;
  int fragment_bends = 1;
  long long max_steps = 0;
};

/// Enumerates the local solutions of one sector given the tokens fixed by neighbours in the
/// current bag. Fragments are started in a canonical order: fixed tokens, anchors, vertices
/// placed here, then optional vertex placements and optional fragments that enter and leave
/// through undecided boundaries.
class LocalSearch {
 public:
  LocalSearch(const DpModel& m, int w, const std::vector<char>& in_bag, const std::vector<CrossingToken>& fixed,
              std::uint64_t forbidden, const Caps& caps, std::vector<char>& occ, long long& steps)
      : m_(m), L_(m.lattice()), w_(w), in_bag_(in_bag), fixed_(fixed), forbidden_(forbidden), caps_(caps),
        occ_(occ), steps_(steps) {
    fixed_used_.assign(fixed_.size(), 0);
    end_done_.assign(m.edges().size() * 2, 0);
    pos_.assign(m.vertices().size(), -1);
    sides_.assign(m.vertices().size(), 0);
    frag_count_.assign(m.edges().size(), 0);
    lb_.assign(m.edges().size(), 0);
    for (int item : m.items(w)) {
      if (m.is_node(item) && m.bend_ok(item)) grid_nodes_.push_back(item);
      for (Direction d : kDirections) {
        auto nb = L_.step(item, d);
        if (!nb) continue;
        int u = m.owner(*nb);
        if (u < 0 || u == w || in_bag_[static_cast<std::size_t>(u)]) continue;
        Direction h = opposite(d);
        bool usable = is_vertical(h) ? (L_.i_of(item) % 2 == 0 && m.usable_column(L_.i_of(item)))
                                     : (L_.j_of(item) % 2 == 0 && m.usable_row(L_.j_of(item)));
        if (!usable) continue;
        Entry en;
        en.item = item;
        en.heading = h;
        en.from_node = m.is_node(*nb);
        en.node = en.from_node ? *nb : item;
        en.dir = en.from_node ? h : d;
        entries_.push_back(en);
      }
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.node * 4 + static_cast<int>(a.dir) < b.node * 4 + static_cast<int>(b.dir); });
  }

  std::vector<LocalSolution> run() {
    next();
    std::vector<LocalSolution> out;
    out.reserve(results_.size());
    for (auto& [_, s] : results_) out.push_back(std::move(s));
    return out;
  }

 private:
  struct Entry {
    int item = -1;         ///< first item inside the sector
    Direction heading = Direction::N;
    bool from_node = false;  ///< the outside item is a node
    int node = -1;
    Direction dir = Direction::N;
  };

  char& done(int edge, int end) { return end_done_[static_cast<std::size_t>(edge * 2 + end)]; }
  bool is_done(int edge, int end) const { return end_done_[static_cast<std::size_t>(edge * 2 + end)] != 0; }
  char& occ(int item) { return occ_[static_cast<std::size_t>(item)]; }

  void tick() {
    if (++steps_ > caps_.max_steps) throw Error(ErrorCode::GuardExceeded, "local solution enumeration exceeded its step budget");
  }

  bool side_ok(int x, Direction s) const {
    std::uint8_t mask = sides_[static_cast<std::size_t>(x)];
    if (mask & (1u << static_cast<int>(s))) return false;
    if (m_.must_bend(x))
      for (Direction t : kDirections)
        if ((mask & (1u << static_cast<int>(t))) && is_vertical(t) == is_vertical(s)) return false;
    return true;
  }

  /// Lower bound on the bends of the current edge when its walk stands at n facing h.
  int edge_bound(int n, Direction h) const {
    const int e = cur_.edge;
    const auto& end = m_.edges()[static_cast<std::size_t>(e)].end[target_];
    const int from = m_.reach(e, 1 - target_, n, h);
    if (from == kInfDist) return kInfDist;
    int to = 0;
    if (end.anchor) {
      to = m_.reach(e, target_, n, opposite(h));
      if (to == kInfDist) return kInfDist;
    } else if (int p = pos_[static_cast<std::size_t>(end.vertex)]; p >= 0) {
      to = turns_to(n, h, p);
    }
    return std::max(from, cur_bends_) + to;
  }

  /// 0 if p lies ahead on the line, 1 if it lies in the open half-plane ahead, 2 otherwise.
  int turns_to(int n, Direction h, int p) const {
    const int di = (L_.i_of(p) - L_.i_of(n)) * dx(h) + (L_.j_of(p) - L_.j_of(n)) * dy(h);
    const bool on_line = is_vertical(h) ? L_.i_of(p) == L_.i_of(n) : L_.j_of(p) == L_.j_of(n);
    if (di > 0) return on_line ? 0 : 1;
    return 2;
  }

  /// Raises the per-edge bounds of the edges from x to anchors for x sitting at n; false (with
  /// nothing changed) if the bounds then exceed the cap. Undo with the returned list.
  bool raise_for_placement(int x, int n, std::vector<std::pair<int, int>>& undo) {
    undo.clear();
    int sum = lb_sum_;
    for (auto [ei, j] : m_.incidences()[static_cast<std::size_t>(x)]) {
      if (!m_.edges()[static_cast<std::size_t>(ei)].end[1 - j].anchor) continue;
      int best = kInfDist;
      for (Direction d : kDirections) best = std::min(best, m_.reach(ei, 1 - j, n, d));
      if (best == kInfDist) return false;
      const int old = lb_[static_cast<std::size_t>(ei)];
      if (best > old) {
        sum += best - old;
        undo.push_back({ei, old});
      }
    }
    if (sum > caps_.total) {
      undo.clear();
      return false;
    }
    for (auto [ei, old] : undo) {
      (void)old;
      int best = kInfDist;
      for (auto [e2, j] : m_.incidences()[static_cast<std::size_t>(x)])
        if (e2 == ei)
          for (Direction d : kDirections) best = std::min(best, m_.reach(ei, 1 - j, n, d));
      lb_[static_cast<std::size_t>(ei)] = best;
    }
    lb_sum_ = sum;
    return true;
  }
  void undo_bounds(const std::vector<std::pair<int, int>>& undo) {
    for (auto [ei, old] : undo) {
      lb_sum_ -= lb_[static_cast<std::size_t>(ei)] - old;
      lb_[static_cast<std::size_t>(ei)] = old;
    }
  }

  bool placeable(int x) const {
    return pos_[static_cast<std::size_t>(x)] < 0 && !((forbidden_ >> x) & 1u);
  }

  bool token_taken(int key) const {
    for (const auto& t : free_)
      if (t.key() == key) return true;
    for (std::size_t i = 0; i < fixed_.size(); ++i)
      if (fixed_used_[i] && fixed_[i].key() == key) return true;
    return false;
  }

  void next() {
    tick();
    for (std::size_t i = 0; i < fixed_.size(); ++i)
      if (!fixed_used_[i]) return start_from_fixed(i);
    for (auto [ei, j] : m_.anchor_ends(w_))
      if (!is_done(ei, j)) return start_from_anchor(ei, j);
    for (std::size_t x = 0; x < pos_.size(); ++x) {
      if (pos_[x] < 0) continue;
      for (auto [ei, j] : m_.incidences()[x])
        if (!is_done(ei, j)) return start_from_vertex(static_cast<int>(x), ei, j);
    }
    record();
    if (!spont_phase_) {
      for (int x = spont_vertex_; x < static_cast<int>(pos_.size()); ++x) {
        if (!placeable(x)) continue;
        for (int n : grid_nodes_) {
          std::vector<std::pair<int, int>> undo;
          if (occ(n) || !raise_for_placement(x, n, undo)) continue;
          int saved = spont_vertex_;
          spont_vertex_ = x + 1;
          place(x, n);
          occ(n) = 1;
          next();
          occ(n) = 0;
          unplace(x);
          spont_vertex_ = saved;
          undo_bounds(undo);
        }
      }
    }
    const bool saved_phase = spont_phase_;
    const std::size_t saved_entry = spont_entry_;
    spont_phase_ = true;
    for (std::size_t a = saved_entry; a < entries_.size(); ++a) {
      spont_entry_ = a + 1;
      for (int ei = 0; ei < static_cast<int>(m_.edges().size()); ++ei)
        for (int j = 0; j < 2; ++j) start_spontaneous(a, ei, j);
    }
    spont_phase_ = saved_phase;
    spont_entry_ = saved_entry;
  }

  void place(int x, int n) {
    pos_[static_cast<std::size_t>(x)] = n;
    placed_ |= std::uint64_t{1} << x;
  }
  void unplace(int x) {
    pos_[static_cast<std::size_t>(x)] = -1;
    placed_ &= ~(std::uint64_t{1} << x);
  }

  struct Saved {
    Fragment frag;
    int target = 0;
    int bends = 0;
    bool spont = false;
    int spont_key = -1;
    int lb = 0;
  };
  Saved save() const { return {cur_, target_, cur_bends_, cur_spont_, cur_spont_key_, cur_lb_}; }
  void restore(Saved s) {
    cur_ = std::move(s.frag);
    target_ = s.target;
    cur_bends_ = s.bends;
    cur_spont_ = s.spont;
    cur_spont_key_ = s.spont_key;
    cur_lb_ = s.lb;
  }

  bool begin(int edge, int target, std::optional<int> start_token) {
    if (frag_count_[static_cast<std::size_t>(edge)] >= caps_.fragments) return false;
    ++frag_count_[static_cast<std::size_t>(edge)];
    cur_ = Fragment{};
    cur_.edge = edge;
    cur_.start_token = start_token;
    target_ = target;
    cur_bends_ = 0;
    cur_spont_ = false;
    cur_lb_ = 0;
    return true;
  }
  void end_fragment_slot(int edge) { --frag_count_[static_cast<std::size_t>(edge)]; }

  void start_from_fixed(std::size_t i) {
    const CrossingToken& t = fixed_[i];
    const bool has_node = m_.owner(t.node) == w_;
    const bool toward_v = has_node ? !t.forward : t.forward;
    fixed_used_[i] = 1;
    auto saved = save();
    if (begin(t.edge, toward_v ? 1 : 0, t.key())) {
      if (has_node) {
        enter_node(t.node, opposite(t.dir));
      } else {
        int item = *L_.step(t.node, t.dir);
        enter_edge(item, t.dir);
      }
      end_fragment_slot(t.edge);
    }
    restore(std::move(saved));
    fixed_used_[i] = 0;
  }

  void start_from_anchor(int ei, int j) {
    const auto& end = m_.edges()[static_cast<std::size_t>(ei)].end[j];
    done(ei, j) = 1;
    auto saved = save();
    if (begin(ei, 1 - j, std::nullopt)) {
      cur_.nodes.push_back(end.node);
      enter_edge(*L_.step(end.node, end.side), end.side);
      end_fragment_slot(ei);
    }
    restore(std::move(saved));
    done(ei, j) = 0;
  }

  void start_from_vertex(int x, int ei, int j) {
    const int n = pos_[static_cast<std::size_t>(x)];
    done(ei, j) = 1;
    auto saved = save();
    if (begin(ei, 1 - j, std::nullopt)) {
      cur_.nodes.push_back(n);
      for (Direction d : kDirections) {
        if (!side_ok(x, d)) continue;
        sides_[static_cast<std::size_t>(x)] |= static_cast<std::uint8_t>(1u << static_cast<int>(d));
        move(n, d);
        sides_[static_cast<std::size_t>(x)] &= static_cast<std::uint8_t>(~(1u << static_cast<int>(d)));
      }
      end_fragment_slot(ei);
    }
    restore(std::move(saved));
    done(ei, j) = 0;
  }

  void start_spontaneous(std::size_t a, int ei, int j) {
    const Entry& en = entries_[a];
    CrossingToken t{en.node, en.dir, ei, false};
    // Entering moves node -> edge when the outside item is the node.
    t.forward = (j == 1) == en.from_node;
    if (token_taken(t.key())) return;
    auto saved = save();
    if (begin(ei, j, t.key())) {
      cur_spont_ = true;
      cur_spont_key_ = t.key();
      free_.push_back(t);
      if (m_.is_node(en.item))
        enter_node(en.item, en.heading);
      else
        enter_edge(en.item, en.heading);
      free_.pop_back();
      end_fragment_slot(ei);
    }
    restore(std::move(saved));
  }

  /// Occupies the lattice edge `item` (inside the sector) and keeps walking.
  void enter_edge(int item, Direction h) {
    if (occ(item)) return;
    occ(item) = 1;
    move(item, h);
    occ(item) = 0;
  }

  void enter_node(int n, Direction h) {
    tick();
    const auto& edge = m_.edges()[static_cast<std::size_t>(cur_.edge)];
    const auto& end = edge.end[target_];
    if (occ(n)) {
      // Arrival at the target vertex placed here.
      if (!end.anchor && pos_[static_cast<std::size_t>(end.vertex)] == n && !is_done(cur_.edge, target_) &&
          side_ok(end.vertex, opposite(h))) {
        const int x = end.vertex;
        done(cur_.edge, target_) = 1;
        sides_[static_cast<std::size_t>(x)] |= static_cast<std::uint8_t>(1u << static_cast<int>(opposite(h)));
        cur_.nodes.push_back(n);
        finish(std::nullopt);
        cur_.nodes.pop_back();
        sides_[static_cast<std::size_t>(x)] &= static_cast<std::uint8_t>(~(1u << static_cast<int>(opposite(h))));
        done(cur_.edge, target_) = 0;
      }
      return;
    }
    const int bound = edge_bound(n, h);
    if (bound == kInfDist) return;
    const int saved_lb = cur_lb_;
    cur_lb_ = std::max(cur_lb_, bound);
    const int own = lb_[static_cast<std::size_t>(cur_.edge)];
    if (lb_sum_ - own + std::max(own, cur_lb_) > caps_.total) {
      cur_lb_ = saved_lb;
      return;
    }
    occ(n) = 1;
    cur_.nodes.push_back(n);
    std::vector<std::pair<int, int>> undo;
    if (!end.anchor && !cur_spont_ && m_.bend_ok(n) && placeable(end.vertex) &&
        raise_for_placement(end.vertex, n, undo)) {
      const int x = end.vertex;
      const int own_now = lb_[static_cast<std::size_t>(cur_.edge)];
      if (lb_sum_ - own_now + std::max(own_now, cur_lb_) <= caps_.total) {
        place(x, n);
        done(cur_.edge, target_) = 1;
        sides_[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(1u << static_cast<int>(opposite(h)));
        finish(std::nullopt);
        sides_[static_cast<std::size_t>(x)] = 0;
        done(cur_.edge, target_) = 0;
        unplace(x);
      }
      undo_bounds(undo);
    }
    move(n, h);
    if (m_.bend_ok(n) && bends_ < caps_.budget && cur_bends_ < caps_.fragment_bends) {
      ++bends_;
      ++cur_bends_;
      move(n, rotate_cw(h));
      move(n, rotate_ccw(h));
      --cur_bends_;
      --bends_;
    }
    cur_.nodes.pop_back();
    occ(n) = 0;
    cur_lb_ = saved_lb;
  }

  /// Steps from `item` (inside the sector) in direction h.
  void move(int item, Direction h) {
    auto nb = L_.step(item, h);
    if (!nb) return;
    const auto& edge = m_.edges()[static_cast<std::size_t>(cur_.edge)];
    const auto& end = edge.end[target_];
    if (end.anchor && *nb == end.node) {
      if (h == opposite(end.side) && end.owner == w_ && !is_done(cur_.edge, target_)) {
        done(cur_.edge, target_) = 1;
        cur_.nodes.push_back(end.node);
        finish(std::nullopt);
        cur_.nodes.pop_back();
        done(cur_.edge, target_) = 0;
      }
      return;
    }
    const int u = m_.owner(*nb);
    if (u < 0) return;
    if (u == w_) {
      if (m_.is_node(*nb))
        enter_node(*nb, h);
      else
        enter_edge(*nb, h);
      return;
    }
    const bool from_node = m_.is_node(item);
    CrossingToken t{from_node ? item : *nb, from_node ? h : opposite(h), cur_.edge, false};
    t.forward = (target_ == 1) == from_node;
    if (in_bag_[static_cast<std::size_t>(u)]) {
      for (std::size_t i = 0; i < fixed_.size(); ++i) {
        if (fixed_used_[i] || !(fixed_[i] == t)) continue;
        fixed_used_[i] = 1;
        finish(t.key());
        fixed_used_[i] = 0;
        return;
      }
      return;
    }
    if (cur_spont_ && t.key() <= cur_spont_key_) return;
    if (token_taken(t.key())) return;
    free_.push_back(t);
    finish(t.key());
    free_.pop_back();
  }

  void finish(std::optional<int> end_token) {
    Fragment f = cur_;
    f.end_token = end_token;
    if (target_ == 0) {
      std::reverse(f.nodes.begin(), f.nodes.end());
      std::swap(f.start_token, f.end_token);
    }
    frags_.push_back(std::move(f));
    const std::size_t e = static_cast<std::size_t>(cur_.edge);
    const int old = lb_[e];
    if (cur_lb_ > old) {
      lb_sum_ += cur_lb_ - old;
      lb_[e] = cur_lb_;
    }
    auto saved = save();
    next();
    restore(std::move(saved));
    lb_sum_ -= lb_[e] - old;
    lb_[e] = old;
    frags_.pop_back();
  }

  void record() {
    LocalSolution s;
    s.sector = w_;
    s.tokens = free_;
    for (std::size_t i = 0; i < fixed_.size(); ++i)
      if (fixed_used_[i]) s.tokens.push_back(fixed_[i]);
    std::sort(s.tokens.begin(), s.tokens.end());
    s.placed = placed_;
    for (const auto& f : frags_) s.edges |= std::uint64_t{1} << f.edge;
    s.bends = bends_;
    for (std::size_t x = 0; x < pos_.size(); ++x)
      if (pos_[x] >= 0) s.positions[static_cast<int>(x)] = pos_[x];
    s.fragments = frags_;
    auto sig = signature_of(s);
    auto it = results_.find(sig);
    if (it == results_.end())
      results_.emplace(std::move(sig), std::move(s));
    else if (s.bends < it->second.bends)
      it->second = std::move(s);
  }

  const DpModel& m_;
  const ElementGrid& L_;
  const int w_;
  const std::vector<char>& in_bag_;
  const std::vector<CrossingToken>& fixed_;
  const std::uint64_t forbidden_;
  const Caps caps_;
  std::vector<char>& occ_;
  long long& steps_;

  std::vector<char> fixed_used_;
  std::vector<char> end_done_;
  std::vector<int> pos_;
  std::vector<std::uint8_t> sides_;
  std::uint64_t placed_ = 0;
  std::vector<CrossingToken> free_;
  std::vector<Fragment> frags_;
  std::vector<int> frag_count_;
  int bends_ = 0;
  std::vector<int> lb_;  ///< per edge, lower bound on its bends implied by the fragments so far
  int lb_sum_ = 0;
  std::vector<int> grid_nodes_;
  std::vector<Entry> entries_;

  Fragment cur_;
  int target_ = 0;
  int cur_bends_ = 0;
  bool cur_spont_ = false;
  int cur_spont_key_ = -1;
  int cur_lb_ = 0;
  int spont_vertex_ = 0;
  bool spont_phase_ = false;
  std::size_t spont_entry_ = 0;

  std::map<Signature, LocalSolution> results_;
};

Caps caps_for(const DpModel& m, int budget, int total, const DpOptions& opt) {
  Caps c;
  c.budget = budget;
  c.total = total;
  c.fragments = opt.max_fragments_per_edge > 0 ? opt.max_fragments_per_edge : m.k() + 1;
  c.fragment_bends = opt.max_bends_per_fragment > 0 ? opt.max_bends_per_fragment : 28 * m.k() + 20;
  c.max_steps = opt.max_search_steps;
  return c;
}

/// Configuration as seen from the rest of the decomposition: vertices placed and edges touched
/// so far, crossings still open towards sectors not yet introduced, and the local solutions of
/// bag sectors that a join above compares.
struct RecordKey {
  std::uint64_t xv = 0, xe = 0;
  std::vector<CrossingToken> open;
  std::vector<int> ids;
  friend bool operator==(const RecordKey&, const RecordKey&) = default;
};

struct RecordKeyHash {
  std::size_t operator()(const RecordKey& k) const {
    std::size_t h = std::hash<std::uint64_t>()(k.xv) * 31 + std::hash<std::uint64_t>()(k.xe);
    for (const auto& t : k.open)
      h = h * 1000003u + static_cast<std::size_t>((t.key() * 64 + t.edge) * 2 + (t.forward ? 1 : 0));
    for (int t : k.ids) h = h * 1000033u + static_cast<std::size_t>(t);
    return h;
  }
};

struct Record {
  RecordKey key;
  int value = 0;  ///< bends in all sectors introduced below
  int back0 = -1, back1 = -1;
  int choice = -1;  ///< local solution chosen at an introduce node
};

struct Table {
  std::vector<Record> rows;
  std::unordered_map<RecordKey, int, RecordKeyHash> index;

  void offer(RecordKey key, int value, int b0, int b1, int choice, std::size_t limit) {
    auto it = index.find(key);
    if (it != index.end()) {
      Record& r = rows[static_cast<std::size_t>(it->second)];
      if (value < r.value) {
        r.value = value;
        r.back0 = b0;
        r.back1 = b1;
        r.choice = choice;
      }
      return;
    }
    if (rows.size() >= limit) throw Error(ErrorCode::GuardExceeded, "record table exceeds its limit");
    index.emplace(key, static_cast<int>(rows.size()));
    rows.push_back({std::move(key), value, b0, b1, choice});
  }
};

/// Interned local solutions per sector.
struct Store {
  std::vector<std::vector<LocalSolution>> sols;
  std::vector<std::map<Signature, int>> index;

  explicit Store(int sectors) : sols(static_cast<std::size_t>(sectors)), index(static_cast<std::size_t>(sectors)) {}

  int intern(LocalSolution s) {
    auto& idx = index[static_cast<std::size_t>(s.sector)];
    auto& vec = sols[static_cast<std::size_t>(s.sector)];
    auto sig = signature_of(s);
    auto it = idx.find(sig);
    if (it != idx.end()) {
      if (s.bends < vec[static_cast<std::size_t>(it->second)].bends) vec[static_cast<std::size_t>(it->second)] = std::move(s);
      return it->second;
    }
    int id = static_cast<int>(vec.size());
    idx.emplace(std::move(sig), id);
    vec.push_back(std::move(s));
    return id;
  }
  const LocalSolution& at(int sector, int id) const {
    return sols[static_cast<std::size_t>(sector)][static_cast<std::size_t>(id)];
  }
};

Drawing assemble(const DpModel& m, const std::vector<const LocalSolution*>& chosen, int beta) {
  const auto& L = m.lattice();
  const auto& fi = m.instance();
  Drawing d = fi.h;
  std::vector<std::vector<const Fragment*>> by_edge(m.edges().size());
  for (const auto* s : chosen) {
    for (const auto& [x, n] : s->positions) d.vertices[m.vertices()[static_cast<std::size_t>(x)]] = L.rep(n);
    for (const auto& f : s->fragments) by_edge[static_cast<std::size_t>(f.edge)].push_back(&f);
  }
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InternalInconsistency, msg); };
  for (std::size_t ei = 0; ei < m.edges().size(); ++ei) {
    const auto& frags = by_edge[ei];
    std::map<int, const Fragment*> by_start;
    const Fragment* first = nullptr;
    for (const auto* f : frags) {
      if (f->start_token)
        by_start[*f->start_token] = f;
      else if (first)
        fail("missing edge has two starting fragments");
      else
        first = f;
    }
    if (!first) fail("missing edge has no starting fragment");
    std::vector<Point> pts;
    std::size_t used = 0;
    for (const Fragment* f = first; f;) {
      ++used;
      for (int n : f->nodes) pts.push_back(L.rep(n));
      if (!f->end_token) break;
      auto it = by_start.find(*f->end_token);
      if (it == by_start.end()) fail("fragment chain is broken at a crossing");
      f = it->second;
      if (used > frags.size()) fail("fragment chain loops");
    }
    if (used != frags.size()) fail("missing edge has fragments off its path");
    const auto& key = m.edges()[ei].key;
    d.add_edge(key.u, key.v, OrthoPolyline::simplified(pts));
  }
  auto rep = validate(d);
  if (!rep.ok()) fail("reconstructed drawing is invalid:\n" + rep.str());
  int bends = 0;
  for (const auto& e : m.edges()) bends += static_cast<int>(d.edges.at(e.key).bends());
  if (bends != beta) fail("reconstructed bends " + std::to_string(bends) + " differ from the optimum " + std::to_string(beta));
  for (const auto& e : m.edges())
    for (const auto& end : e.end)
      if (end.anchor) {
        auto ports = d.ports(end.id);
        auto it = ports.find(end.side);
        if (it == ports.end() || !(it->second == e.key)) fail("missing edge leaves an anchor off its port");
      }
  return d;
}

}  // namespace

std::vector<LocalSolution> enumerate_gridsols(const DpModel& model, int sector, int bend_cap, const DpOptions& opt) {
  std::vector<char> in_bag(static_cast<std::size_t>(model.sectors()), 0);
  std::vector<CrossingToken> fixed;
  std::vector<char> occ(static_cast<std::size_t>(model.lattice().size()), 0);
  long long steps = 0;
  LocalSearch search(model, sector, in_bag, fixed, 0, caps_for(model, bend_cap, bend_cap, opt), occ, steps);
  return search.run();
}

SolveResult dp_solve(const DpModel& model, const NiceTreeDecomposition& ntd, int cap, const DpOptions& opt) {
  SolveResult res;
  res.cap = cap;
  res.stats.faces = 1;
  res.stats.max_width = ntd.width();
  res.stats.max_sectors = model.sectors();
  if (model.edges().empty()) {
    res.status = SolveStatus::Optimum;
    res.drawing = model.instance().h;
    return res;
  }
  if (model.blocked()) return res;
  const int S = model.sectors();
  const std::size_t N = ntd.nodes.size();
  auto at = [&](int t) -> const NiceNode& { return ntd.nodes[static_cast<std::size_t>(t)]; };

  // Sectors introduced below each node, and bag sectors compared by a join above.
  std::vector<std::vector<char>> intro(N, std::vector<char>(static_cast<std::size_t>(S), 0));
  for (std::size_t t = 0; t < N; ++t) {
    for (int c : ntd.nodes[t].children)
      for (int s = 0; s < S; ++s) intro[t][static_cast<std::size_t>(s)] |= intro[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)];
    if (ntd.nodes[t].kind == NiceKind::Introduce) intro[t][static_cast<std::size_t>(ntd.nodes[t].vertex)] = 1;
  }
  std::vector<std::set<int>> above(N);
  std::vector<std::vector<int>> keep(N);
  for (std::size_t t = N; t-- > 0;) {
    const auto& node = ntd.nodes[t];
    for (int c : node.children) {
      auto& a = above[static_cast<std::size_t>(c)];
      a = above[t];
      if (node.kind == NiceKind::Join) a.insert(node.bag.begin(), node.bag.end());
    }
    for (int s : node.bag)
      if (above[t].count(s)) keep[t].push_back(s);
  }
  auto slot = [](const std::vector<int>& v, int s) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), s) - v.begin());
  };
  auto touches = [&](const CrossingToken& tok, int w) {
    return model.owner(tok.node) == w || model.owner(*model.lattice().step(tok.node, tok.dir)) == w;
  };

  Store store(S);
  std::vector<Table> tables(N);
  std::vector<char> occ(static_cast<std::size_t>(model.lattice().size()), 0);
  long long steps = 0;
  const std::size_t limit = opt.max_records;
  using CacheKey = std::tuple<std::vector<CrossingToken>, std::uint64_t>;
  for (std::size_t t = 0; t < N; ++t) {
    const auto& node = ntd.nodes[t];
    Table& out = tables[t];
    switch (node.kind) {
      case NiceKind::Leaf:
        out.offer({}, 0, -1, -1, -1, limit);
        break;
      case NiceKind::Introduce: {
        const int w = node.vertex;
        const int child = node.children[0];
        const Table& in = tables[static_cast<std::size_t>(child)];
        const auto& in_bag = intro[static_cast<std::size_t>(child)];
        const bool kept = std::binary_search(keep[t].begin(), keep[t].end(), w);
        const std::size_t p = slot(keep[t], w);
        std::map<CacheKey, std::pair<int, std::vector<int>>> cache;
        for (std::size_t r = 0; r < in.rows.size(); ++r) {
          const Record& rec = in.rows[r];
          const int room = cap - rec.value;
          if (room < 0) continue;
          std::vector<CrossingToken> fixed, rest;
          for (const auto& tok : rec.key.open) (touches(tok, w) ? fixed : rest).push_back(tok);
          CacheKey ck{fixed, rec.key.xv};
          auto it = cache.find(ck);
          if (it == cache.end() || it->second.first < room) {
            LocalSearch search(model, w, in_bag, fixed, rec.key.xv, caps_for(model, room, cap, opt), occ, steps);
            std::vector<int> ids;
            for (auto& sol : search.run()) ids.push_back(store.intern(std::move(sol)));
            it = cache.insert_or_assign(ck, std::make_pair(room, std::move(ids))).first;
          }
          for (int id : it->second.second) {
            const auto& sol = store.at(w, id);
            if (sol.bends > room) continue;
            RecordKey key;
            key.xv = rec.key.xv | sol.placed;
            key.xe = rec.key.xe | sol.edges;
            key.open = rest;
            for (const auto& tok : sol.tokens)
              if (!std::binary_search(fixed.begin(), fixed.end(), tok)) key.open.push_back(tok);
            std::sort(key.open.begin(), key.open.end());
            key.ids = rec.key.ids;
            if (kept) key.ids.insert(key.ids.begin() + static_cast<long>(p), id);
            out.offer(std::move(key), rec.value + sol.bends, static_cast<int>(r), -1, id, limit);
          }
        }
        break;
      }
      case NiceKind::Forget: {
        const int w = node.vertex;
        const int child = node.children[0];
        const Table& in = tables[static_cast<std::size_t>(child)];
        const auto& ck = keep[static_cast<std::size_t>(child)];
        const bool kept = std::binary_search(ck.begin(), ck.end(), w);
        const std::size_t p = slot(ck, w);
        for (std::size_t r = 0; r < in.rows.size(); ++r) {
          RecordKey key = in.rows[r].key;
          if (kept) key.ids.erase(key.ids.begin() + static_cast<long>(p));
          out.offer(std::move(key), in.rows[r].value, static_cast<int>(r), -1, -1, limit);
        }
        break;
      }
      case NiceKind::Join: {
        const int c0 = node.children[0], c1 = node.children[1];
        const Table& a = tables[static_cast<std::size_t>(c0)];
        const Table& b = tables[static_cast<std::size_t>(c1)];
        const auto& bag = keep[static_cast<std::size_t>(c0)];
        if (bag != node.bag || keep[static_cast<std::size_t>(c1)] != node.bag)
          throw Error(ErrorCode::InternalInconsistency, "join children do not keep the whole bag");
        std::vector<int> out_pos;
        for (int s : keep[t]) out_pos.push_back(static_cast<int>(slot(bag, s)));
        std::map<std::vector<int>, std::vector<int>> by_ids;
        for (std::size_t r = 0; r < b.rows.size(); ++r) by_ids[b.rows[r].key.ids].push_back(static_cast<int>(r));
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
          const Record& ra = a.rows[r];
          auto it = by_ids.find(ra.key.ids);
          if (it == by_ids.end()) continue;
          std::uint64_t shared = 0;
          int shared_bends = 0;
          for (std::size_t i = 0; i < bag.size(); ++i) {
            const auto& sol = store.at(bag[i], ra.key.ids[i]);
            shared |= sol.placed;
            shared_bends += sol.bends;
          }
          for (int q : it->second) {
            const Record& rb = b.rows[static_cast<std::size_t>(q)];
            if (ra.key.xv & rb.key.xv & ~shared) continue;
            const int value = ra.value + rb.value - shared_bends;
            if (value > cap) continue;
            RecordKey key;
            key.xv = ra.key.xv | rb.key.xv;
            key.xe = ra.key.xe | rb.key.xe;
            std::set_intersection(ra.key.open.begin(), ra.key.open.end(), rb.key.open.begin(), rb.key.open.end(),
                                  std::back_inserter(key.open));
            for (int i : out_pos) key.ids.push_back(ra.key.ids[static_cast<std::size_t>(i)]);
            out.offer(std::move(key), value, static_cast<int>(r), q, -1, limit);
          }
        }
        break;
      }
    }
    res.stats.bags += 1;
    res.stats.configs += out.rows.size();
    if (opt.trace)
      std::cerr << "cap " << cap << " node " << t << ' ' << static_cast<int>(node.kind) << " bag " << node.bag.size()
                << " vertex " << node.vertex << " rows " << out.rows.size() << " steps " << steps << '\n';
    // Children are not read again except for reconstruction, which needs only their rows.
    for (int c : node.children) {
      auto& idx = tables[static_cast<std::size_t>(c)].index;
      idx = {};
    }
  }
  for (const auto& v : store.sols) res.stats.local_solutions += v.size();

  const std::uint64_t all_v = model.vertices().size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << model.vertices().size()) - 1;
  const std::uint64_t all_e = model.edges().size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << model.edges().size()) - 1;
  const Table& root = tables.back();
  auto it = root.index.find(RecordKey{all_v, all_e, {}, {}});
  if (it == root.index.end()) return res;
  const Record& best = root.rows[static_cast<std::size_t>(it->second)];
  res.status = SolveStatus::Optimum;
  res.beta = best.value;

  std::vector<int> chosen(static_cast<std::size_t>(S), -1);
  std::vector<std::pair<int, int>> stack = {{ntd.root(), it->second}};
  while (!stack.empty()) {
    auto [t, r] = stack.back();
    stack.pop_back();
    const auto& node = at(t);
    const Record& rec = tables[static_cast<std::size_t>(t)].rows[static_cast<std::size_t>(r)];
    if (node.kind == NiceKind::Introduce) {
      int& c = chosen[static_cast<std::size_t>(node.vertex)];
      if (c >= 0 && c != rec.choice) throw Error(ErrorCode::InternalInconsistency, "join sides disagree on a sector");
      c = rec.choice;
    }
    if (node.children.size() > 0) stack.push_back({node.children[0], rec.back0});
    if (node.children.size() > 1) stack.push_back({node.children[1], rec.back1});
  }
  std::vector<const LocalSolution*> sols;
  for (int s = 0; s < S; ++s) {
    if (chosen[static_cast<std::size_t>(s)] < 0) throw Error(ErrorCode::InternalInconsistency, "sector without a local solution");
    sols.push_back(&store.at(s, chosen[static_cast<std::size_t>(s)]));
  }
  res.drawing = assemble(model, sols, res.beta);
  return res;
}

}  // namespace orthext
