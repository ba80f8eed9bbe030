#include "orthext/treedec.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "orthext/error.hpp"

namespace orthext {

AdjacencyList adjacency(const SectorGraph& g) {
  AdjacencyList adj(static_cast<std::size_t>(g.size));
  for (int s = 0; s < g.size; ++s) adj[static_cast<std::size_t>(s)] = g.neighbors(s);
  for (auto& l : adj) std::sort(l.begin(), l.end());
  return adj;
}

int TreeDecomposition::width() const {
  int w = 0;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()));
  return w - 1;
}

std::vector<std::vector<int>> TreeDecomposition::children() const {
  std::vector<std::vector<int>> out(bags.size());
  for (std::size_t t = 0; t < parent.size(); ++t)
    if (parent[t] >= 0) out[static_cast<std::size_t>(parent[t])].push_back(static_cast<int>(t));
  return out;
}

TreeDecomposition decompose(const AdjacencyList& g, std::uint64_t seed) {
  const int n = static_cast<int>(g.size());
  TreeDecomposition td;
  if (n == 0) {
    td.bags = {{}};
    td.parent = {-1};
    td.root = 0;
    return td;
  }
  std::vector<std::set<int>> nb(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int u : g[static_cast<std::size_t>(v)])
      if (u != v) {
        nb[static_cast<std::size_t>(v)].insert(u);
        nb[static_cast<std::size_t>(u)].insert(v);
      }
  std::mt19937_64 rng(seed);
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  std::vector<int> order, position(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> later(static_cast<std::size_t>(n));
  auto fill_in = [&](int v) {
    const auto& s = nb[static_cast<std::size_t>(v)];
    long long f = 0;
    for (auto a = s.begin(); a != s.end(); ++a)
      for (auto b = std::next(a); b != s.end(); ++b)
        if (!nb[static_cast<std::size_t>(*a)].count(*b)) ++f;
    return f;
  };
  for (int step = 0; step < n; ++step) {
    std::vector<int> best;
    long long best_fill = 0;
    std::size_t best_deg = 0;
    for (int v = 0; v < n; ++v) {
      if (gone[static_cast<std::size_t>(v)]) continue;
      long long f = fill_in(v);
      std::size_t d = nb[static_cast<std::size_t>(v)].size();
      if (best.empty() || f < best_fill || (f == best_fill && d < best_deg)) {
        best = {v};
        best_fill = f;
        best_deg = d;
      } else if (f == best_fill && d == best_deg) {
        best.push_back(v);
      }
    }
    int v = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
    gone[static_cast<std::size_t>(v)] = 1;
    position[static_cast<std::size_t>(v)] = step;
    order.push_back(v);
    const auto s = nb[static_cast<std::size_t>(v)];
    later[static_cast<std::size_t>(v)].assign(s.begin(), s.end());
    for (int a : s) {
      nb[static_cast<std::size_t>(a)].erase(v);
      for (int b : s)
        if (a != b) nb[static_cast<std::size_t>(a)].insert(b);
    }
  }
  // Bag t holds order[t] and its neighbours at elimination; the parent is the bag of the
  // first of those neighbours to be eliminated.
  td.bags.resize(static_cast<std::size_t>(n));
  td.parent.assign(static_cast<std::size_t>(n), -1);
  for (int t = 0; t < n; ++t) {
    int v = order[static_cast<std::size_t>(t)];
    auto bag = later[static_cast<std::size_t>(v)];
    int p = -1;
    for (int u : bag)
      if (p < 0 || position[static_cast<std::size_t>(u)] < p) p = position[static_cast<std::size_t>(u)];
    td.parent[static_cast<std::size_t>(t)] = p;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags[static_cast<std::size_t>(t)] = std::move(bag);
  }
  td.root = n - 1;
  for (int t = 0; t + 1 < n; ++t)
    if (td.parent[static_cast<std::size_t>(t)] < 0) td.parent[static_cast<std::size_t>(t)] = td.root;
  return td;
}

TreeDecomposition decompose(const SectorGraph& g, std::uint64_t seed) { return decompose(adjacency(g), seed); }

TreeDecomposition path_decomposition(const AdjacencyList& g) {
  const int n = static_cast<int>(g.size());
  TreeDecomposition best;
  if (n == 0) {
    best.bags = {{}};
    best.parent = {-1};
    best.root = 0;
    return best;
  }
  long long best_cost = -1;
  int best_width = -1;
  for (int start = 0; start < n; ++start) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> order = {start};
    seen[static_cast<std::size_t>(start)] = 1;
    // Unseen neighbours left per vertex.
    std::vector<int> left(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) left[static_cast<std::size_t>(v)] = static_cast<int>(g[static_cast<std::size_t>(v)].size());
    for (int u : g[static_cast<std::size_t>(start)]) --left[static_cast<std::size_t>(u)];
    int frontier = left[static_cast<std::size_t>(start)] > 0 ? 1 : 0;
    while (static_cast<int>(order.size()) < n) {
      int pick = -1, pick_frontier = 0, pick_links = 0;
      for (int v = 0; v < n; ++v) {
        if (seen[static_cast<std::size_t>(v)]) continue;
        int f = frontier, links = 0;
        for (int u : g[static_cast<std::size_t>(v)])
          if (seen[static_cast<std::size_t>(u)]) {
            ++links;
            if (left[static_cast<std::size_t>(u)] == 1) --f;
          }
        if (left[static_cast<std::size_t>(v)] - links > 0) ++f;
        if (pick < 0 || f < pick_frontier || (f == pick_frontier && links > pick_links)) {
          pick = v;
          pick_frontier = f;
          pick_links = links;
        }
      }
      seen[static_cast<std::size_t>(pick)] = 1;
      for (int u : g[static_cast<std::size_t>(pick)]) --left[static_cast<std::size_t>(u)];
      frontier = pick_frontier;
      order.push_back(pick);
    }
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    std::vector<int> last(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      last[static_cast<std::size_t>(v)] = pos[static_cast<std::size_t>(v)];
      for (int u : g[static_cast<std::size_t>(v)]) last[static_cast<std::size_t>(v)] = std::max(last[static_cast<std::size_t>(v)], pos[static_cast<std::size_t>(u)]);
    }
    TreeDecomposition td;
    int width = 0;
    long long cost = 0;
    for (int i = 0; i < n; ++i) {
      std::vector<int> bag;
      for (int j = 0; j <= i; ++j) {
        const int v = order[static_cast<std::size_t>(j)];
        if (j == i || last[static_cast<std::size_t>(v)] >= i) bag.push_back(v);
      }
      std::sort(bag.begin(), bag.end());
      width = std::max(width, static_cast<int>(bag.size()) - 1);
      cost += static_cast<long long>(bag.size() * bag.size());
      td.bags.push_back(std::move(bag));
      td.parent.push_back(i + 1 < n ? i + 1 : -1);
    }
    td.root = n - 1;
    if (best_width < 0 || width < best_width || (width == best_width && cost < best_cost)) {
      best = std::move(td);
      best_width = width;
      best_cost = cost;
    }
  }
  return best;
}

TreeDecomposition path_decomposition(const SectorGraph& g) { return path_decomposition(adjacency(g)); }

bool verify(const AdjacencyList& g, const TreeDecomposition& td) {
  const std::size_t nodes = td.bags.size();
  if (nodes == 0 || td.parent.size() != nodes || td.root < 0 || static_cast<std::size_t>(td.root) >= nodes) return false;
  if (td.parent[static_cast<std::size_t>(td.root)] != -1) return false;
  // Every node must reach the root without revisiting.
  for (std::size_t t = 0; t < nodes; ++t) {
    int cur = static_cast<int>(t);
    std::size_t hops = 0;
    while (cur != td.root) {
      if (cur < 0 || static_cast<std::size_t>(cur) >= nodes || ++hops > nodes) return false;
      cur = td.parent[static_cast<std::size_t>(cur)];
    }
  }
  const int n = static_cast<int>(g.size());
  std::vector<int> tops(static_cast<std::size_t>(n), 0), seen(static_cast<std::size_t>(n), 0);
  for (std::size_t t = 0; t < nodes; ++t) {
    const auto& bag = td.bags[t];
    int p = td.parent[t];
    for (int v : bag) {
      if (v < 0 || v >= n) return false;
      seen[static_cast<std::size_t>(v)] = 1;
      const auto& pb = p >= 0 ? td.bags[static_cast<std::size_t>(p)] : std::vector<int>{};
      if (std::find(pb.begin(), pb.end(), v) == pb.end()) ++tops[static_cast<std::size_t>(v)];
    }
  }
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)] || tops[static_cast<std::size_t>(v)] != 1) return false;
  for (int v = 0; v < n; ++v) {
    for (int u : g[static_cast<std::size_t>(v)]) {
      bool covered = false;
      for (const auto& bag : td.bags)
        if (std::find(bag.begin(), bag.end(), v) != bag.end() && std::find(bag.begin(), bag.end(), u) != bag.end()) {
          covered = true;
          break;
        }
      if (!covered) return false;
    }
  }
  return true;
}

bool verify(const SectorGraph& g, const TreeDecomposition& td) { return verify(adjacency(g), td); }

int NiceTreeDecomposition::width() const {
  int w = 0;
  for (const auto& n : nodes) w = std::max(w, static_cast<int>(n.bag.size()));
  return w - 1;
}

TreeDecomposition NiceTreeDecomposition::plain() const {
  TreeDecomposition td;
  td.parent.assign(nodes.size(), -1);
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    td.bags.push_back(nodes[t].bag);
    for (int c : nodes[t].children) td.parent[static_cast<std::size_t>(c)] = static_cast<int>(t);
  }
  td.root = root();
  return td;
}

void NiceTreeDecomposition::check() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InternalInconsistency, "nice decomposition: " + m); };
  if (nodes.empty() || !nodes.back().bag.empty()) fail("root bag is not empty");
  for (std::size_t t = 0; t < nodes.size(); ++t) {
    const auto& n = nodes[t];
    for (int c : n.children)
      if (c < 0 || static_cast<std::size_t>(c) >= t) fail("children must precede their parent");
    auto without = [](std::vector<int> b, int v) {
      b.erase(std::remove(b.begin(), b.end(), v), b.end());
      return b;
    };
    switch (n.kind) {
      case NiceKind::Leaf:
        if (!n.children.empty() || !n.bag.empty()) fail("leaf must be empty");
        break;
      case NiceKind::Introduce:
      case NiceKind::Forget: {
        if (n.children.size() != 1) fail("introduce and forget nodes have one child");
        const auto& cb = nodes[static_cast<std::size_t>(n.children[0])].bag;
        const auto& big = n.kind == NiceKind::Introduce ? n.bag : cb;
        const auto& small = n.kind == NiceKind::Introduce ? cb : n.bag;
        if (!std::binary_search(big.begin(), big.end(), n.vertex) || without(big, n.vertex) != small)
          fail("bag does not differ by exactly the named vertex");
        break;
      }
      case NiceKind::Join:
        if (n.children.size() != 2) fail("join has two children");
        for (int c : n.children)
          if (nodes[static_cast<std::size_t>(c)].bag != n.bag) fail("join children differ from the join bag");
        break;
    }
  }
}

NiceTreeDecomposition make_nice(const TreeDecomposition& td) {
  NiceTreeDecomposition out;
  auto add = [&](NiceNode n) {
    out.nodes.push_back(std::move(n));
    return static_cast<int>(out.nodes.size()) - 1;
  };
  // Walks from node `from` (with bag nodes[from].bag) to `target` by forgets then introduces.
  auto morph = [&](int from, const std::vector<int>& target) {
    auto bag = out.nodes[static_cast<std::size_t>(from)].bag;
    for (int v : std::vector<int>(bag)) {
      if (std::binary_search(target.begin(), target.end(), v)) continue;
      bag.erase(std::find(bag.begin(), bag.end(), v));
      from = add({NiceKind::Forget, bag, v, {from}});
    }
    for (int v : target) {
      if (std::binary_search(bag.begin(), bag.end(), v)) continue;
      bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
      from = add({NiceKind::Introduce, bag, v, {from}});
    }
    return from;
  };
  const auto kids = td.children();
  std::function<int(int)> build = [&](int t) {
    const auto& bag = td.bags[static_cast<std::size_t>(t)];
    const auto& ch = kids[static_cast<std::size_t>(t)];
    if (ch.empty()) return morph(add({NiceKind::Leaf, {}, -1, {}}), bag);
    int acc = morph(build(ch[0]), bag);
    for (std::size_t c = 1; c < ch.size(); ++c) {
      int other = morph(build(ch[c]), bag);
      acc = add({NiceKind::Join, bag, -1, {acc, other}});
    }
    return acc;
  };
  morph(build(td.root), {});
  out.check();
  return out;
}

namespace {

std::string bag_label(const std::vector<int>& bag) {
  std::ostringstream os;
  os << '{';
  for (std::size_t a = 0; a < bag.size(); ++a) os << (a ? "," : "") << bag[a];
  os << '}';
  return os.str();
}

}  // namespace

std::string to_dot(const TreeDecomposition& td) {
  std::ostringstream os;
  os << "graph td {\n";
  for (std::size_t t = 0; t < td.bags.size(); ++t) os << "  b" << t << " [label=\"" << bag_label(td.bags[t]) << "\"];\n";
  for (std::size_t t = 0; t < td.bags.size(); ++t)
    if (td.parent[t] >= 0) os << "  b" << td.parent[t] << " -- b" << t << ";\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const NiceTreeDecomposition& ntd) {
  static const char* names[] = {"leaf", "introduce", "forget", "join"};
  std::ostringstream os;
  os << "graph nice {\n";
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t) {
    const auto& n = ntd.nodes[t];
    os << "  n" << t << " [label=\"" << names[static_cast<int>(n.kind)];
    if (n.vertex >= 0) os << ' ' << n.vertex;
    os << ' ' << bag_label(n.bag) << "\"];\n";
  }
  for (std::size_t t = 0; t < ntd.nodes.size(); ++t)
    for (int c : ntd.nodes[t].children) os << "  n" << t << " -- n" << c << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace orthext
