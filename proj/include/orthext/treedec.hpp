#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orthext/sectors.hpp"

namespace orthext {

/// Undirected graph as sorted adjacency lists.
using AdjacencyList = std::vector<std::vector<int>>;

AdjacencyList adjacency(const SectorGraph& g);

/// Rooted tree decomposition; bags are sorted.
struct TreeDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<int> parent;  ///< -1 at the root
  int root = -1;

  int width() const;
  std::vector<std::vector<int>> children() const;
};

/// Min-fill elimination ordering with min-degree tie-break; remaining ties are broken by a
/// generator seeded with `seed`. Components are hung below the last bag.
TreeDecomposition decompose(const AdjacencyList& g, std::uint64_t seed = 0);
TreeDecomposition decompose(const SectorGraph& g, std::uint64_t seed = 0);

/// Path-shaped decomposition from a greedy vertex-separation ordering: every start vertex is
/// tried, the next vertex always keeps the frontier smallest, and the narrowest result wins.
/// Bag i holds vertex i of the ordering and the earlier vertices with a later neighbour.
TreeDecomposition path_decomposition(const AdjacencyList& g);
TreeDecomposition path_decomposition(const SectorGraph& g);

/// True iff every vertex is in a bag, every edge is inside a bag, the bags containing a vertex
/// form a subtree, and the parent array is a tree.
bool verify(const AdjacencyList& g, const TreeDecomposition& td);
bool verify(const SectorGraph& g, const TreeDecomposition& td);

enum class NiceKind { Leaf, Introduce, Forget, Join };

struct NiceNode {
  NiceKind kind = NiceKind::Leaf;
  std::vector<int> bag;
  int vertex = -1;            ///< introduced or forgotten vertex
  std::vector<int> children;  ///< indices of earlier nodes
};

/// Nodes in bottom-up order; the root is the last node and has an empty bag.
struct NiceTreeDecomposition {
  std::vector<NiceNode> nodes;

  int root() const { return static_cast<int>(nodes.size()) - 1; }
  int width() const;
  TreeDecomposition plain() const;
  /// Checks the node-kind rules; throws InternalInconsistency on the first violation.
  void check() const;
};

NiceTreeDecomposition make_nice(const TreeDecomposition& td);

/// DOT-like text dump of a decomposition.
std::string to_dot(const TreeDecomposition& td);
std::string to_dot(const NiceTreeDecomposition& ntd);

}  // namespace orthext
