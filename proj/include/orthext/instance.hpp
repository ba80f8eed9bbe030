#pragma once

#include <optional>
#include <set>
#include <vector>

#include "orthext/drawing.hpp"

namespace orthext {

/// Side `side` of the drawn vertex `anchor` reserved for the missing edge {anchor, other}.
struct PortCandidate {
  VertexId anchor = 0;
  VertexId other = 0;
  Direction side = Direction::N;

  EdgeKey edge() const { return {anchor, other}; }

  friend bool operator==(const PortCandidate&, const PortCandidate&) = default;
  friend auto operator<=>(const PortCandidate&, const PortCandidate&) = default;
};

/// A partial drawing together with the graph it should be extended to.
struct BmoeInstance {
  std::set<VertexId> vertices;  ///< V(G)
  std::set<EdgeKey> edges;      ///< E(G)
  Drawing drawing;              ///< drawing of H; its vertices and edges are a subgraph of G
  std::optional<int> budget;
  /// Optional fixed sides for missing edges at drawn vertices.
  std::vector<PortCandidate> port_hints;

  std::vector<VertexId> missing_vertices() const;
  std::vector<EdgeKey> missing_edges() const;
  int kappa() const { return static_cast<int>(missing_vertices().size() + missing_edges().size()); }
  /// Throws ValidationError if the drawing is invalid or not a subgraph of G, or a degree exceeds 4.
  void check() const;
};

/// Extension problem restricted to one marked face of a drawing.
struct FaceInstance {
  Drawing h;                           ///< drawn part; only the boundary of the marked face matters
  Point seed;                          ///< a point strictly inside the marked face
  bool outer = false;                  ///< marked face is unbounded
  std::set<VertexId> dummies;          ///< vertices introduced by pruning, framing or cutting
  std::vector<VertexId> missing_vertices;
  std::set<VertexId> must_bend;        ///< missing vertices standing for a bend of a subdivided edge
  std::vector<EdgeKey> missing_edges;
  std::vector<PortCandidate> ports;    ///< sorted by (anchor, other)
  int bend_offset = 0;
  /// Edges of the original problem that are split into several missing edges here (through a
  /// subdivision vertex or cut vertices), with the pieces in order from the original's u end.
  std::map<EdgeKey, std::vector<EdgeKey>> chains;

  int k() const { return static_cast<int>(missing_vertices.size()); }
  bool is_missing(VertexId v) const;
  std::set<VertexId> anchors() const;
  /// Port of the missing edge {a, other} at drawn vertex a.
  std::optional<PortCandidate> port_of(VertexId a, VertexId other) const;
  /// Incident missing edges of a vertex.
  std::vector<EdgeKey> missing_incident(VertexId v) const;
  /// Structural checks; throws ValidationError.
  void check() const;
  VertexId fresh_id() const;
};

}  // namespace orthext
