#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "orthext/geometry.hpp"

namespace orthext {

using VertexId = int;

/// Undirected edge key, always stored with u < v.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;

  EdgeKey() = default;
  EdgeKey(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool has(VertexId w) const { return w == u || w == v; }

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

std::ostream& operator<<(std::ostream& os, const EdgeKey& e);

/// Orthogonal polyline; every interior point is a bend.
struct OrthoPolyline {
  std::vector<Point> points;

  std::size_t bends() const { return points.size() < 2 ? 0 : points.size() - 2; }
  std::vector<AxisSegment> segments() const;
  OrthoPolyline reversed() const;
  /// Drops repeated and collinear interior points.
  static OrthoPolyline simplified(std::vector<Point> pts);

  friend bool operator==(const OrthoPolyline&, const OrthoPolyline&) = default;
};

/// Planar orthogonal drawing; edge polylines run from `key.u` to `key.v`.
struct Drawing {
  std::map<VertexId, Point> vertices;
  std::map<EdgeKey, OrthoPolyline> edges;

  /// Inserts the edge, reversing `line` if it was given from v to u.
  void add_edge(VertexId a, VertexId b, OrthoPolyline line);
  /// Polyline of edge {a,b} oriented to start at `a`.
  OrthoPolyline polyline_from(VertexId a, VertexId b) const;
  int degree(VertexId v) const;
  std::vector<VertexId> neighbors(VertexId v) const;
  /// Direction in which each incident edge leaves `v`.
  std::map<Direction, EdgeKey> ports(VertexId v) const;
  std::vector<Point> feature_points() const;
  VertexId max_vertex_id() const { return vertices.empty() ? -1 : vertices.rbegin()->first; }

  friend bool operator==(const Drawing&, const Drawing&) = default;
};

/// Edge whose polyline contains p other than at its end vertices.
std::optional<EdgeKey> edge_through(const Drawing& d, const Point& p);
/// Splits the edge through p (see edge_through) with a new vertex `id` at p.
void subdivide_edge(Drawing& d, const EdgeKey& e, const Point& p, VertexId id);

enum class ViolationKind {
  BadPolyline,
  EndpointMismatch,
  UnknownVertex,
  DegreeTooHigh,
  DuplicateVertexPoint,
  PassesThroughVertex,
  SelfIntersection,
  Crossing,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::vector<VertexId> vertices;
  std::vector<EdgeKey> edges;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind k) const;
  std::string str() const;
};

ValidationReport validate(const Drawing& d);

/// Sum of bends over all edges.
std::size_t count_bends(const Drawing& d);
/// Sum of bends over the edges in `filter` that exist in `d`.
std::size_t count_bends(const Drawing& d, const std::set<EdgeKey>& filter);

/// An infinite horizontal (y = coord) or vertical (x = coord) line.
struct AxisLine {
  bool vertical = false;
  Rat coord;
};

enum class StripMode { Remove, Add };

/// Shifts every feature point strictly above (horizontal line) or right of (vertical line) `line`
/// by sigma, downwards/leftwards for Remove and upwards/rightwards for Add.
Drawing strip_op(const Drawing& d, const AxisLine& line, const Rat& sigma, StripMode mode);

/// Smallest distance from `line` to a feature point strictly above/right of it; nullopt if none.
/// A removal with sigma below this value is admissible.
std::optional<Rat> removal_limit(const Drawing& d, const AxisLine& line);
/// Smallest distance from `line` to any feature point; nullopt for a drawing without features.
std::optional<Rat> min_feature_clearance(const Drawing& d, const AxisLine& line);

enum class SelectionKind { V, H };

struct Selection {
  Point lo;  ///< lower-left corner of the rectangle
  Point hi;  ///< upper-right corner of the rectangle
  SelectionKind kind = SelectionKind::V;
  AxisSegment crossed_side;

  /// Builds the selection after checking that exactly one side of the rectangle is crossed.
  static Selection make(const Drawing& d, const Point& lo, const Point& hi);
};

/// Shape-preserving compression of the selected subdrawing to width (v) or height (h) at most eps.
Drawing compress_selection(const Drawing& d, const Selection& sel, const Rat& eps);

struct ShapeDescriptor {
  std::map<EdgeKey, std::string> edge_turns;       ///< direction letters of successive segments, u to v
  std::map<VertexId, std::string> vertex_ports;    ///< per vertex, edge occupying N,E,S,W ('-' if free)

  friend bool operator==(const ShapeDescriptor&, const ShapeDescriptor&) = default;
};

ShapeDescriptor shape_descriptor(const Drawing& d);

}  // namespace orthext
