#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "orthext/instance.hpp"

namespace orthext {

/// Bend distance of a point that no interior polyline reaches.
inline constexpr int kInfDist = std::numeric_limits<int>::max();

/// Cell structure of the arrangement of finitely many vertical lines x = xs[a] and horizontal
/// lines y = ys[b], restricted to the box they span.
///
/// Element (i, j) uses even indices for lines and odd indices for the open gaps between two
/// consecutive lines, so (even, even) is a node, (odd, odd) an open rectangle and the mixed
/// cases are open line pieces.
class ElementGrid {
 public:
  ElementGrid() = default;
  ElementGrid(std::vector<Rat> xs, std::vector<Rat> ys);

  const std::vector<Rat>& xs() const { return xs_; }
  const std::vector<Rat>& ys() const { return ys_; }
  int ni() const { return ni_; }
  int nj() const { return nj_; }
  int size() const { return ni_ * nj_; }
  int id(int i, int j) const { return j * ni_ + i; }
  int i_of(int id) const { return id % ni_; }
  int j_of(int id) const { return id / ni_; }
  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i < ni_ && j < nj_; }
  int dim(int id) const { return (i_of(id) & 1) + (j_of(id) & 1); }

  /// Representative coordinate of column i: the line itself or the midpoint of the gap.
  Rat x_at(int i) const;
  Rat y_at(int j) const;
  Point rep(int id) const { return {x_at(i_of(id)), y_at(j_of(id))}; }
  /// Column index containing x (even if x is a line), nullopt outside the spanned range.
  std::optional<int> column_of(const Rat& x) const;
  std::optional<int> row_of(const Rat& y) const;
  std::optional<int> locate(const Point& p) const;
  /// Neighbouring element in direction d, nullopt at the border.
  std::optional<int> step(int id, Direction d) const;

 private:
  std::vector<Rat> xs_;
  std::vector<Rat> ys_;
  int ni_ = 0;
  int nj_ = 0;
};

/// The marked face of a drawing as a set of arrangement elements.
struct FaceRegion {
  ElementGrid grid;
  std::vector<char> wall;    ///< element lies on the drawing
  std::vector<char> inside;  ///< element belongs to the marked face
  bool bounded = true;       ///< the face does not reach the border of the grid

  bool in(int id) const { return inside[static_cast<std::size_t>(id)] != 0; }
  bool is_wall(int id) const { return wall[static_cast<std::size_t>(id)] != 0; }
  /// Elements met when walking from `from` (exclusive) in direction d while staying inside.
  std::vector<int> ray(int from, Direction d) const;
  /// First non-inside element hit when walking from `from` in direction d.
  std::optional<int> ray_end(int from, Direction d) const;
  /// True if some inside element is incident to `id` (closure incidence).
  bool touches_inside(int id) const;
  std::vector<int> inside_elements() const;
};

/// Builds the face of `h` containing `seed`.
///
/// Lines pass through every feature point of `h` plus the extra coordinates. With `pad`,
/// one more line is added on each side at distance max(width, height, 1) so that the
/// unbounded face is represented by a ring.
FaceRegion build_region(const Drawing& h, const Point& seed, const std::vector<Rat>& extra_x = {},
                        const std::vector<Rat>& extra_y = {}, bool pad = false);

/// Arrangement of the marked face of an inner-face instance.
struct CellComplex {
  FaceRegion region;
  int feature_count = 0;  ///< number of feature points of the drawn part

  const ElementGrid& grid() const { return region.grid; }
};

/// Throws InvalidArgument if the instance's face is unbounded.
CellComplex build_complex(const FaceInstance& fi);

struct ReflexCorner {
  Point point;
  int element = -1;
  VertexId vertex = -1;  ///< -1 if the corner is a bend of an edge
  bool essential = false;
  std::vector<Direction> directions;       ///< projection directions
  std::vector<AxisSegment> projections;    ///< from the corner to the first boundary hit
};

/// Reflex corners of the region, with projections; `anchors` decides essentiality.
std::vector<ReflexCorner> reflex_corners(const FaceRegion& region, const Drawing& h,
                                         const std::set<VertexId>& anchors);

}  // namespace orthext
