#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthext/complex.hpp"

namespace orthext {

/// Face instances of one branch of the reduction together with their total bend offset.
struct FaceBranch {
  Drawing base;                        ///< drawing of H plus the edges decided to be straight
  std::vector<FaceInstance> faces;
  int offset = 0;
  std::string label;
};

struct ReduceOptions {
  std::size_t max_branches = 100000;
};

/// Enumerates the branches over straight/subdivided H-H edges, face assignment of missing
/// components and port choices. Throws NoValidBranch if every branch dies.
std::vector<FaceBranch> reduce_to_faces(const BmoeInstance& inst, const ReduceOptions& opt = {});

struct RedundantRegion {
  ReflexCorner corner;
  Direction direction = Direction::N;  ///< direction of the projection from the corner
  AxisSegment projection;
  RectPolygon region;                  ///< the redundant part (a rectangle)
  Point keep;                          ///< a point of the part that stays
};

/// Some non-essential reflex corner projection cutting off a part without reflex corners and
/// without port rays entering it; nullopt if the instance is clean.
std::optional<RedundantRegion> find_redundant_region(const FaceInstance& fi);
FaceInstance prune(const FaceInstance& fi, const RedundantRegion& r);
/// Prunes until clean; throws InternalInconsistency if a step fails to reduce the projection count.
FaceInstance make_clean(const FaceInstance& fi, int* steps = nullptr);
bool is_clean(const FaceInstance& fi);
/// Number of projections of reflex corners of the marked face that end on its boundary.
int projection_count(const FaceInstance& fi);

/// Encloses the drawing of an outer-face instance by a rectangle with four dummy corners; the
/// marked face becomes the region between the rectangle and the drawing.
FaceInstance frame_outer(const FaceInstance& fi);

/// Number of potential crossings on the cut segment: 4k(k+1).
int cut_slots(int k);

struct CutLine {
  AxisSegment zeta;               ///< from the top of the hole up to the frame
  std::optional<EdgeKey> bottom_edge;  ///< hole edge subdivided at the lower end, if any
  std::optional<VertexId> bottom_vertex;  ///< hole vertex at the lower end, if any
  EdgeKey top_edge;               ///< frame edge subdivided at the upper end
  int slots = 0;
};

/// Vertical segment from the leftmost topmost hole segment to the frame top.
CutLine choose_cut(const FaceInstance& framed);

/// Hole-free inner-face instances, one per crossing sequence along the cut and per edge
/// orientation and side; the framed optimum is the minimum over them.
std::vector<FaceInstance> enumerate_cut_branches(const FaceInstance& framed, std::size_t max_branches = 100000);

}  // namespace orthext
