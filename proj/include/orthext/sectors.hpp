#pragma once

#include <array>
#include <map>
#include <set>
#include <vector>

#include "orthext/complex.hpp"

namespace orthext {

/// Bend distance of every element of the region to one port.
struct BendField {
  PortCandidate port;
  int anchor_element = -1;
  std::vector<int> dist;  ///< per element; kInfDist outside the face and on its boundary
  int max_level = 0;

  int at(int element) const { return dist[static_cast<std::size_t>(element)]; }
};

/// Wavefront expansion: level 0 is the open ray from the anchor on the port side, level i+1 adds
/// every maximal row or column run of inside elements that meets level <= i.
/// Throws PortBlocked if the ray leaves the face immediately.
BendField bend_field(const FaceRegion& region, const Point& anchor, const PortCandidate& port);

enum class Degeneracy : std::uint8_t { None, Segment, Point };

struct Sector {
  int id = 0;
  std::vector<int> elements;  ///< sorted element ids
  std::vector<int> bvect;
  Degeneracy degenerate = Degeneracy::None;
  bool has_baseline = false;
  Direction baseline_side = Direction::S;  ///< side of the sector on which its baseline lies
  int xi_max = 0;
};

/// Sectors as nodes; `adjacent[{a, b}]` holds every d such that some element of b is the
/// d-neighbour of an element of a (stored for both orders).
struct SectorGraph {
  int size = 0;
  std::map<std::pair<int, int>, std::set<Direction>> adjacent;

  std::vector<int> neighbors(int s) const;
  int edge_count() const { return static_cast<int>(adjacent.size() / 2); }
  bool connected() const;
  bool is_tree() const { return connected() && edge_count() == size - 1; }
};

struct SectorDecomposition {
  FaceRegion region;
  std::vector<PortCandidate> ports;
  std::vector<BendField> fields;
  std::vector<int> sector_of;  ///< per element, -1 for elements outside the open face
  std::vector<Sector> sectors;
  SectorGraph graph;
};

/// Groups the inside elements by bend vector into maximal connected sectors.
SectorDecomposition decompose_sectors(const FaceRegion& region, const Drawing& h,
                                      const std::vector<PortCandidate>& ports);

/// Number of local maxima of a sector seen from its best baseline; 1 for degenerate sectors.
/// Throws NoBaseline if no side of the sector is a baseline.
int local_maxima(const SectorDecomposition& dec, int sector);

/// Local maxima of a histogram profile (heights left to right, all above a common baseline).
int count_local_maxima(const std::vector<int>& heights);
int count_local_minima(const std::vector<int>& heights);

/// Reflex corners incident to at least two sectors, per sector and per ray direction: the
/// corner is in `critical[s][d]` if a ray in direction d from a point of sector s hits it.
using CriticalCorners = std::vector<std::array<std::vector<Point>, 4>>;
CriticalCorners critical_corners(const SectorDecomposition& dec, const std::vector<ReflexCorner>& corners);

struct Subsector {
  int id = 0;
  int sector = 0;
  std::vector<int> elements;
  Degeneracy degenerate = Degeneracy::None;
  Rat x_lo, x_hi, y_lo, y_hi;  ///< closed extent of the subsector
  int row = -1;                ///< subsector row (horizontally adjacent, equal y-extent)
  int col = -1;                ///< subsector column (vertically adjacent, equal x-extent)
};

struct Refinement {
  std::vector<Subsector> subsectors;
  std::vector<int> subsector_of;  ///< per element, -1 outside
  std::vector<std::vector<int>> of_sector;
  int rows = 0;
  int cols = 0;
};

/// Cuts every sector along the lines through its critical corners (horizontal lines for left
/// and right rays, vertical lines for up and down rays) and takes connected grid cells.
Refinement refine_subsectors(const SectorDecomposition& dec, const CriticalCorners& critical);

struct SectorGrid {
  int m = 1;
  std::vector<Point> center;               ///< p_v per subsector
  std::vector<Rat> eps;                    ///< side of the point square per subsector
  std::vector<std::vector<Point>> points;  ///< grid points per subsector
};

/// m x m points in a square around p_v that stays inside one open cell of the arrangement
/// (m points on a segment, one point for point subsectors).
SectorGrid sector_grid(const SectorDecomposition& dec, const Refinement& ref, int m);

/// Default subsector-grid resolution 112k^3 + 202k^2 + 85k.
long long subgridsize(int k);

}  // namespace orthext
