#pragma once

#include <optional>
#include <vector>

#include "orthext/complex.hpp"

namespace orthext {

/// Lattice for brute-force searches: the arrangement lines of the face (padded for the outer
/// face), r - 1 evenly spaced intermediate lines per gap, and any extra query coordinates.
/// Lattice points are the inside nodes of the refined element grid.
struct FineGrid {
  FaceRegion region;
  int resolution = 3;

  static FineGrid build(const FaceInstance& fi, int r = 3, const std::vector<Point>& queries = {});
  bool lattice_point(int element) const;
};

/// Minimum bends of interior polylines from every lattice point to one port, by 0-1 BFS over
/// (lattice point, heading) states seeded on the port ray.
class BdistOracle {
 public:
  BdistOracle(const FineGrid& grid, const Point& anchor, Direction side);
  /// kInfDist for boundary points other than the anchor; throws InvalidArgument off-lattice.
  int at(const Point& p) const;

 private:
  const FineGrid* grid_;
  int anchor_ = -1;
  std::vector<int> dist_;
};

/// Single query convenience wrapper; builds its own lattice containing `p`.
int oracle_bdist(const FaceInstance& fi, const Point& p, const PortCandidate& port);

}  // namespace orthext

namespace orthext {

struct OracleOptions {
  /// Lattice lines per arrangement gap; 0 picks max(3, |E_X| + 1) so that every missing edge
  /// can pass through the narrowest gap on its own track.
  int resolution = 0;
  int bend_cap = 12;
  int max_missing_vertices = 2;
  int max_missing_edges = 5;
  int max_lattice_points = 6000;
  long long max_steps = 400000000;
};

struct OracleResult {
  int beta = 0;
  Drawing drawing;  ///< the face drawing plus the missing vertices and edges
};

/// Exhaustive search for a minimum-bend drawing of the missing part inside the marked face with
/// all vertices and bends on the lattice. Iterative deepening on the total number of bends;
/// nullopt if nothing fits within the cap. Throws GuardExceeded beyond the size guards.
std::optional<OracleResult> oracle_solve(const FaceInstance& fi, const OracleOptions& opt = {});

/// Optimum of a whole instance: minimum over reduction branches of the branch offset plus the
/// face optima found by oracle_solve. nullopt if no branch fits within the cap (or the budget).
std::optional<int> oracle_bmoe(const BmoeInstance& inst, const OracleOptions& opt = {});

}  // namespace orthext
