#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orthext/sectors.hpp"
#include "orthext/treedec.hpp"

namespace orthext {

struct DpOptions {
  int grid_scale = 5;                 ///< m; 0 selects subgridsize(k)
  int bend_cap = 12;
  int max_fragments_per_edge = 0;     ///< per sector; 0 selects k + 1
  int max_bends_per_fragment = 0;     ///< 0 selects 28k + 20
  std::size_t max_records = 3000000;  ///< per nice node
  long long max_search_steps = 200000000;
  std::uint64_t seed = 0;
  std::size_t max_branches = 100000;
  bool trace = false;                 ///< per-node table sizes on stderr
};

struct SolveStats {
  std::size_t branches = 0;        ///< reduction or cut branches evaluated
  std::size_t faces = 0;           ///< face instances handed to the dynamic program
  std::size_t bags = 0;            ///< nice nodes processed
  std::size_t configs = 0;         ///< records created
  std::size_t local_solutions = 0; ///< distinct local solutions interned
  int max_width = 0;
  int max_sectors = 0;

  void add(const SolveStats& o);
};

enum class SolveStatus { Optimum, NoExtension };

struct SolveResult {
  SolveStatus status = SolveStatus::NoExtension;
  int beta = 0;
  int cap = 0;
  Drawing drawing;  ///< complete drawing when status is Optimum
  SolveStats stats;
};

/// Lattice step between node `node` and the lattice edge next to it in direction `dir`, used by
/// missing edge `edge`; `forward` means that walking from the edge's u end to its v end passes
/// from the node to the lattice edge.
struct CrossingToken {
  int node = -1;
  Direction dir = Direction::N;
  int edge = -1;
  bool forward = true;

  int key() const { return node * 4 + static_cast<int>(dir); }
  friend bool operator==(const CrossingToken&, const CrossingToken&) = default;
  friend auto operator<=>(const CrossingToken&, const CrossingToken&) = default;
};

/// Piece of one missing edge inside one sector, in the order from the edge's u end to its v end.
struct Fragment {
  int edge = -1;
  std::vector<int> nodes;               ///< lattice nodes, including an anchor or vertex at the ends
  std::optional<int> start_token, end_token;  ///< token keys at the ends, if any
};

struct LocalSolution {
  int sector = -1;
  std::vector<CrossingToken> tokens;  ///< sorted
  std::uint64_t placed = 0;           ///< missing vertices placed here (by index)
  std::uint64_t edges = 0;            ///< missing edges with a fragment here (by index)
  int bends = 0;
  std::map<int, int> positions;       ///< missing vertex index -> lattice node
  std::vector<Fragment> fragments;

  bool same_signature(const LocalSolution& o) const {
    return tokens == o.tokens && placed == o.placed && edges == o.edges;
  }
};

/// Lattice of one face instance: the arrangement lines plus the coordinates of all sector-grid
/// points. Every lattice node and unit edge lies in one arrangement element and thus in one
/// sector; bends and vertices are allowed at sector-grid points only.
class DpModel {
 public:
  struct End {
    bool anchor = false;
    VertexId id = 0;
    int vertex = -1;       ///< missing vertex index
    int node = -1;         ///< lattice node of the anchor
    Direction side = Direction::N;
    int owner = -1;        ///< sector of the first lattice edge on the port ray
  };
  struct Edge {
    EdgeKey key;
    End end[2];            ///< end[0] is key.u
  };

  DpModel(const FaceInstance& fi, const SectorDecomposition& dec, const SectorGrid& grid);

  const FaceInstance& instance() const { return fi_; }
  const ElementGrid& lattice() const { return lattice_; }
  int sectors() const { return sectors_; }
  int owner(int item) const { return owner_[static_cast<std::size_t>(item)]; }
  bool bend_ok(int node) const { return bend_ok_[static_cast<std::size_t>(node)] != 0; }
  bool usable_column(int i) const { return usable_col_[static_cast<std::size_t>(i)] != 0; }
  bool usable_row(int j) const { return usable_row_[static_cast<std::size_t>(j)] != 0; }
  bool is_node(int item) const { return (lattice_.i_of(item) & 1) == 0 && (lattice_.j_of(item) & 1) == 0; }
  const std::vector<int>& items(int sector) const { return items_[static_cast<std::size_t>(sector)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  bool must_bend(int vertex) const { return must_bend_[static_cast<std::size_t>(vertex)] != 0; }
  /// (edge, end) pairs incident to each missing vertex.
  const std::vector<std::vector<std::pair<int, int>>>& incidences() const { return incident_; }
  /// (edge, end) pairs of anchor ends whose port ray starts in the sector.
  const std::vector<std::pair<int, int>>& anchor_ends(int sector) const {
    return anchor_ends_[static_cast<std::size_t>(sector)];
  }
  /// The other sector of a token, given one of its two sectors.
  int other_side(const CrossingToken& t, int sector) const;
  bool blocked() const { return blocked_; }
  /// Fewest bends of a path from the anchor at end `end` of `edge` that stands at lattice node
  /// `node` facing `h`; 0 for vertex ends, kInfDist if unreachable.
  int reach(int edge, int end, int node, Direction h) const;
  int k() const { return static_cast<int>(vertices_.size()); }

 private:
  FaceInstance fi_;
  ElementGrid lattice_;
  int sectors_ = 0;
  std::vector<int> owner_;
  std::vector<char> bend_ok_;
  std::vector<char> usable_col_, usable_row_;
  std::vector<std::vector<int>> items_;
  std::vector<Edge> edges_;
  std::vector<VertexId> vertices_;
  std::vector<char> must_bend_;
  std::vector<std::vector<std::pair<int, int>>> incident_;
  std::vector<std::vector<std::pair<int, int>>> anchor_ends_;
  bool blocked_ = false;
  std::vector<std::vector<int>> reach_;  ///< per (edge, end) of anchors, indexed node * 4 + heading

  std::vector<int> reach_field(int anchor, Direction side) const;
};

/// Local solutions of a sector with every neighbour still undecided and no vertex excluded,
/// each with at most `bend_cap` bends; one per signature, with the fewest bends.
std::vector<LocalSolution> enumerate_gridsols(const DpModel& model, int sector, int bend_cap,
                                              const DpOptions& opt = {});

/// Minimum over all grid-respecting extensions with at most `cap` bends, found by the dynamic
/// program over the nice decomposition of the sector graph. The drawing is validated; a failed
/// validation throws InternalInconsistency.
SolveResult dp_solve(const DpModel& model, const NiceTreeDecomposition& ntd, int cap, const DpOptions& opt = {});

/// Pipeline for one face instance: make_clean, frame and cut for the outer face, sectors, tree
/// decomposition and the dynamic program, with iterative deepening on the cap.
SolveResult solve_face(const FaceInstance& fi, const DpOptions& opt = {});

/// Reduction to face instances, one solve per face, minimum over branches. The returned drawing
/// extends inst.drawing to all of G.
SolveResult solve_bmoe(const BmoeInstance& inst, const DpOptions& opt = {});

}  // namespace orthext
