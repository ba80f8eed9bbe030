#include <algorithm>
#include <memory>
#include <sstream>

#include "orthext/dp.hpp"
#include "orthext/error.hpp"
#include "orthext/reduction.hpp"

namespace orthext {

namespace {

struct Prepared {
  FaceInstance fi;
  std::unique_ptr<DpModel> model;
  NiceTreeDecomposition ntd;
};

Prepared prepare(FaceInstance fi, const DpOptions& opt) {
  Prepared p;
  p.fi = std::move(fi);
  auto complex = build_complex(p.fi);
  auto dec = decompose_sectors(complex.region, p.fi.h, p.fi.ports);
  auto crit = critical_corners(dec, reflex_corners(complex.region, p.fi.h, p.fi.anchors()));
  auto ref = refine_subsectors(dec, crit);
  const int m = opt.grid_scale > 0 ? opt.grid_scale : static_cast<int>(subgridsize(p.fi.k()));
  auto grid = sector_grid(dec, ref, m);
  p.model = std::make_unique<DpModel>(p.fi, dec, grid);
  p.ntd = make_nice(path_decomposition(dec.graph));
  return p;
}

std::string fail_str(const ValidationReport& r) { return r.str(); }

/// Polyline of edge {a, b} of `target` read off a branch drawing in which it may be split by
/// vertices that `target` does not know (cut vertices).
OrthoPolyline trace(const Drawing& branch, const std::vector<EdgeKey>& pieces, const std::set<VertexId>& known,
                    VertexId a, VertexId b) {
  for (const auto& first : pieces) {
    if (!first.has(a)) continue;
    std::vector<Point> pts;
    VertexId prev = a;
    EdgeKey cur = first;
    for (std::size_t guard = 0; guard <= pieces.size(); ++guard) {
      VertexId next = cur.other(prev);
      auto line = branch.polyline_from(prev, next);
      pts.insert(pts.end(), line.points.begin(), line.points.end());
      if (next == b) return OrthoPolyline::simplified(std::move(pts));
      if (known.count(next)) break;
      std::optional<EdgeKey> step;
      for (const auto& p : pieces)
        if (p.has(next) && p != cur) step = p;
      if (!step) break;
      prev = next;
      cur = *step;
    }
  }
  throw Error(ErrorCode::InternalInconsistency, "missing edge cannot be traced through the branch drawing");
}

int missing_bends(const Drawing& d, const std::vector<EdgeKey>& edges) {
  int n = 0;
  for (const auto& e : edges) n += static_cast<int>(d.edges.at(e).bends());
  return n;
}

void gate(const Drawing& d, const std::vector<EdgeKey>& edges, int beta, const char* what) {
  auto rep = validate(d);
  if (!rep.ok()) throw Error(ErrorCode::InternalInconsistency, std::string(what) + " drawing is invalid:\n" + fail_str(rep));
  const int bends = missing_bends(d, edges);
  if (bends != beta)
    throw Error(ErrorCode::InternalInconsistency, std::string(what) + " drawing has " + std::to_string(bends) +
                                                      " bends instead of " + std::to_string(beta));
}

/// Maps a branch solution back to the face instance it came from.
Drawing map_back(const FaceInstance& fi, const FaceInstance& branch, const Drawing& solved, int beta) {
  Drawing d = fi.h;
  for (auto v : fi.missing_vertices) d.vertices[v] = solved.vertices.at(v);
  std::set<VertexId> known;
  for (const auto& [v, _] : d.vertices) known.insert(v);
  for (const auto& e : fi.missing_edges) d.add_edge(e.u, e.v, trace(solved, branch.missing_edges, known, e.u, e.v));
  gate(d, fi.missing_edges, beta, "face");
  for (const auto& port : fi.ports) {
    auto ports = d.ports(port.anchor);
    auto it = ports.find(port.side);
    if (it == ports.end() || !(it->second == port.edge()))
      throw Error(ErrorCode::InternalInconsistency, "face drawing leaves an anchor off its port");
  }
  return d;
}

}  // namespace

SolveResult solve_face(const FaceInstance& fi, const DpOptions& opt) {
  fi.check();
  SolveResult res;
  res.stats.faces = 1;
  if (fi.missing_edges.empty()) {
    res.status = SolveStatus::Optimum;
    res.drawing = fi.h;
    for (auto v : fi.missing_vertices)
      throw Error(ErrorCode::ValidationError, "isolated missing vertex " + std::to_string(v));
    return res;
  }
  std::vector<FaceInstance> branches;
  if (fi.outer) {
    for (auto& b : enumerate_cut_branches(frame_outer(fi), opt.max_branches)) branches.push_back(make_clean(b));
  } else {
    branches.push_back(make_clean(fi));
  }
  std::vector<Prepared> prepared;
  prepared.reserve(branches.size());
  for (auto& b : branches) {
    prepared.push_back(prepare(std::move(b), opt));
    res.stats.max_sectors = std::max(res.stats.max_sectors, prepared.back().model->sectors());
    res.stats.max_width = std::max(res.stats.max_width, prepared.back().ntd.width());
  }
  res.stats.branches = prepared.size();
  for (int cap = 0; cap <= opt.bend_cap; ++cap) {
    res.cap = cap;
    for (const auto& p : prepared) {
      auto r = dp_solve(*p.model, p.ntd, cap, opt);
      res.stats.bags += r.stats.bags;
      res.stats.configs += r.stats.configs;
      res.stats.local_solutions += r.stats.local_solutions;
      if (r.status != SolveStatus::Optimum) continue;
      res.status = SolveStatus::Optimum;
      res.beta = r.beta;
      res.drawing = map_back(fi, p.fi, r.drawing, r.beta);
      return res;
    }
  }
  return res;
}

namespace {

/// Key identifying a face instance for caching across reduction branches.
std::string face_key(const FaceInstance& fi) {
  std::ostringstream os;
  os << fi.outer << '|' << fi.seed.x << ',' << fi.seed.y << '|';
  for (const auto& [v, p] : fi.h.vertices) os << v << '@' << p.x << ',' << p.y << ';';
  os << '|';
  for (const auto& [e, line] : fi.h.edges) {
    os << e << ':';
    for (const auto& p : line.points) os << p.x << ',' << p.y << ' ';
  }
  os << '|';
  for (auto v : fi.missing_vertices) os << v << (fi.must_bend.count(v) ? "b" : "") << ' ';
  os << '|';
  for (const auto& e : fi.missing_edges) os << e << ' ';
  os << '|';
  for (const auto& p : fi.ports) os << p.anchor << ',' << p.other << to_char(p.side) << ' ';
  return os.str();
}

}  // namespace

SolveResult solve_bmoe(const BmoeInstance& inst, const DpOptions& opt) {
  inst.check();
  SolveResult best;
  int cap = opt.bend_cap;
  if (inst.budget) cap = std::min(cap, *inst.budget);
  best.cap = cap;
  const auto missing = inst.missing_edges();
  if (missing.empty()) {
    best.status = SolveStatus::Optimum;
    best.drawing = inst.drawing;
    for (auto v : inst.vertices) best.drawing.vertices.try_emplace(v, Point{});
    if (!inst.missing_vertices().empty())
      throw Error(ErrorCode::ValidationError, "isolated missing vertices are not supported");
    return best;
  }
  ReduceOptions ropt;
  ropt.max_branches = opt.max_branches;
  auto branches = reduce_to_faces(inst, ropt);
  best.stats.branches = branches.size();
  std::map<std::string, std::pair<int, SolveResult>> cache;  // key -> (cap used, result)
  const FaceBranch* best_branch = nullptr;
  std::vector<Drawing> best_faces;
  for (const auto& br : branches) {
    int total = br.offset;
    if (total > cap || (best_branch && total >= best.beta)) continue;
    std::vector<Drawing> faces;
    bool ok = true;
    for (const auto& fi : br.faces) {
      const int room = (best_branch ? best.beta - 1 : cap) - total;
      if (room < 0) {
        ok = false;
        break;
      }
      const std::string key = face_key(fi);
      auto it = cache.find(key);
      const bool reusable = it != cache.end() &&
                            (it->second.second.status == SolveStatus::Optimum || it->second.first >= room);
      if (!reusable) {
        DpOptions fo = opt;
        fo.bend_cap = room;
        auto r = solve_face(fi, fo);
        best.stats.faces += 1;
        best.stats.bags += r.stats.bags;
        best.stats.configs += r.stats.configs;
        best.stats.local_solutions += r.stats.local_solutions;
        best.stats.max_width = std::max(best.stats.max_width, r.stats.max_width);
        best.stats.max_sectors = std::max(best.stats.max_sectors, r.stats.max_sectors);
        it = cache.insert_or_assign(key, std::make_pair(room, std::move(r))).first;
      }
      const SolveResult& r = it->second.second;
      if (r.status != SolveStatus::Optimum || r.beta > room) {
        ok = false;
        break;
      }
      total += r.beta;
      faces.push_back(r.drawing);
    }
    if (!ok || total > cap) continue;
    if (!best_branch || total < best.beta) {
      best_branch = &br;
      best.beta = total;
      best.status = SolveStatus::Optimum;
      best_faces = std::move(faces);
    }
  }
  if (!best_branch) return best;

  Drawing d = best_branch->base;
  std::set<VertexId> subdivision;
  std::map<EdgeKey, std::vector<EdgeKey>> chains;
  for (const auto& fi : best_branch->faces) {
    subdivision.insert(fi.must_bend.begin(), fi.must_bend.end());
    chains.insert(fi.chains.begin(), fi.chains.end());
  }
  Drawing pieces;
  std::vector<EdgeKey> piece_keys;
  for (std::size_t f = 0; f < best_branch->faces.size(); ++f) {
    const auto& fi = best_branch->faces[f];
    for (auto v : fi.missing_vertices) pieces.vertices[v] = best_faces[f].vertices.at(v);
    for (const auto& e : fi.missing_edges) {
      pieces.edges[e] = best_faces[f].edges.at(e);
      piece_keys.push_back(e);
    }
  }
  for (const auto& [v, p] : d.vertices) pieces.vertices[v] = p;
  for (const auto& [v, p] : pieces.vertices)
    if (!subdivision.count(v)) d.vertices[v] = p;
  std::set<VertexId> known(inst.vertices.begin(), inst.vertices.end());
  for (const auto& e : missing) {
    if (d.edges.count(e)) continue;
    d.add_edge(e.u, e.v, trace(pieces, piece_keys, known, e.u, e.v));
  }
  gate(d, missing, best.beta, "extension");
  for (const auto& h : inst.port_hints) {
    auto ports = d.ports(h.anchor);
    auto it = ports.find(h.side);
    if (it == ports.end() || !(it->second == h.edge()))
      throw Error(ErrorCode::InternalInconsistency, "extension ignores a port hint");
  }
  for (const auto& [v, p] : inst.drawing.vertices)
    if (!(d.vertices.at(v) == p)) throw Error(ErrorCode::InternalInconsistency, "extension moves a drawn vertex");
  for (const auto& [e, line] : inst.drawing.edges)
    if (!(d.edges.at(e) == line)) throw Error(ErrorCode::InternalInconsistency, "extension changes a drawn edge");
  if (d.vertices.size() != inst.vertices.size() || d.edges.size() != inst.edges.size())
    throw Error(ErrorCode::InternalInconsistency, "extension does not draw exactly G");
  best.drawing = std::move(d);
  return best;
}

}  // namespace orthext
