#include "orthext/instance.hpp"

#include <algorithm>

namespace orthext {

std::vector<VertexId> BmoeInstance::missing_vertices() const {
  std::vector<VertexId> out;
  for (auto v : vertices)
    if (!drawing.vertices.count(v)) out.push_back(v);
  return out;
}

std::vector<EdgeKey> BmoeInstance::missing_edges() const {
  std::vector<EdgeKey> out;
  for (const auto& e : edges)
    if (!drawing.edges.count(e)) out.push_back(e);
  return out;
}

void BmoeInstance::check() const {
  auto rep = validate(drawing);
  if (!rep.ok()) throw Error(ErrorCode::ValidationError, "drawing is invalid:\n" + rep.str());
  for (const auto& [v, _] : drawing.vertices)
    if (!vertices.count(v)) throw Error(ErrorCode::ValidationError, "drawn vertex " + std::to_string(v) + " not in graph");
  for (const auto& [e, _] : drawing.edges)
    if (!edges.count(e)) throw Error(ErrorCode::ValidationError, "drawn edge not in graph");
  std::map<VertexId, int> deg;
  for (const auto& e : edges) {
    if (!vertices.count(e.u) || !vertices.count(e.v))
      throw Error(ErrorCode::ValidationError, "edge endpoint is not a vertex");
    if (e.u == e.v) throw Error(ErrorCode::ValidationError, "self loop");
    ++deg[e.u];
    ++deg[e.v];
  }
  for (const auto& [v, d] : deg)
    if (d > 4) throw Error(ErrorCode::ValidationError, "vertex " + std::to_string(v) + " has degree above 4");
}

bool FaceInstance::is_missing(VertexId v) const {
  return std::find(missing_vertices.begin(), missing_vertices.end(), v) != missing_vertices.end();
}

std::set<VertexId> FaceInstance::anchors() const {
  std::set<VertexId> out;
  for (const auto& p : ports) out.insert(p.anchor);
  return out;
}

std::optional<PortCandidate> FaceInstance::port_of(VertexId a, VertexId other) const {
  for (const auto& p : ports)
    if (p.anchor == a && p.other == other) return p;
  return std::nullopt;
}

std::vector<EdgeKey> FaceInstance::missing_incident(VertexId v) const {
  std::vector<EdgeKey> out;
  for (const auto& e : missing_edges)
    if (e.has(v)) out.push_back(e);
  return out;
}

void FaceInstance::check() const {
  auto rep = validate(h);
  if (!rep.ok()) throw Error(ErrorCode::ValidationError, "face drawing is invalid:\n" + rep.str());
  for (auto v : missing_vertices)
    if (h.vertices.count(v)) throw Error(ErrorCode::ValidationError, "missing vertex is drawn");
  for (const auto& e : missing_edges) {
    if (h.edges.count(e)) throw Error(ErrorCode::ValidationError, "missing edge is drawn");
    for (VertexId end : {e.u, e.v}) {
      if (is_missing(end)) continue;
      if (!h.vertices.count(end)) throw Error(ErrorCode::ValidationError, "missing edge has unknown endpoint");
      if (!port_of(end, e.other(end))) throw Error(ErrorCode::ValidationError, "missing edge end has no port");
    }
  }
  std::map<std::pair<VertexId, Direction>, int> used;
  for (const auto& p : ports) {
    if (!h.vertices.count(p.anchor)) throw Error(ErrorCode::ValidationError, "port anchor is not drawn");
    if (h.ports(p.anchor).count(p.side)) throw Error(ErrorCode::ValidationError, "port side is occupied");
    if (++used[{p.anchor, p.side}] > 1) throw Error(ErrorCode::ValidationError, "port side used twice");
  }
  if (!std::is_sorted(ports.begin(), ports.end(), [](const PortCandidate& a, const PortCandidate& b) {
        return std::tie(a.anchor, a.other) < std::tie(b.anchor, b.other);
      }))
    throw Error(ErrorCode::ValidationError, "ports are not ordered by anchor and other end");
  for (auto v : missing_vertices)
    if (missing_incident(v).size() > 4) throw Error(ErrorCode::ValidationError, "missing vertex degree above 4");
}

VertexId FaceInstance::fresh_id() const {
  VertexId m = h.max_vertex_id();
  for (auto v : missing_vertices) m = std::max(m, v);
  return m + 1;
}

}  // namespace orthext
