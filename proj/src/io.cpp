#include "orthext/io.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "orthext/error.hpp"

namespace orthext {

using nlohmann::ordered_json;

namespace {

/// Reads a document while tracking the field path for error messages.
class Reader {
 public:
  explicit Reader(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "field '" + path_ + "': " + what);
  }
  Reader at(const std::string& key) const { return Reader(path_.empty() ? key : path_ + "." + key); }
  Reader at(std::size_t i) const { return Reader(path_ + "[" + std::to_string(i) + "]"); }

  const ordered_json& field(const ordered_json& obj, const std::string& key) const {
    if (!obj.is_object()) fail("expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) at(key).fail("missing");
    return *it;
  }
  const ordered_json& array(const ordered_json& v) const {
    if (!v.is_array()) fail("expected an array");
    return v;
  }
  int integer(const ordered_json& v) const {
    if (!v.is_number_integer()) fail("expected an integer");
    auto n = v.get<std::int64_t>();
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) fail("integer out of range");
    return static_cast<int>(n);
  }
  bool boolean(const ordered_json& v) const {
    if (!v.is_boolean()) fail("expected true or false");
    return v.get<bool>();
  }
  Rat number(const ordered_json& v) const {
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    if (!v.is_string()) fail("expected an integer or an exact number string");
    try {
      return Rat::parse(v.get<std::string>());
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  Point point(const ordered_json& v) const {
    if (!v.is_array() || v.size() != 2) fail("expected [x, y]");
    return {at(0).number(v[0]), at(1).number(v[1])};
  }
  Direction side(const ordered_json& v) const {
    if (v.is_string() && v.get<std::string>().size() == 1)
      for (auto d : kDirections)
        if (to_char(d) == v.get<std::string>()[0]) return d;
    fail("expected one of \"N\", \"E\", \"S\", \"W\"");
  }
  EdgeKey edge(const ordered_json& v) const {
    if (!v.is_array() || v.size() != 2) fail("expected [u, v]");
    return {at(0).integer(v[0]), at(1).integer(v[1])};
  }

 private:
  std::string path_;
};

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto == 0 ? 0 : upto - 1), '\n');
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": malformed JSON");
  }
}

void check_version(const ordered_json& doc, const Reader& r) {
  if (!doc.is_object()) r.fail("document must be an object");
  const int version = r.at("format_version").integer(r.field(doc, "format_version"));
  if (version != kFormatVersion) r.at("format_version").fail("unsupported version " + std::to_string(version));
}

ordered_json num(const Rat& x) { return x.str(); }
ordered_json pt(const Point& p) { return ordered_json::array({num(p.x), num(p.y)}); }
std::string side_str(Direction d) { return std::string(1, to_char(d)); }

ordered_json port_json(const PortCandidate& p) {
  return {{"anchor", p.anchor}, {"other", p.other}, {"side", side_str(p.side)}};
}

PortCandidate read_port(const Reader& r, const ordered_json& v) {
  return {r.at("anchor").integer(r.field(v, "anchor")), r.at("other").integer(r.field(v, "other")),
          r.at("side").side(r.field(v, "side"))};
}

ordered_json drawing_json(const Drawing& d) {
  ordered_json vs = ordered_json::array(), es = ordered_json::array();
  for (const auto& [v, p] : d.vertices) vs.push_back({{"id", v}, {"x", num(p.x)}, {"y", num(p.y)}});
  for (const auto& [e, line] : d.edges) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : line.points) pts.push_back(pt(p));
    es.push_back({{"u", e.u}, {"v", e.v}, {"points", pts}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

Drawing read_drawing(const Reader& r, const ordered_json& doc) {
  Drawing d;
  const auto rv = r.at("vertices");
  const auto& vs = rv.array(r.field(doc, "vertices"));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto ri = rv.at(i);
    const int id = ri.at("id").integer(ri.field(vs[i], "id"));
    if (d.vertices.count(id)) ri.at("id").fail("duplicate vertex id " + std::to_string(id));
    d.vertices[id] = {ri.at("x").number(ri.field(vs[i], "x")), ri.at("y").number(ri.field(vs[i], "y"))};
  }
  const auto re = r.at("edges");
  const auto& es = re.array(r.field(doc, "edges"));
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto ri = re.at(i);
    const int u = ri.at("u").integer(ri.field(es[i], "u"));
    const int v = ri.at("v").integer(ri.field(es[i], "v"));
    const auto rp = ri.at("points");
    const auto& ps = rp.array(ri.field(es[i], "points"));
    OrthoPolyline line;
    for (std::size_t j = 0; j < ps.size(); ++j) line.points.push_back(rp.at(j).point(ps[j]));
    if (!d.vertices.count(u) || !d.vertices.count(v)) ri.fail("dangling endpoint");
    d.add_edge(u, v, std::move(line));
  }
  return d;
}

void forward_validation(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

}  // namespace

BmoeInstance parse_instance(const std::string& text) {
  const auto doc = parse_json(text);
  const Reader r("");
  check_version(doc, r);
  BmoeInstance inst;
  const auto rv = r.at("vertices");
  const auto& vs = rv.array(r.field(doc, "vertices"));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto ri = rv.at(i);
    const int id = ri.at("id").integer(ri.field(vs[i], "id"));
    if (!inst.vertices.insert(id).second) ri.at("id").fail("duplicate vertex id " + std::to_string(id));
    const bool has_x = vs[i].contains("x"), has_y = vs[i].contains("y");
    if (has_x != has_y) ri.fail("a vertex needs both coordinates or neither");
    if (has_x) inst.drawing.vertices[id] = {ri.at("x").number(vs[i]["x"]), ri.at("y").number(vs[i]["y"])};
  }
  const auto re = r.at("edges");
  const auto& es = re.array(r.field(doc, "edges"));
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto ri = re.at(i);
    const int u = ri.at("u").integer(ri.field(es[i], "u"));
    const int v = ri.at("v").integer(ri.field(es[i], "v"));
    if (!inst.vertices.count(u)) ri.at("u").fail("unknown vertex " + std::to_string(u));
    if (!inst.vertices.count(v)) ri.at("v").fail("unknown vertex " + std::to_string(v));
    if (u == v) ri.fail("self loop");
    if (!inst.edges.insert(EdgeKey(u, v)).second) ri.fail("duplicate edge");
    const bool missing = es[i].contains("missing") && ri.at("missing").boolean(es[i]["missing"]);
    if (missing) {
      if (es[i].contains("bends")) ri.at("bends").fail("a missing edge has no bends");
      continue;
    }
    if (!inst.drawing.vertices.count(u) || !inst.drawing.vertices.count(v))
      ri.fail("a drawn edge needs drawn endpoints; mark it \"missing\"");
    OrthoPolyline line;
    line.points.push_back(inst.drawing.vertices.at(u));
    if (es[i].contains("bends")) {
      const auto rb = ri.at("bends");
      const auto& bs = rb.array(es[i]["bends"]);
      for (std::size_t j = 0; j < bs.size(); ++j) line.points.push_back(rb.at(j).point(bs[j]));
    }
    line.points.push_back(inst.drawing.vertices.at(v));
    inst.drawing.add_edge(u, v, std::move(line));
  }
  if (doc.contains("budget")) {
    const int b = r.at("budget").integer(doc["budget"]);
    if (b < 0) r.at("budget").fail("must be non-negative");
    inst.budget = b;
  }
  if (doc.contains("ports")) {
    const auto rp = r.at("ports");
    const auto& ps = rp.array(doc["ports"]);
    for (std::size_t i = 0; i < ps.size(); ++i) inst.port_hints.push_back(read_port(rp.at(i), ps[i]));
    std::sort(inst.port_hints.begin(), inst.port_hints.end());
  }
  forward_validation([&] { inst.check(); });
  return inst;
}

std::string serialize_instance(const BmoeInstance& inst) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  ordered_json vs = ordered_json::array(), es = ordered_json::array();
  for (auto v : inst.vertices) {
    ordered_json o = {{"id", v}};
    if (auto it = inst.drawing.vertices.find(v); it != inst.drawing.vertices.end()) {
      o["x"] = num(it->second.x);
      o["y"] = num(it->second.y);
    }
    vs.push_back(o);
  }
  for (const auto& e : inst.edges) {
    ordered_json o = {{"u", e.u}, {"v", e.v}};
    if (auto it = inst.drawing.edges.find(e); it != inst.drawing.edges.end()) {
      ordered_json bends = ordered_json::array();
      const auto& p = it->second.points;
      for (std::size_t i = 1; i + 1 < p.size(); ++i) bends.push_back(pt(p[i]));
      if (!bends.empty()) o["bends"] = bends;
    } else {
      o["missing"] = true;
    }
    es.push_back(o);
  }
  doc["vertices"] = vs;
  doc["edges"] = es;
  if (inst.budget) doc["budget"] = *inst.budget;
  if (!inst.port_hints.empty()) {
    ordered_json ps = ordered_json::array();
    for (const auto& p : inst.port_hints) ps.push_back(port_json(p));
    doc["ports"] = ps;
  }
  return doc.dump(2) + "\n";
}

std::string serialize_face(const FaceInstance& fi) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "face";
  doc["outer"] = fi.outer;
  doc["seed"] = pt(fi.seed);
  doc["drawing"] = drawing_json(fi.h);
  doc["dummies"] = std::vector<int>(fi.dummies.begin(), fi.dummies.end());
  doc["missing_vertices"] = fi.missing_vertices;
  doc["must_bend"] = std::vector<int>(fi.must_bend.begin(), fi.must_bend.end());
  ordered_json es = ordered_json::array(), ps = ordered_json::array(), cs = ordered_json::array();
  for (const auto& e : fi.missing_edges) es.push_back({e.u, e.v});
  for (const auto& p : fi.ports) ps.push_back(port_json(p));
  for (const auto& [e, pieces] : fi.chains) {
    ordered_json list = ordered_json::array();
    for (const auto& p : pieces) list.push_back({p.u, p.v});
    cs.push_back({{"edge", {e.u, e.v}}, {"pieces", list}});
  }
  doc["missing_edges"] = es;
  doc["ports"] = ps;
  doc["bend_offset"] = fi.bend_offset;
  doc["chains"] = cs;
  return doc.dump(2) + "\n";
}

FaceInstance parse_face(const std::string& text) {
  const auto doc = parse_json(text);
  const Reader r("");
  check_version(doc, r);
  FaceInstance fi;
  fi.outer = r.at("outer").boolean(r.field(doc, "outer"));
  fi.seed = r.at("seed").point(r.field(doc, "seed"));
  fi.h = read_drawing(r.at("drawing"), r.field(doc, "drawing"));
  auto ids = [&](const std::string& key) {
    std::vector<int> out;
    const auto rk = r.at(key);
    const auto& a = rk.array(r.field(doc, key));
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(rk.at(i).integer(a[i]));
    return out;
  };
  for (int v : ids("dummies")) fi.dummies.insert(v);
  fi.missing_vertices = ids("missing_vertices");
  for (int v : ids("must_bend")) fi.must_bend.insert(v);
  const auto re = r.at("missing_edges");
  const auto& es = re.array(r.field(doc, "missing_edges"));
  for (std::size_t i = 0; i < es.size(); ++i) fi.missing_edges.push_back(re.at(i).edge(es[i]));
  const auto rp = r.at("ports");
  const auto& ps = rp.array(r.field(doc, "ports"));
  for (std::size_t i = 0; i < ps.size(); ++i) fi.ports.push_back(read_port(rp.at(i), ps[i]));
  fi.bend_offset = r.at("bend_offset").integer(r.field(doc, "bend_offset"));
  const auto rc = r.at("chains");
  const auto& cs = rc.array(r.field(doc, "chains"));
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto ri = rc.at(i);
    const auto key = ri.at("edge").edge(ri.field(cs[i], "edge"));
    const auto rl = ri.at("pieces");
    const auto& list = rl.array(ri.field(cs[i], "pieces"));
    auto& pieces = fi.chains[key];
    for (std::size_t j = 0; j < list.size(); ++j) pieces.push_back(rl.at(j).edge(list[j]));
  }
  forward_validation([&] { fi.check(); });
  return fi;
}

std::string status_name(SolveStatus s) { return s == SolveStatus::Optimum ? "optimum" : "no_extension"; }

std::string result_json(const SolveResult& r, bool with_drawing) {
  ordered_json doc;
  if (r.status == SolveStatus::Optimum)
    doc["beta"] = r.beta;
  else
    doc["beta"] = nullptr;
  doc["status"] = status_name(r.status);
  doc["stats"] = {{"cap", r.cap},
                  {"branches", r.stats.branches},
                  {"faces", r.stats.faces},
                  {"bags", r.stats.bags},
                  {"configs", r.stats.configs},
                  {"local_solutions", r.stats.local_solutions},
                  {"max_width", r.stats.max_width},
                  {"max_sectors", r.stats.max_sectors}};
  if (with_drawing && r.status == SolveStatus::Optimum) doc["drawing"] = drawing_json(r.drawing);
  return doc.dump(2) + "\n";
}

std::optional<Layer> parse_layer(const std::string& name) {
  if (name == "drawing") return Layer::Drawing;
  if (name == "sectors") return Layer::Sectors;
  if (name == "subsectors") return Layer::Subsectors;
  if (name == "grid") return Layer::Grid;
  if (name == "solution") return Layer::Solution;
  return std::nullopt;
}

namespace {

class Svg {
 public:
  Svg(double min_x, double min_y, double max_x, double max_y, const RenderSpec& spec)
      : min_x_(min_x), max_y_(max_y), spec_(spec) {
    width_ = (max_x - min_x) * spec.scale + 2 * spec.margin;
    height_ = (max_y - min_y) * spec.scale + 2 * spec.margin;
  }

  std::string x(const Rat& v) const { return fmt((v.to_double() - min_x_) * spec_.scale + spec_.margin); }
  std::string y(const Rat& v) const { return fmt((max_y_ - v.to_double()) * spec_.scale + spec_.margin); }
  std::string xy(const Point& p) const { return x(p.x) + "," + y(p.y); }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  std::string header() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) + "\" height=\"" + fmt(height_) +
           "\" viewBox=\"0 0 " + fmt(width_) + " " + fmt(height_) + "\">\n";
  }

 private:
  double min_x_, max_y_;
  double width_ = 0, height_ = 0;
  const RenderSpec& spec_;
};

std::string color(int i) {
  const int hue = (i * 137) % 360;
  return "hsl(" + std::to_string(hue) + ",60%,78%)";
}

void polyline(std::ostringstream& os, const Svg& svg, const OrthoPolyline& line, const std::string& style) {
  os << "  <polyline points=\"";
  for (std::size_t i = 0; i < line.points.size(); ++i) os << (i ? " " : "") << svg.xy(line.points[i]);
  os << "\" fill=\"none\" " << style << "/>\n";
}

}  // namespace

std::string render_svg(const RenderInputs& in, const RenderSpec& spec) {
  auto want = [&](Layer l) { return std::find(spec.layers.begin(), spec.layers.end(), l) != spec.layers.end(); };
  std::vector<Point> pts = in.drawing.feature_points();
  if (in.solution && want(Layer::Solution))
    for (const auto& p : in.solution->feature_points()) pts.push_back(p);
  if (in.sectors && (want(Layer::Sectors) || want(Layer::Subsectors) || want(Layer::Grid))) {
    const auto& g = in.sectors->region.grid;
    if (!g.xs().empty() && !g.ys().empty()) {
      pts.push_back({g.xs().front(), g.ys().front()});
      pts.push_back({g.xs().back(), g.ys().back()});
    }
  }
  if (pts.empty()) pts.push_back({0, 0});
  double min_x = pts[0].x.to_double(), max_x = min_x, min_y = pts[0].y.to_double(), max_y = min_y;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p.x.to_double());
    max_x = std::max(max_x, p.x.to_double());
    min_y = std::min(min_y, p.y.to_double());
    max_y = std::max(max_y, p.y.to_double());
  }
  Svg svg(min_x, min_y, max_x, max_y, spec);
  std::ostringstream os;
  os << svg.header();
  const std::string stroke = Svg::fmt(spec.stroke);

  if (in.sectors && want(Layer::Sectors)) {
    const auto& dec = *in.sectors;
    const auto& g = dec.region.grid;
    os << " <g id=\"sectors\">\n";
    for (int e = 0; e < g.size(); ++e) {
      const int s = dec.sector_of[static_cast<std::size_t>(e)];
      if (s < 0) continue;
      const int i = g.i_of(e), j = g.j_of(e);
      const std::string fill = color(s);
      if (g.dim(e) == 2) {
        const Rat& x0 = g.xs()[static_cast<std::size_t>((i - 1) / 2)];
        const Rat& x1 = g.xs()[static_cast<std::size_t>((i + 1) / 2)];
        const Rat& y0 = g.ys()[static_cast<std::size_t>((j - 1) / 2)];
        const Rat& y1 = g.ys()[static_cast<std::size_t>((j + 1) / 2)];
        os << "  <polygon points=\"" << svg.xy({x0, y0}) << " " << svg.xy({x1, y0}) << " " << svg.xy({x1, y1}) << " "
           << svg.xy({x0, y1}) << "\" fill=\"" << fill << "\" stroke=\"" << fill << "\" stroke-width=\"0.5\"/>\n";
      } else if (dec.sectors[static_cast<std::size_t>(s)].degenerate == Degeneracy::None) {
        continue;
      } else if (g.dim(e) == 1) {
        const bool horizontal = (i & 1) != 0;
        const Point a = horizontal ? Point{g.xs()[static_cast<std::size_t>((i - 1) / 2)], g.y_at(j)}
                                   : Point{g.x_at(i), g.ys()[static_cast<std::size_t>((j - 1) / 2)]};
        const Point b = horizontal ? Point{g.xs()[static_cast<std::size_t>((i + 1) / 2)], g.y_at(j)}
                                   : Point{g.x_at(i), g.ys()[static_cast<std::size_t>((j + 1) / 2)]};
        os << "  <line x1=\"" << svg.x(a.x) << "\" y1=\"" << svg.y(a.y) << "\" x2=\"" << svg.x(b.x) << "\" y2=\""
           << svg.y(b.y) << "\" stroke=\"" << fill << "\" stroke-width=\"5\"/>\n";
      } else {
        os << "  <circle cx=\"" << svg.x(g.x_at(i)) << "\" cy=\"" << svg.y(g.y_at(j)) << "\" r=\"3\" fill=\"" << fill
           << "\"/>\n";
      }
    }
    for (const auto& sec : dec.sectors) {
      int label = sec.elements.front();
      for (int e : sec.elements)
        if (g.dim(e) == 2) {
          label = e;
          break;
        }
      std::string text = "(";
      for (std::size_t t = 0; t < sec.bvect.size(); ++t)
        text += (t ? "," : "") + (sec.bvect[t] == kInfDist ? std::string("inf") : std::to_string(sec.bvect[t]));
      text += ")";
      const Point p = g.rep(label);
      os << "  <text x=\"" << svg.x(p.x) << "\" y=\"" << svg.y(p.y)
         << "\" font-size=\"10\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << text << "</text>\n";
    }
    os << " </g>\n";
  }
  if (in.refinement && want(Layer::Subsectors)) {
    os << " <g id=\"subsectors\">\n";
    for (const auto& sub : in.refinement->subsectors) {
      os << "  <polygon points=\"" << svg.xy({sub.x_lo, sub.y_lo}) << " " << svg.xy({sub.x_hi, sub.y_lo}) << " "
         << svg.xy({sub.x_hi, sub.y_hi}) << " " << svg.xy({sub.x_lo, sub.y_hi})
         << "\" fill=\"none\" stroke=\"#555\" stroke-width=\"0.7\" stroke-dasharray=\"3,2\"/>\n";
    }
    os << " </g>\n";
  }
  if (in.grid && want(Layer::Grid)) {
    os << " <g id=\"grid\">\n";
    for (const auto& cell : in.grid->points)
      for (const auto& p : cell) os << "  <circle cx=\"" << svg.x(p.x) << "\" cy=\"" << svg.y(p.y) << "\" r=\"1\" fill=\"#333\"/>\n";
    os << " </g>\n";
  }
  if (want(Layer::Drawing)) {
    os << " <g id=\"drawing\">\n";
    for (const auto& [e, line] : in.drawing.edges)
      polyline(os, svg, line, "stroke=\"black\" stroke-width=\"" + stroke + "\"");
    for (const auto& [v, p] : in.drawing.vertices)
      os << "  <circle cx=\"" << svg.x(p.x) << "\" cy=\"" << svg.y(p.y) << "\" r=\"4\" fill=\"black\"><title>" << v
         << "</title></circle>\n";
    os << " </g>\n";
  }
  if (in.solution && want(Layer::Solution)) {
    os << " <g id=\"solution\">\n";
    for (const auto& [e, line] : in.solution->edges) {
      auto it = in.drawing.edges.find(e);
      if (it != in.drawing.edges.end() && it->second == line) continue;
      polyline(os, svg, line, "stroke=\"#d62728\" stroke-width=\"" + stroke + "\"");
    }
    for (const auto& [v, p] : in.solution->vertices) {
      if (in.drawing.vertices.count(v)) continue;
      os << "  <rect x=\"" << Svg::fmt(std::stod(svg.x(p.x)) - 4) << "\" y=\"" << Svg::fmt(std::stod(svg.y(p.y)) - 4)
         << "\" width=\"8\" height=\"8\" fill=\"#d62728\"><title>" << v << "</title></rect>\n";
    }
    os << " </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace orthext
