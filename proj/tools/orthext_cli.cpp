// Command-line front end: validate, reduce, sectors, solve, oracle, render.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "orthext/dp.hpp"
#include "orthext/error.hpp"
#include "orthext/io.hpp"
#include "orthext/oracle.hpp"
#include "orthext/reduction.hpp"

using namespace orthext;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kNoExtension = 1, kInputError = 2, kInternal = 3 };

std::string read_input(const std::string& path) {
  std::ostringstream os;
  if (path == "-") {
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotAligned:
    case ErrorCode::DegenerateSegment:
    case ErrorCode::PortBlocked:
      return kInputError;
    case ErrorCode::NoValidBranch:
      return kNoExtension;
    default:
      return kInternal;
  }
}

/// Face of a reduction branch made ready for the sector engine: cleaned, and for the outer face
/// framed and cut open along the first cut branch.
FaceInstance sector_ready(const FaceInstance& fi) {
  if (!fi.outer) return make_clean(fi);
  auto cuts = enumerate_cut_branches(frame_outer(fi));
  if (cuts.empty()) throw Error(ErrorCode::NoValidBranch, "outer face has no cut branch");
  return make_clean(cuts.front());
}

struct FaceView {
  FaceInstance fi;
  SectorDecomposition dec;
  CriticalCorners crit;
  Refinement ref;
  SectorGrid grid;
};

FaceView view_face(const FaceInstance& face, int m) {
  FaceView v;
  v.fi = sector_ready(face);
  auto complex = build_complex(v.fi);
  v.dec = decompose_sectors(complex.region, v.fi.h, v.fi.ports);
  v.crit = critical_corners(v.dec, reflex_corners(complex.region, v.fi.h, v.fi.anchors()));
  v.ref = refine_subsectors(v.dec, v.crit);
  v.grid = sector_grid(v.dec, v.ref, m > 0 ? m : static_cast<int>(subgridsize(v.fi.k())));
  return v;
}

ordered_json face_stats(const FaceView& v) {
  std::size_t crit_max = 0;
  for (const auto& per : v.crit)
    for (const auto& list : per) crit_max = std::max(crit_max, list.size());
  int xi = 0;
  ordered_json sectors = ordered_json::array();
  for (const auto& s : v.dec.sectors) {
    xi = std::max(xi, s.xi_max);
    ordered_json b = ordered_json::array();
    for (int d : s.bvect) b.push_back(d == kInfDist ? ordered_json(nullptr) : ordered_json(d));
    sectors.push_back({{"id", s.id}, {"bvect", b}, {"elements", s.elements.size()}, {"xi_max", s.xi_max}});
  }
  ordered_json edges = ordered_json::array();
  for (const auto& [ab, dirs] : v.dec.graph.adjacent)
    if (ab.first < ab.second) edges.push_back({ab.first, ab.second});
  return {{"outer", v.fi.outer},
          {"k", v.fi.k()},
          {"ports", v.fi.ports.size()},
          {"sector_count", v.dec.sectors.size()},
          {"subsector_count", v.ref.subsectors.size()},
          {"grid_scale", v.grid.m},
          {"critical_corners_max", crit_max},
          {"xi_max", xi},
          {"sector_graph_is_tree", v.dec.graph.is_tree()},
          {"treewidth", decompose(v.dec.graph).width()},
          {"pathwidth", path_decomposition(v.dec.graph).width()},
          {"sectors", sectors},
          {"sector_edges", edges}};
}

std::vector<FaceBranch> branches_of(const BmoeInstance& inst, std::size_t max_branches) {
  ReduceOptions ro;
  ro.max_branches = max_branches;
  return reduce_to_faces(inst, ro);
}

const FaceInstance& pick_face(const std::vector<FaceBranch>& branches, std::size_t b, std::size_t f) {
  if (b >= branches.size()) throw Error(ErrorCode::InvalidArgument, "branch index out of range");
  if (f >= branches[b].faces.size()) throw Error(ErrorCode::InvalidArgument, "face index out of range");
  return branches[b].faces[f];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bend-minimal extension of partial orthogonal drawings"};
  app.require_subcommand(1);

  std::string input = "-";
  std::size_t max_branches = 100000;
  DpOptions dp;
  std::optional<int> budget;
  std::string render_out, dot_out, layers = "drawing,solution";
  std::size_t branch = 0, face = 0;
  int oracle_resolution = 0;

  auto add_input = [&](CLI::App* c) { c->add_option("instance", input, "instance document, - for stdin"); };
  auto* validate_cmd = app.add_subcommand("validate", "parse and validate an instance");
  add_input(validate_cmd);
  auto* reduce_cmd = app.add_subcommand("reduce", "emit the face instances of every reduction branch");
  add_input(reduce_cmd);
  reduce_cmd->add_option("--max-branches", max_branches);
  auto* sectors_cmd = app.add_subcommand("sectors", "sector decomposition of one face");
  add_input(sectors_cmd);
  sectors_cmd->add_option("--branch", branch, "reduction branch index");
  sectors_cmd->add_option("--face", face, "face index within the branch");
  sectors_cmd->add_option("--grid-scale", dp.grid_scale, "sector grid resolution m, 0 for the default");
  sectors_cmd->add_option("--render", render_out, "write an SVG of the decomposition");
  sectors_cmd->add_option("--dot", dot_out, "write the tree decomposition of the sector graph");
  auto* solve_cmd = app.add_subcommand("solve", "compute a bend-minimal extension");
  add_input(solve_cmd);
  solve_cmd->add_option("--grid-scale", dp.grid_scale, "sector grid resolution m, 0 for the default");
  solve_cmd->add_option("--bend-cap", dp.bend_cap, "largest bend number tried");
  solve_cmd->add_option("--budget", budget, "bend budget; overrides the document");
  solve_cmd->add_option("--seed", dp.seed);
  solve_cmd->add_option("--max-branches", max_branches);
  solve_cmd->add_option("--render", render_out, "write an SVG of the solution");
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum for tiny instances");
  add_input(oracle_cmd);
  oracle_cmd->add_option("--bend-cap", dp.bend_cap);
  oracle_cmd->add_option("--budget", budget);
  oracle_cmd->add_option("--resolution", oracle_resolution, "lattice lines per gap, 0 for automatic");
  auto* render_cmd = app.add_subcommand("render", "draw an instance as SVG");
  add_input(render_cmd);
  render_cmd->add_option("-o,--output", render_out, "output file, stdout if omitted");
  render_cmd->add_option("--layers", layers, "comma-separated: drawing, sectors, subsectors, grid, solution");
  render_cmd->add_option("--grid-scale", dp.grid_scale);
  render_cmd->add_option("--bend-cap", dp.bend_cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    auto inst = parse_instance(read_input(input));
    if (budget) inst.budget = *budget;
    dp.max_branches = max_branches;

    if (*validate_cmd) {
      ordered_json out = {{"status", "valid"},
                          {"vertices", inst.vertices.size()},
                          {"edges", inst.edges.size()},
                          {"missing_vertices", inst.missing_vertices().size()},
                          {"missing_edges", inst.missing_edges().size()},
                          {"kappa", inst.kappa()}};
      std::cout << out.dump(2) << "\n";
      return kOk;
    }
    if (*reduce_cmd) {
      ordered_json out = {{"branches", ordered_json::array()}};
      for (const auto& br : branches_of(inst, max_branches)) {
        ordered_json faces = ordered_json::array();
        for (const auto& fi : br.faces) faces.push_back(ordered_json::parse(serialize_face(fi)));
        out["branches"].push_back({{"label", br.label}, {"offset", br.offset}, {"faces", faces}});
      }
      std::cout << out.dump(2) << "\n";
      return kOk;
    }
    if (*sectors_cmd) {
      const auto branches = branches_of(inst, max_branches);
      const auto v = view_face(pick_face(branches, branch, face), dp.grid_scale);
      std::cout << face_stats(v).dump(2) << "\n";
      if (!dot_out.empty()) write_file(dot_out, to_dot(decompose(v.dec.graph, dp.seed)));
      if (!render_out.empty()) {
        RenderInputs in;
        in.drawing = v.fi.h;
        in.sectors = &v.dec;
        in.refinement = &v.ref;
        in.grid = &v.grid;
        RenderSpec spec;
        spec.layers = {Layer::Sectors, Layer::Subsectors, Layer::Grid, Layer::Drawing};
        write_file(render_out, render_svg(in, spec));
      }
      return kOk;
    }
    if (*solve_cmd) {
      auto r = solve_bmoe(inst, dp);
      std::cout << result_json(r, true);
      if (!render_out.empty() && r.status == SolveStatus::Optimum) {
        RenderInputs in;
        in.drawing = inst.drawing;
        in.solution = &r.drawing;
        RenderSpec spec;
        spec.layers = {Layer::Drawing, Layer::Solution};
        write_file(render_out, render_svg(in, spec));
      }
      return r.status == SolveStatus::Optimum ? kOk : kNoExtension;
    }
    if (*oracle_cmd) {
      OracleOptions o;
      o.bend_cap = dp.bend_cap;
      o.resolution = oracle_resolution;
      auto beta = oracle_bmoe(inst, o);
      ordered_json out;
      out["beta"] = beta ? ordered_json(*beta) : ordered_json(nullptr);
      out["status"] = beta ? "optimum" : "no_extension";
      out["stats"] = {{"cap", inst.budget ? std::min(*inst.budget, dp.bend_cap) : dp.bend_cap}};
      std::cout << out.dump(2) << "\n";
      return beta ? kOk : kNoExtension;
    }
    if (*render_cmd) {
      RenderSpec spec;
      spec.layers.clear();
      std::stringstream ss(layers);
      for (std::string name; std::getline(ss, name, ',');) {
        auto l = parse_layer(name);
        if (!l) throw Error(ErrorCode::InvalidArgument, "unknown layer '" + name + "'");
        spec.layers.push_back(*l);
      }
      auto want = [&](Layer l) { return std::find(spec.layers.begin(), spec.layers.end(), l) != spec.layers.end(); };
      RenderInputs in;
      in.drawing = inst.drawing;
      std::optional<SolveResult> solved;
      if (want(Layer::Solution)) {
        solved = solve_bmoe(inst, dp);
        if (solved->status == SolveStatus::Optimum) in.solution = &solved->drawing;
      }
      std::optional<FaceView> v;
      if ((want(Layer::Sectors) || want(Layer::Subsectors) || want(Layer::Grid)) && !inst.missing_edges().empty()) {
        const auto branches = branches_of(inst, max_branches);
        v = view_face(pick_face(branches, 0, 0), dp.grid_scale);
        in.sectors = &v->dec;
        in.refinement = &v->ref;
        in.grid = &v->grid;
      }
      const auto svg = render_svg(in, spec);
      if (render_out.empty())
        std::cout << svg;
      else
        write_file(render_out, svg);
      return kOk;
    }
  } catch (const Error& e) {
    const int rc = exit_code(e.code());
    ordered_json out = {{"beta", nullptr},
                        {"status", rc == kNoExtension ? "no_extension" : "error"},
                        {"error", to_string(e.code())},
                        {"message", e.what()}};
    std::cout << out.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
