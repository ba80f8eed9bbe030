#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthext/dp.hpp"
#include "orthext/reduction.hpp"

namespace orthext {

inline constexpr int kFormatVersion = 1;

/// Parses an instance document; throws ParseError naming the line or field, ValidationError
/// with the drawing report if the drawn part is invalid.
BmoeInstance parse_instance(const std::string& text);
/// Canonical document: ids ascending, coordinates as exact-number strings.
std::string serialize_instance(const BmoeInstance& inst);

/// Face instances are emitted by `reduce` and accepted wherever a face is expected.
std::string serialize_face(const FaceInstance& fi);
FaceInstance parse_face(const std::string& text);

std::string status_name(SolveStatus s);
/// {beta, status, stats, cap, drawing?}; the drawing is included when `with_drawing` is set.
std::string result_json(const SolveResult& r, bool with_drawing);

enum class Layer { Drawing, Sectors, Subsectors, Grid, Solution };

struct RenderSpec {
  std::vector<Layer> layers = {Layer::Drawing};
  double scale = 40;    ///< pixels per drawing unit
  double margin = 20;   ///< pixels around the bounding box
  double stroke = 2;
};

/// Everything a picture may show; layers whose input is absent are skipped.
struct RenderInputs {
  Drawing drawing;                        ///< the partial drawing
  const SectorDecomposition* sectors = nullptr;
  const Refinement* refinement = nullptr;
  const SectorGrid* grid = nullptr;
  const Drawing* solution = nullptr;      ///< completed drawing; parts absent from `drawing` are highlighted
};

/// SVG with y pointing up. Deterministic for fixed inputs.
std::string render_svg(const RenderInputs& in, const RenderSpec& spec = {});

std::optional<Layer> parse_layer(const std::string& name);

}  // namespace orthext
