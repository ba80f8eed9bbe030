#pragma once

#include <random>
#include <vector>

#include "orthext/drawing.hpp"
#include "orthext/geometry.hpp"

namespace testsupport {

using orthext::Point;
using orthext::RectPolygon;

/// Simply connected polyomino boundary inside a w x h grid of unit cells, scaled by `scale`.
/// Grows `cells` cells from a random start; retries until the shape has no holes and no
/// corner-only contacts and at most `max_corners` corners.
RectPolygon random_polygon(std::mt19937& rng, int w, int h, int cells, std::size_t max_corners = 20,
                           int scale = 1);

/// Cycle drawing whose vertices are the polygon corners, ids 0..n-1 in counterclockwise order.
orthext::Drawing polygon_drawing(const RectPolygon& poly);

}  // namespace testsupport

namespace testsupport {

/// Valid drawing made from one or two random polygons where only some corners are vertices.
orthext::Drawing random_drawing(std::mt19937& rng, int scale = 2);

}  // namespace testsupport

#include "orthext/instance.hpp"

namespace testsupport {

/// Cycle through `pts` where only points flagged in `is_vertex` become vertices (ids from
/// `first_id` on); needs at least three vertices.
orthext::Drawing cycle_drawing(const std::vector<Point>& pts, const std::vector<bool>& is_vertex, int first_id = 0);

/// A point strictly inside the polygon (center of an inside half-unit cell).
Point interior_point(const RectPolygon& poly);

/// Free sides of drawn vertex v pointing into the polygon interior.
std::vector<orthext::Direction> inward_sides(const orthext::Drawing& d, const RectPolygon& poly, orthext::VertexId v);

/// Inner-face instance on a random polygon (scale 2, side midpoints randomly subdivided) with
/// `ports` ports at distinct anchors, all missing edges going to ceil(ports/4) missing vertices.
orthext::FaceInstance random_face(std::mt19937& rng, int ports, std::size_t max_corners = 20, int cells = 10);

/// Face instance for the interior of a polygon whose corners are all vertices.
orthext::FaceInstance polygon_face(const RectPolygon& poly, const std::vector<orthext::PortCandidate>& ports,
                                   int missing = 1);

}  // namespace testsupport
