#pragma once

#include <array>
#include <compare>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "orthext/rational.hpp"

namespace orthext {

struct Point {
  Rat x;
  Rat y;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

inline Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
std::ostream& operator<<(std::ostream& os, const Point& p);

/// Compass direction with y growing upwards: N is +y, E is +x.
enum class Direction : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::N, Direction::E, Direction::S,
                                                          Direction::W};

constexpr int dx(Direction d) { return d == Direction::E ? 1 : (d == Direction::W ? -1 : 0); }
constexpr int dy(Direction d) { return d == Direction::N ? 1 : (d == Direction::S ? -1 : 0); }
constexpr Direction opposite(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 2) % 4); }
constexpr Direction rotate_cw(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 1) % 4); }
constexpr Direction rotate_ccw(Direction d) { return static_cast<Direction>((static_cast<int>(d) + 3) % 4); }
constexpr bool is_vertical(Direction d) { return d == Direction::N || d == Direction::S; }
char to_char(Direction d);
Direction direction_from_char(char c);
/// Direction of travel from `a` to `b`; throws NotAligned unless they differ on exactly one axis.
Direction direction_between(const Point& a, const Point& b);

/// A closed, non-degenerate, horizontal or vertical segment.
class AxisSegment {
 public:
  AxisSegment(Point a, Point b);

  const Point& a() const { return a_; }
  const Point& b() const { return b_; }
  bool horizontal() const { return a_.y == b_.y; }
  bool vertical() const { return a_.x == b_.x; }
  Rat length() const { return horizontal() ? abs(b_.x - a_.x) : abs(b_.y - a_.y); }
  Point lo() const { return std::min(a_, b_); }
  Point hi() const { return std::max(a_, b_); }
  bool contains(const Point& p) const;
  /// True if `p` is on the segment but not one of its endpoints.
  bool contains_in_interior(const Point& p) const { return contains(p) && p != a_ && p != b_; }

  friend bool operator==(const AxisSegment& s, const AxisSegment& t) {
    return s.lo() == t.lo() && s.hi() == t.hi();
  }

 private:
  Point a_;
  Point b_;
};

std::ostream& operator<<(std::ostream& os, const AxisSegment& s);

struct NoIntersection {
  friend bool operator==(const NoIntersection&, const NoIntersection&) = default;
};
using IntersectionKind = std::variant<NoIntersection, Point, AxisSegment>;

IntersectionKind segments_intersect(const AxisSegment& s1, const AxisSegment& s2);

/// Simple rectilinear polygon, stored counterclockwise.
class RectPolygon {
 public:
  /// Validates the corner cycle; accepts either orientation and stores it counterclockwise.
  explicit RectPolygon(std::vector<Point> corners);
  static RectPolygon rectangle(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1);

  const std::vector<Point>& corners() const { return corners_; }
  std::size_t size() const { return corners_.size(); }
  AxisSegment side(std::size_t i) const { return {corners_[i], corners_[(i + 1) % corners_.size()]}; }
  std::vector<AxisSegment> sides() const;
  /// Twice the signed area (positive for the stored orientation).
  Rat doubled_area() const;
  Point min_corner() const;
  Point max_corner() const;

 private:
  std::vector<Point> corners_;
};

enum class Location { Interior, Boundary, Exterior };

Location point_in_polygon(const Point& p, const RectPolygon& poly);

/// True iff the open segment pq lies in the interior of `poly`; p and q must share a coordinate.
bool orth_visible(const Point& p, const Point& q, const RectPolygon& poly);

}  // namespace orthext
