#include "orthext/geometry.hpp"

#include <algorithm>

namespace orthext {

std::ostream& operator<<(std::ostream& os, const Point& p) { return os << '(' << p.x << ',' << p.y << ')'; }

std::ostream& operator<<(std::ostream& os, const AxisSegment& s) { return os << s.a() << "-" << s.b(); }

char to_char(Direction d) {
  switch (d) {
    case Direction::N: return 'N';
    case Direction::E: return 'E';
    case Direction::S: return 'S';
    case Direction::W: return 'W';
  }
  return '?';
}

Direction direction_from_char(char c) {
  switch (c) {
    case 'N': case 'n': return Direction::N;
    case 'E': case 'e': return Direction::E;
    case 'S': case 's': return Direction::S;
    case 'W': case 'w': return Direction::W;
    default: throw Error(ErrorCode::ParseError, std::string("unknown direction '") + c + "'");
  }
}

Direction direction_between(const Point& a, const Point& b) {
  if (a.x == b.x && a.y != b.y) return b.y > a.y ? Direction::N : Direction::S;
  if (a.y == b.y && a.x != b.x) return b.x > a.x ? Direction::E : Direction::W;
  throw Error(ErrorCode::NotAligned, "points are not axis-aligned and distinct");
}

AxisSegment::AxisSegment(Point a, Point b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_ == b_) throw Error(ErrorCode::DegenerateSegment, "zero-length segment");
  if (a_.x != b_.x && a_.y != b_.y) throw Error(ErrorCode::NotAligned, "segment is not axis-aligned");
}

bool AxisSegment::contains(const Point& p) const {
  Point l = lo();
  Point h = hi();
  if (horizontal()) return p.y == l.y && l.x <= p.x && p.x <= h.x;
  return p.x == l.x && l.y <= p.y && p.y <= h.y;
}

IntersectionKind segments_intersect(const AxisSegment& s1, const AxisSegment& s2) {
  const Point a0 = s1.lo(), a1 = s1.hi(), b0 = s2.lo(), b1 = s2.hi();
  if (s1.horizontal() == s2.horizontal()) {
    if (s1.horizontal()) {
      if (a0.y != b0.y) return NoIntersection{};
      Rat lo = max(a0.x, b0.x), hi = min(a1.x, b1.x);
      if (lo > hi) return NoIntersection{};
      if (lo == hi) return Point{lo, a0.y};
      return AxisSegment({lo, a0.y}, {hi, a0.y});
    }
    if (a0.x != b0.x) return NoIntersection{};
    Rat lo = max(a0.y, b0.y), hi = min(a1.y, b1.y);
    if (lo > hi) return NoIntersection{};
    if (lo == hi) return Point{a0.x, lo};
    return AxisSegment({a0.x, lo}, {a0.x, hi});
  }
  const AxisSegment& h = s1.horizontal() ? s1 : s2;
  const AxisSegment& v = s1.horizontal() ? s2 : s1;
  Point c{v.a().x, h.a().y};
  if (h.contains(c) && v.contains(c)) return c;
  return NoIntersection{};
}

RectPolygon::RectPolygon(std::vector<Point> corners) : corners_(std::move(corners)) {
  const std::size_t n = corners_.size();
  if (n < 4 || n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "rectilinear polygon needs an even number >= 4 of corners");
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = corners_[i];
    const Point& q = corners_[(i + 1) % n];
    const Point& r = corners_[(i + 2) % n];
    AxisSegment s1(p, q);
    AxisSegment s2(q, r);
    if (s1.horizontal() == s2.horizontal())
      throw Error(ErrorCode::InvalidArgument, "consecutive polygon sides must alternate orientation");
  }
  // Simplicity: non-adjacent sides are disjoint, adjacent sides meet only at their shared corner.
  auto sd = sides();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto x = segments_intersect(sd[i], sd[j]);
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (std::holds_alternative<NoIntersection>(x)) continue;
      if (adjacent && std::holds_alternative<Point>(x)) continue;
      throw Error(ErrorCode::InvalidArgument, "polygon is not simple");
    }
  }
  if (doubled_area().sign() < 0) std::reverse(corners_.begin(), corners_.end());
}

RectPolygon RectPolygon::rectangle(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1) {
  return RectPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

std::vector<AxisSegment> RectPolygon::sides() const {
  std::vector<AxisSegment> out;
  out.reserve(corners_.size());
  for (std::size_t i = 0; i < corners_.size(); ++i) out.push_back(side(i));
  return out;
}

Rat RectPolygon::doubled_area() const {
  Rat a;
  const std::size_t n = corners_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = corners_[i];
    const Point& q = corners_[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return a;
}

Point RectPolygon::min_corner() const {
  Point m = corners_.front();
  for (const auto& c : corners_) m = {min(m.x, c.x), min(m.y, c.y)};
  return m;
}

Point RectPolygon::max_corner() const {
  Point m = corners_.front();
  for (const auto& c : corners_) m = {max(m.x, c.x), max(m.y, c.y)};
  return m;
}

Location point_in_polygon(const Point& p, const RectPolygon& poly) {
  bool inside = false;
  for (const auto& s : poly.sides()) {
    if (s.contains(p)) return Location::Boundary;
    if (!s.vertical()) continue;
    Point lo = s.lo(), hi = s.hi();
    // Half-open rule on y so that a ray through a corner is counted once.
    if (lo.x > p.x && lo.y <= p.y && p.y < hi.y) inside = !inside;
  }
  return inside ? Location::Interior : Location::Exterior;
}

bool orth_visible(const Point& p, const Point& q, const RectPolygon& poly) {
  if (p == q) return true;
  if (p.x != q.x && p.y != q.y) throw Error(ErrorCode::NotAligned, "orth_visible needs axis-aligned points");
  AxisSegment pq(p, q);
  for (const auto& s : poly.sides()) {
    auto x = segments_intersect(pq, s);
    if (std::holds_alternative<AxisSegment>(x)) return false;
    if (const Point* r = std::get_if<Point>(&x); r && *r != p && *r != q) return false;
  }
  Point mid{(p.x + q.x) / 2, (p.y + q.y) / 2};
  return point_in_polygon(mid, poly) == Location::Interior;
}

}  // namespace orthext
