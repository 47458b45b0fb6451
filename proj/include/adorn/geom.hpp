#pragma once

// Planar kernel: points, segments, circular arcs, arc paths and closed regions
// bounded by them. Everything here is a value type; no function keeps state.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace adorn {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2() = default;
  Point2(double x_, double y_) : x(x_), y(y_) {}

  Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator/(double s) const { return {x / s, y / s}; }
  Point2 operator-() const { return {-x, -y}; }
  Point2& operator+=(Point2 o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(Point2 o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Point2&) const = default;
};

inline Point2 operator*(double s, Point2 p) { return p * s; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }  // ccw quarter turn
inline Point2 unit(Point2 a) { double n = norm(a); return n > 0 ? a / n : Point2{}; }
inline Point2 polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Tolerance {
  double eps_geom = 1e-9;
  double eps_overlap = 1e-7;

  void check() const;
};

/// Sign of the oriented area of triangle pqr: +1 ccw, -1 cw, 0 collinear.
/// The collinearity band is eps scaled by the magnitudes involved.
int orientation(Point2 p, Point2 q, Point2 r, double eps = 1e-9);

struct Segment {
  Point2 a;
  Point2 b;

  double length() const { return dist(a, b); }
  Point2 at(double t) const { return a + (b - a) * t; }
};

struct Disk {
  Point2 center;
  double radius = 0.0;

  bool contains(Point2 p, double eps = 0.0) const { return dist(p, center) <= radius + eps; }
};

/// Circular arc. The sweep is signed: positive runs counterclockwise.
class Arc {
 public:
  Arc() = default;
  Arc(Point2 center, double radius, double start_angle, double sweep);
  /// Builds the arc from start_angle to end_angle going ccw or cw.
  static Arc from_angles(Point2 center, double radius, double start_angle, double end_angle, bool ccw);
  /// Arc of the given circle from point p to point q (both assumed on the circle).
  static Arc through(Point2 center, Point2 p, Point2 q, bool ccw);

  Point2 center() const { return center_; }
  double radius() const { return radius_; }
  double start_angle() const { return start_; }
  double sweep() const { return sweep_; }
  double end_angle() const { return start_ + sweep_; }
  bool ccw() const { return sweep_ >= 0.0; }

  Point2 at_angle(double angle) const { return center_ + polar(radius_, angle); }
  Point2 at(double t) const { return at_angle(start_ + sweep_ * t); }
  Point2 start() const { return at(0.0); }
  Point2 end() const { return at(1.0); }
  double length() const { return radius_ * std::fabs(sweep_); }
  /// True if the polar angle lies in the closed angular span of the arc.
  bool spans(double angle) const;
  /// Parameter in [0,1] of a spanned polar angle.
  double param_of(double angle) const;

 private:
  Point2 center_;
  double radius_ = 0.0;
  double start_ = 0.0;
  double sweep_ = 0.0;
};

using Primitive = std::variant<Segment, Arc>;

Point2 prim_at(const Primitive& p, double t);
Point2 prim_start(const Primitive& p);
Point2 prim_end(const Primitive& p);
double prim_length(const Primitive& p);
Primitive prim_reversed(const Primitive& p);
/// Restriction of a primitive to the parameter range [t0, t1].
Primitive prim_sub(const Primitive& p, double t0, double t1);
double point_prim_distance(Point2 q, const Primitive& p);
double prim_prim_distance(const Primitive& p, const Primitive& q);
/// Signed angle swept by the primitive as seen from q (winding contribution).
double prim_winding_angle(const Primitive& p, Point2 q);

/// Orientation-preserving similarity: p -> translation + scale * R(angle) p.
struct Similarity {
  double cos_a = 1.0;
  double sin_a = 0.0;
  double scale = 1.0;
  Point2 translation;

  static Similarity identity() { return {}; }
  /// Maps local (0,0)->from and (len,0)->to where len = |to - from| / scale.
  static Similarity frame(Point2 from, Point2 to, double local_length);
  Point2 apply(Point2 p) const;
  Point2 apply_vector(Point2 v) const;
  double angle() const { return std::atan2(sin_a, cos_a); }
  Similarity inverse() const;
};

Primitive transformed(const Primitive& p, const Similarity& s);
/// Reflection across the x axis.
Primitive mirrored_x(const Primitive& p);

/// An ordered chain of primitives, consecutive ones sharing endpoints.
class ArcPath {
 public:
  ArcPath() = default;
  explicit ArcPath(std::vector<Primitive> prims);

  static ArcPath polyline(const std::vector<Point2>& pts);

  const std::vector<Primitive>& primitives() const { return prims_; }
  bool empty() const { return prims_.empty(); }
  double length() const;
  Point2 start() const;
  Point2 end() const;
  /// Point at arclength s from the path start. Throws when s is outside [0, length].
  Point2 point_at_arclength(double s) const;
  double distance_to(Point2 q) const;
  ArcPath reversed() const;
  ArcPath transformed(const Similarity& s) const;
  ArcPath mirrored_x() const;
  /// Gaps between consecutive primitives larger than eps are reported as errors.
  void check_continuity(double eps) const;
  /// Arclength offset of each primitive's start.
  std::vector<double> offsets() const;

 private:
  std::vector<Primitive> prims_;
};

struct BoundingBox {
  Point2 lo{1e300, 1e300};
  Point2 hi{-1e300, -1e300};

  void add(Point2 p);
  void add(const Primitive& p);
  bool empty() const { return lo.x > hi.x; }
  double gap(const BoundingBox& o) const;  // 0 when overlapping
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return empty() ? 0.0 : width() * height(); }
};

/// Closed region given by its boundary loop. The loop may pass over itself
/// (a bare segment has a boundary traversed there and back, enclosing nothing).
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<Primitive> boundary);

  static Region disk(Point2 center, double radius);
  static Region polygon(const std::vector<Point2>& pts);
  /// Region bounded by `first` followed by the reverse of `second`; both run between the same endpoints.
  static Region from_sides(const ArcPath& first, const ArcPath& second);

  const std::vector<Primitive>& boundary() const { return boundary_; }
  const BoundingBox& bbox() const { return bbox_; }
  int winding(Point2 q) const;
  bool contains(Point2 q) const { return winding(q) != 0; }
  /// Inside by more than eps from the boundary.
  bool interior(Point2 q, double eps) const;
  double distance_to_boundary(Point2 q) const;
  /// Distance from q to the region: 0 inside.
  double outside_distance(Point2 q) const;
  /// Green's-theorem area; positive for counterclockwise boundaries.
  double signed_area() const;
  double perimeter() const;
  Region transformed(const Similarity& s) const;

 private:
  std::vector<Primitive> boundary_;
  BoundingBox bbox_;
};

/// Greatest depth at which a boundary point of `a` lies inside `b` (0 if none).
double penetration_depth(const Region& a, const Region& b);

/// Positive: gap between disjoint regions. Zero: touching. Negative: depth of
/// the deepest boundary point of one region inside the other.
double separation(const Region& a, const Region& b);

/// Like separation, but when the bounding boxes are farther apart than
/// `cutoff` returns the box gap (a lower bound on the true gap) without
/// evaluating the boundaries.
double separation_bounded(const Region& a, const Region& b, double cutoff);

/// True when every boundary point of `inner` is within tol of `outer`.
bool region_contains(const Region& outer, const Region& inner, double tol);

double normalize_angle(double a);  // into (-pi, pi]

}  // namespace adorn
