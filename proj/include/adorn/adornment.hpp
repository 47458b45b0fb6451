#pragma once

// Adornments (a shape plus a base chord), slenderness, and lenses.

#include <optional>
#include <utility>

#include "adorn/geom.hpp"

namespace adorn {

/// Region bounded by two sides running from base.a (x) to base.b (y).
/// The upper side lies to the left of x->y. An empty side is the base itself.
struct Adornment {
  Segment base;
  ArcPath upper;
  ArcPath lower;

  static Adornment bare(Point2 x, Point2 y);
  /// One-sided polygonal adornment: x, pts..., y on the upper (or lower) side.
  static Adornment polygon_side(Point2 x, Point2 y, const std::vector<Point2>& pts, bool upper_side);

  Point2 x() const { return base.a; }
  Point2 y() const { return base.b; }
  ArcPath upper_side() const;
  ArcPath lower_side() const;
  Region region() const;
  Adornment transformed(const Similarity& s) const;
  /// Base mapped to (0,0)-(L,0).
  Adornment to_local() const;
  /// Throws GeometryError when sides are disconnected or do not join the base endpoints.
  void validate(const Tolerance& tol = {}) const;
  bool is_bare() const { return upper.empty() && lower.empty(); }
};

Similarity base_frame(const Segment& base);

struct SlenderVerdict {
  bool is_slender = true;
  bool is_symmetric = false;
  /// Arclengths s1 < s2 on `witness_side` where the monotone distances fail.
  std::optional<std::pair<double, double>> witness;
  bool witness_upper = true;
};

/// Along each side from x to y, |p - x| must not decrease and |p - y| must not increase.
SlenderVerdict is_slender(const Adornment& a, int n_samples = 16, const Tolerance& tol = {});
bool is_symmetric(const Adornment& a, double tol = 1e-7);

/// Re-evaluates a witness; true when it shows a violation larger than eps.
bool witness_violates(const ArcPath& side, Point2 x, Point2 y, std::pair<double, double> w, double eps);

struct Lens {
  Point2 x, y, z;

  double rx() const { return dist(z, x); }
  double ry() const { return dist(z, y); }
  /// Boundary of the lens on the left of x->y, running x->y along the base
  /// where the lens does not reach it.
  ArcPath upper_side() const;
  ArcPath lower_side() const;
  Region region() const;
  Adornment as_adornment() const;
};

struct HalfLens {
  Lens lens;
  bool upper = true;

  Region region() const;
  Adornment as_adornment() const;
};

Lens lens_of(Point2 x, Point2 y, Point2 z, const Tolerance& tol = {});
Lens max_slender(Point2 x, Point2 y);

struct CoveringLens {
  HalfLens half;
  Point2 z_shifted;
  double delta = 0.0;
};

CoveringLens covering_lens(const Adornment& a, Point2 z, const Tolerance& tol = {});

Adornment union_of_lenses(Point2 x, Point2 y, const std::vector<Point2>& zs, const Tolerance& tol = {});
Adornment slender_union(const Adornment& a, const Adornment& b, const Tolerance& tol = {});

/// Isosceles triangle on base [x,y] with the given apex angle, apex on the upper or lower side.
Adornment isosceles_adornment(Point2 x, Point2 y, double apex_angle, bool upper_side);

}  // namespace adorn
