#include "adorn/geom.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace adorn {

namespace {

constexpr double kParamTol = 1e-12;

double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double point_segment_distance(Point2 q, const Segment& s) {
  Point2 d = s.b - s.a;
  double len2 = dot(d, d);
  if (len2 == 0.0) return dist(q, s.a);
  double t = clamp01(dot(q - s.a, d) / len2);
  return dist(q, s.at(t));
}

double point_arc_distance(Point2 q, const Arc& arc) {
  Point2 rel = q - arc.center();
  double r = norm(rel);
  if (r == 0.0) return arc.radius();
  double angle = std::atan2(rel.y, rel.x);
  if (arc.spans(angle)) return std::fabs(r - arc.radius());
  return std::min(dist(q, arc.start()), dist(q, arc.end()));
}

// Intersection parameters (t on first, s on second).
using ParamPairs = std::vector<std::pair<double, double>>;

ParamPairs intersect_seg_seg(const Segment& p, const Segment& q) {
  ParamPairs out;
  Point2 d = p.b - p.a;
  Point2 e = q.b - q.a;
  Point2 w = q.a - p.a;
  double den = cross(d, e);
  double scale = norm(d) * norm(e);
  if (scale == 0.0) {
    // Degenerate segment(s): treat as points.
    if (norm(d) == 0.0 && point_segment_distance(p.a, q) == 0.0) {
      double len2 = dot(e, e);
      out.emplace_back(0.0, len2 > 0 ? clamp01(dot(p.a - q.a, e) / len2) : 0.0);
    } else if (norm(e) == 0.0 && point_segment_distance(q.a, p) == 0.0) {
      double len2 = dot(d, d);
      out.emplace_back(len2 > 0 ? clamp01(dot(q.a - p.a, d) / len2) : 0.0, 0.0);
    }
    return out;
  }
  if (std::fabs(den) > 1e-14 * scale) {
    double t = cross(w, e) / den;
    double s = cross(w, d) / den;
    if (t >= -kParamTol && t <= 1 + kParamTol && s >= -kParamTol && s <= 1 + kParamTol)
      out.emplace_back(clamp01(t), clamp01(s));
    return out;
  }
  // Parallel. Collinear when w is along d.
  if (std::fabs(cross(w, d)) > 1e-14 * norm(d) * std::max(1.0, norm(w))) return out;
  double len2 = dot(d, d);
  double t0 = dot(q.a - p.a, d) / len2;
  double t1 = dot(q.b - p.a, d) / len2;
  double lo = std::max(0.0, std::min(t0, t1));
  double hi = std::min(1.0, std::max(t0, t1));
  if (lo > hi + kParamTol) return out;
  double elen2 = dot(e, e);
  for (double t : {lo, hi}) {
    Point2 pt = p.at(t);
    out.emplace_back(t, clamp01(dot(pt - q.a, e) / elen2));
  }
  return out;
}

ParamPairs intersect_seg_arc(const Segment& s, const Arc& arc) {
  ParamPairs out;
  Point2 d = s.b - s.a;
  Point2 f = s.a - arc.center();
  double A = dot(d, d);
  if (A == 0.0) {
    if (std::fabs(norm(f) - arc.radius()) < 1e-14 && arc.spans(std::atan2(f.y, f.x)))
      out.emplace_back(0.0, arc.param_of(std::atan2(f.y, f.x)));
    return out;
  }
  double B = 2.0 * dot(f, d);
  double C = dot(f, f) - arc.radius() * arc.radius();
  double disc = B * B - 4 * A * C;
  if (disc < 0.0) {
    // Near-tangent lines within rounding of touching still count as a touch.
    if (disc > -1e-14 * std::max(1.0, B * B)) disc = 0.0;
    else return out;
  }
  double sq = std::sqrt(disc);
  double roots[2] = {(-B - sq) / (2 * A), (-B + sq) / (2 * A)};
  int n_roots = (sq == 0.0) ? 1 : 2;
  for (int i = 0; i < n_roots; ++i) {
    double t = roots[i];
    if (t < -kParamTol || t > 1 + kParamTol) continue;
    t = clamp01(t);
    Point2 pt = s.at(t) - arc.center();
    double ang = std::atan2(pt.y, pt.x);
    if (arc.spans(ang)) out.emplace_back(t, arc.param_of(ang));
  }
  return out;
}

ParamPairs intersect_arc_arc(const Arc& p, const Arc& q) {
  ParamPairs out;
  Point2 c1 = p.center(), c2 = q.center();
  double r1 = p.radius(), r2 = q.radius();
  double d = dist(c1, c2);
  if (d < 1e-14 * std::max(1.0, r1)) {
    if (std::fabs(r1 - r2) > 1e-14 * std::max(1.0, r1)) return out;
    // Same circle: report shared endpoints.
    for (double t : {0.0, 1.0}) {
      double ang = p.start_angle() + p.sweep() * t;
      if (q.spans(ang)) out.emplace_back(t, q.param_of(ang));
    }
    for (double s : {0.0, 1.0}) {
      double ang = q.start_angle() + q.sweep() * s;
      if (p.spans(ang)) out.emplace_back(p.param_of(ang), s);
    }
    return out;
  }
  if (d > r1 + r2 + 1e-14 * (r1 + r2) || d < std::fabs(r1 - r2) - 1e-14 * (r1 + r2)) return out;
  double a = (r1 * r1 - r2 * r2 + d * d) / (2 * d);
  double h2 = r1 * r1 - a * a;
  double h = h2 > 0 ? std::sqrt(h2) : 0.0;
  Point2 ex = (c2 - c1) / d;
  Point2 base = c1 + ex * a;
  Point2 pts[2] = {base + perp(ex) * h, base - perp(ex) * h};
  int n_pts = (h == 0.0) ? 1 : 2;
  for (int i = 0; i < n_pts; ++i) {
    Point2 u = pts[i] - c1;
    Point2 v = pts[i] - c2;
    double a1 = std::atan2(u.y, u.x);
    double a2 = std::atan2(v.y, v.x);
    if (p.spans(a1) && q.spans(a2)) out.emplace_back(p.param_of(a1), q.param_of(a2));
  }
  return out;
}

ParamPairs prim_intersections(const Primitive& p, const Primitive& q) {
  return std::visit(
      overloaded{
          [](const Segment& a, const Segment& b) { return intersect_seg_seg(a, b); },
          [](const Segment& a, const Arc& b) { return intersect_seg_arc(a, b); },
          [](const Arc& a, const Segment& b) {
            ParamPairs r = intersect_seg_arc(b, a);
            for (auto& pr : r) std::swap(pr.first, pr.second);
            return r;
          },
          [](const Arc& a, const Arc& b) { return intersect_arc_arc(a, b); },
      },
      p, q);
}

double seg_arc_distance(const Segment& s, const Arc& arc) {
  if (!intersect_seg_arc(s, arc).empty()) return 0.0;
  double best = std::min(point_arc_distance(s.a, arc), point_arc_distance(s.b, arc));
  best = std::min({best, point_segment_distance(arc.start(), s), point_segment_distance(arc.end(), s)});
  Point2 d = s.b - s.a;
  double len2 = dot(d, d);
  if (len2 > 0.0) {
    // Interior critical points lie on the perpendicular from the center to the line.
    double t = dot(arc.center() - s.a, d) / len2;
    Point2 foot = s.a + d * t;
    Point2 dir = foot - arc.center();
    double psi = norm(dir) > 0 ? std::atan2(dir.y, dir.x) : std::atan2(perp(d).y, perp(d).x);
    for (double ang : {psi, psi + kPi}) {
      if (arc.spans(ang)) best = std::min(best, point_segment_distance(arc.at_angle(ang), s));
    }
  }
  return best;
}

double arc_arc_distance(const Arc& p, const Arc& q) {
  if (!intersect_arc_arc(p, q).empty()) return 0.0;
  double best = std::min({point_arc_distance(p.start(), q), point_arc_distance(p.end(), q),
                          point_arc_distance(q.start(), p), point_arc_distance(q.end(), p)});
  Point2 cc = q.center() - p.center();
  if (norm(cc) > 0.0) {
    double phi = std::atan2(cc.y, cc.x);
    for (double ang : {phi, phi + kPi}) {
      if (p.spans(ang)) best = std::min(best, point_arc_distance(p.at_angle(ang), q));
      if (q.spans(ang)) best = std::min(best, point_arc_distance(q.at_angle(ang), p));
    }
  }
  return best;
}

// Maximize f along every boundary primitive of `region` by dense sampling,
// golden-section refinement around the best sample, and one-sided searches
// starting at the crossings with `other`.
double max_over_boundary(const Region& region, const Region& other,
                         const std::function<double(Point2)>& f) {
  BoundingBox box = region.bbox();
  box.add(other.bbox().lo);
  box.add(other.bbox().hi);
  double size = std::max({box.width(), box.height(), 1e-12});
  double h = size / 256.0;
  double best = 0.0;

  auto golden = [&](const Primitive& p, double lo, double hi) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(prim_at(p, x1)), f2 = f(prim_at(p, x2));
    for (int it = 0; it < 48 && (b - a) > 1e-13; ++it) {
      if (f1 < f2) {
        a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(prim_at(p, x2));
      } else {
        b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(prim_at(p, x1));
      }
    }
    return std::max(f1, f2);
  };

  for (const Primitive& p : region.boundary()) {
    double len = prim_length(p);
    if (len == 0.0) {
      best = std::max(best, f(prim_start(p)));
      continue;
    }
    int n = std::clamp(static_cast<int>(std::ceil(len / h)), 8, 512);
    std::vector<double> vals(n + 1);
    int arg = 0;
    for (int k = 0; k <= n; ++k) {
      vals[k] = f(prim_at(p, static_cast<double>(k) / n));
      if (vals[k] > vals[arg]) arg = k;
    }
    best = std::max(best, vals[arg]);
    if (vals[arg] > 0.0) {
      double lo = std::max(0, arg - 1) / static_cast<double>(n);
      double hi = std::min(n, arg + 1) / static_cast<double>(n);
      best = std::max(best, golden(p, lo, hi));
    }
    double step = 1.0 / n;
    for (const Primitive& q : other.boundary()) {
      for (auto [t, s] : prim_intersections(p, q)) {
        (void)s;
        if (t + 1e-15 < 1.0) best = std::max(best, golden(p, t, std::min(1.0, t + step)));
        if (t > 1e-15) best = std::max(best, golden(p, std::max(0.0, t - step), t));
      }
    }
  }
  return best;
}

}  // namespace

void Tolerance::check() const {
  if (!(eps_geom > 0.0) || !(eps_overlap >= eps_geom))
    throw GeometryError("tolerance requires 0 < eps_geom <= eps_overlap");
}

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

int orientation(Point2 p, Point2 q, Point2 r, double eps) {
  double area2 = cross(q - p, r - p);
  double scale = std::max({dist(p, q), dist(p, r), dist(q, r)});
  if (std::fabs(area2) <= eps * scale) return 0;
  return area2 > 0 ? 1 : -1;
}

// --- Arc ---------------------------------------------------------------------

Arc::Arc(Point2 center, double radius, double start_angle, double sweep)
    : center_(center), radius_(radius), start_(start_angle), sweep_(sweep) {
  if (!(radius >= 0.0)) throw GeometryError("arc radius must be nonnegative");
}

Arc Arc::from_angles(Point2 center, double radius, double start_angle, double end_angle, bool ccw) {
  double sweep = end_angle - start_angle;
  if (ccw) {
    sweep = std::fmod(sweep, kTwoPi);
    if (sweep < 0) sweep += kTwoPi;
  } else {
    sweep = std::fmod(sweep, kTwoPi);
    if (sweep > 0) sweep -= kTwoPi;
  }
  return Arc(center, radius, start_angle, sweep);
}

Arc Arc::through(Point2 center, Point2 p, Point2 q, bool ccw) {
  Point2 u = p - center, v = q - center;
  return from_angles(center, 0.5 * (norm(u) + norm(v)), std::atan2(u.y, u.x), std::atan2(v.y, v.x), ccw);
}

bool Arc::spans(double angle) const {
  double rel = sweep_ >= 0 ? angle - start_ : start_ - angle;
  rel = std::fmod(rel, kTwoPi);
  if (rel < 0) rel += kTwoPi;
  if (rel > kTwoPi - 1e-12) rel = 0.0;
  return rel <= std::fabs(sweep_) + 1e-12;
}

double Arc::param_of(double angle) const {
  if (sweep_ == 0.0) return 0.0;
  double rel = sweep_ >= 0 ? angle - start_ : start_ - angle;
  rel = std::fmod(rel, kTwoPi);
  if (rel < 0) rel += kTwoPi;
  if (rel > kTwoPi - 1e-12) rel = 0.0;
  return clamp01(rel / std::fabs(sweep_));
}

// --- Primitive helpers ---------------------------------------------------------

Point2 prim_at(const Primitive& p, double t) {
  return std::visit([t](const auto& x) { return x.at(t); }, p);
}
Point2 prim_start(const Primitive& p) { return prim_at(p, 0.0); }
Point2 prim_end(const Primitive& p) { return prim_at(p, 1.0); }
double prim_length(const Primitive& p) {
  return std::visit([](const auto& x) { return x.length(); }, p);
}

Primitive prim_reversed(const Primitive& p) {
  return std::visit(overloaded{
                        [](const Segment& s) -> Primitive { return Segment{s.b, s.a}; },
                        [](const Arc& a) -> Primitive {
                          return Arc(a.center(), a.radius(), a.end_angle(), -a.sweep());
                        },
                    },
                    p);
}

Primitive prim_sub(const Primitive& p, double t0, double t1) {
  return std::visit(overloaded{
                        [&](const Segment& s) -> Primitive { return Segment{s.at(t0), s.at(t1)}; },
                        [&](const Arc& a) -> Primitive {
                          return Arc(a.center(), a.radius(), a.start_angle() + a.sweep() * t0,
                                     a.sweep() * (t1 - t0));
                        },
                    },
                    p);
}

double point_prim_distance(Point2 q, const Primitive& p) {
  return std::visit(overloaded{
                        [&](const Segment& s) { return point_segment_distance(q, s); },
                        [&](const Arc& a) { return point_arc_distance(q, a); },
                    },
                    p);
}

double prim_prim_distance(const Primitive& p, const Primitive& q) {
  return std::visit(
      overloaded{
          [](const Segment& a, const Segment& b) {
            if (!intersect_seg_seg(a, b).empty()) return 0.0;
            return std::min({point_segment_distance(a.a, b), point_segment_distance(a.b, b),
                             point_segment_distance(b.a, a), point_segment_distance(b.b, a)});
          },
          [](const Segment& a, const Arc& b) { return seg_arc_distance(a, b); },
          [](const Arc& a, const Segment& b) { return seg_arc_distance(b, a); },
          [](const Arc& a, const Arc& b) { return arc_arc_distance(a, b); },
      },
      p, q);
}

double prim_winding_angle(const Primitive& p, Point2 q) {
  Point2 a = prim_start(p) - q;
  Point2 b = prim_end(p) - q;
  double chord = (norm(a) == 0.0 || norm(b) == 0.0) ? 0.0 : std::atan2(cross(a, b), dot(a, b));
  if (const Arc* arc = std::get_if<Arc>(&p)) {
    if (arc->sweep() == 0.0 || arc->radius() == 0.0) return chord;
    // The arc and its chord bound a circular segment; inside it the arc
    // winds one extra full turn relative to the chord.
    Point2 s = arc->start(), e = arc->end(), m = arc->at(0.5);
    if (dist(q, arc->center()) < arc->radius()) {
      double side_m = cross(e - s, m - s);
      double side_q = cross(e - s, q - s);
      if (side_m * side_q > 0.0) chord += arc->sweep() > 0 ? kTwoPi : -kTwoPi;
    }
  }
  return chord;
}

// --- Similarity ----------------------------------------------------------------

Similarity Similarity::frame(Point2 from, Point2 to, double local_length) {
  Similarity s;
  Point2 d = to - from;
  double len = norm(d);
  if (local_length <= 0.0) throw GeometryError("frame needs a positive local length");
  s.scale = len / local_length;
  if (len > 0) {
    s.cos_a = d.x / len;
    s.sin_a = d.y / len;
  }
  s.translation = from;
  return s;
}

Point2 Similarity::apply_vector(Point2 v) const {
  return Point2{cos_a * v.x - sin_a * v.y, sin_a * v.x + cos_a * v.y} * scale;
}

Point2 Similarity::apply(Point2 p) const { return translation + apply_vector(p); }

Similarity Similarity::inverse() const {
  Similarity inv;
  inv.cos_a = cos_a;
  inv.sin_a = -sin_a;
  inv.scale = 1.0 / scale;
  inv.translation = Point2{};
  inv.translation = -inv.apply_vector(translation);
  return inv;
}

Primitive transformed(const Primitive& p, const Similarity& s) {
  return std::visit(overloaded{
                        [&](const Segment& seg) -> Primitive {
                          return Segment{s.apply(seg.a), s.apply(seg.b)};
                        },
                        [&](const Arc& a) -> Primitive {
                          return Arc(s.apply(a.center()), a.radius() * s.scale,
                                     a.start_angle() + s.angle(), a.sweep());
                        },
                    },
                    p);
}

Primitive mirrored_x(const Primitive& p) {
  return std::visit(overloaded{
                        [](const Segment& seg) -> Primitive {
                          return Segment{{seg.a.x, -seg.a.y}, {seg.b.x, -seg.b.y}};
                        },
                        [](const Arc& a) -> Primitive {
                          return Arc({a.center().x, -a.center().y}, a.radius(), -a.start_angle(),
                                     -a.sweep());
                        },
                    },
                    p);
}

// --- ArcPath -------------------------------------------------------------------

ArcPath::ArcPath(std::vector<Primitive> prims) : prims_(std::move(prims)) {}

ArcPath ArcPath::polyline(const std::vector<Point2>& pts) {
  std::vector<Primitive> prims;
  for (size_t i = 0; i + 1 < pts.size(); ++i) prims.emplace_back(Segment{pts[i], pts[i + 1]});
  return ArcPath(std::move(prims));
}

double ArcPath::length() const {
  double total = 0.0;
  for (const auto& p : prims_) total += prim_length(p);
  return total;
}

Point2 ArcPath::start() const {
  if (prims_.empty()) throw GeometryError("empty path has no start");
  return prim_start(prims_.front());
}

Point2 ArcPath::end() const {
  if (prims_.empty()) throw GeometryError("empty path has no end");
  return prim_end(prims_.back());
}

std::vector<double> ArcPath::offsets() const {
  std::vector<double> out;
  double acc = 0.0;
  for (const auto& p : prims_) {
    out.push_back(acc);
    acc += prim_length(p);
  }
  return out;
}

Point2 ArcPath::point_at_arclength(double s) const {
  double total = length();
  if (prims_.empty() || !(s >= -1e-12) || s > total + 1e-12)
    throw GeometryError("arclength " + std::to_string(s) + " outside [0, " + std::to_string(total) + "]");
  double acc = 0.0;
  for (const auto& p : prims_) {
    double len = prim_length(p);
    if (s <= acc + len || &p == &prims_.back()) {
      double t = len > 0 ? clamp01((s - acc) / len) : 0.0;
      return prim_at(p, t);
    }
    acc += len;
  }
  return end();
}

double ArcPath::distance_to(Point2 q) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : prims_) best = std::min(best, point_prim_distance(q, p));
  return best;
}

ArcPath ArcPath::reversed() const {
  std::vector<Primitive> out;
  for (auto it = prims_.rbegin(); it != prims_.rend(); ++it) out.push_back(prim_reversed(*it));
  return ArcPath(std::move(out));
}

ArcPath ArcPath::transformed(const Similarity& s) const {
  std::vector<Primitive> out;
  for (const auto& p : prims_) out.push_back(adorn::transformed(p, s));
  return ArcPath(std::move(out));
}

ArcPath ArcPath::mirrored_x() const {
  std::vector<Primitive> out;
  for (const auto& p : prims_) out.push_back(adorn::mirrored_x(p));
  return ArcPath(std::move(out));
}

void ArcPath::check_continuity(double eps) const {
  for (size_t i = 0; i + 1 < prims_.size(); ++i) {
    double gap = dist(prim_end(prims_[i]), prim_start(prims_[i + 1]));
    if (gap > eps)
      throw GeometryError("path primitives " + std::to_string(i) + " and " + std::to_string(i + 1) +
                          " are disconnected (gap " + std::to_string(gap) + ")");
  }
}

// --- BoundingBox -------------------------------------------------------------

void BoundingBox::add(Point2 p) {
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
}

void BoundingBox::add(const Primitive& p) {
  add(prim_start(p));
  add(prim_end(p));
  if (const Arc* a = std::get_if<Arc>(&p)) {
    for (int k = 0; k < 4; ++k) {
      double ang = k * kPi / 2;
      if (a->spans(ang)) add(a->at_angle(ang));
    }
  }
}

double BoundingBox::gap(const BoundingBox& o) const {
  double dx = std::max({0.0, o.lo.x - hi.x, lo.x - o.hi.x});
  double dy = std::max({0.0, o.lo.y - hi.y, lo.y - o.hi.y});
  return std::hypot(dx, dy);
}

// --- Region --------------------------------------------------------------------

Region::Region(std::vector<Primitive> boundary) : boundary_(std::move(boundary)) {
  for (const auto& p : boundary_) bbox_.add(p);
}

Region Region::disk(Point2 center, double radius) {
  return Region({Arc(center, radius, 0.0, kPi), Arc(center, radius, kPi, kPi)});
}

Region Region::polygon(const std::vector<Point2>& pts) {
  std::vector<Primitive> prims;
  for (size_t i = 0; i < pts.size(); ++i) prims.emplace_back(Segment{pts[i], pts[(i + 1) % pts.size()]});
  return Region(std::move(prims));
}

Region Region::from_sides(const ArcPath& first, const ArcPath& second) {
  std::vector<Primitive> prims = first.primitives();
  ArcPath back = second.reversed();
  for (const auto& p : back.primitives()) prims.push_back(p);
  return Region(std::move(prims));
}

int Region::winding(Point2 q) const {
  if (boundary_.empty()) return 0;
  if (q.x < bbox_.lo.x || q.x > bbox_.hi.x || q.y < bbox_.lo.y || q.y > bbox_.hi.y) return 0;
  double total = 0.0;
  for (const auto& p : boundary_) total += prim_winding_angle(p, q);
  return static_cast<int>(std::lround(total / kTwoPi));
}

double Region::distance_to_boundary(Point2 q) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : boundary_) best = std::min(best, point_prim_distance(q, p));
  return best;
}

bool Region::interior(Point2 q, double eps) const {
  return winding(q) != 0 && distance_to_boundary(q) > eps;
}

double Region::outside_distance(Point2 q) const {
  return winding(q) != 0 ? 0.0 : distance_to_boundary(q);
}

double Region::signed_area() const {
  double twice = 0.0;
  for (const auto& p : boundary_) {
    if (const Segment* s = std::get_if<Segment>(&p)) {
      twice += cross(s->a, s->b);
    } else {
      const Arc& a = std::get<Arc>(p);
      double r = a.radius();
      double p0 = a.start_angle(), p1 = a.end_angle();
      Point2 c = a.center();
      twice += r * r * a.sweep() + r * (c.x * (std::sin(p1) - std::sin(p0)) - c.y * (std::cos(p1) - std::cos(p0)));
    }
  }
  return 0.5 * twice;
}

double Region::perimeter() const {
  double total = 0.0;
  for (const auto& p : boundary_) total += prim_length(p);
  return total;
}

Region Region::transformed(const Similarity& s) const {
  std::vector<Primitive> out;
  for (const auto& p : boundary_) out.push_back(adorn::transformed(p, s));
  return Region(std::move(out));
}

double penetration_depth(const Region& a, const Region& b) {
  if (a.boundary().empty() || b.boundary().empty()) return 0.0;
  if (a.bbox().gap(b.bbox()) > 0.0) return 0.0;
  return max_over_boundary(a, b, [&b](Point2 p) {
    return b.winding(p) != 0 ? b.distance_to_boundary(p) : 0.0;
  });
}

double separation(const Region& a, const Region& b) {
  double pen = std::max(penetration_depth(a, b), penetration_depth(b, a));
  if (pen > 0.0) return -pen;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : a.boundary())
    for (const auto& q : b.boundary()) best = std::min(best, prim_prim_distance(p, q));
  return best;
}

double separation_bounded(const Region& a, const Region& b, double cutoff) {
  double gap = a.bbox().gap(b.bbox());
  if (gap > cutoff) return gap;
  return separation(a, b);
}

bool region_contains(const Region& outer, const Region& inner, double tol) {
  double worst = max_over_boundary(inner, outer, [&outer](Point2 p) { return outer.outside_distance(p); });
  return worst <= tol;
}

}  // namespace adorn
