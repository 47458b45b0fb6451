#include "adorn/adornment.hpp"

#include <algorithm>

namespace adorn {

namespace {

ArcPath base_path(const Segment& s) { return ArcPath::polyline({s.a, s.b}); }

// Critical parameters of t -> |prim(t) - q| on a primitive.
void critical_params(const Primitive& p, Point2 q, std::vector<double>& out) {
  if (const Segment* s = std::get_if<Segment>(&p)) {
    Point2 d = s->b - s->a;
    double len2 = dot(d, d);
    if (len2 > 0) {
      double t = dot(q - s->a, d) / len2;
      if (t > 0 && t < 1) out.push_back(t);
    }
    return;
  }
  const Arc& a = std::get<Arc>(p);
  Point2 rel = q - a.center();
  if (norm(rel) == 0.0) return;
  double psi = std::atan2(rel.y, rel.x);
  for (double ang : {psi, psi + kPi})
    if (a.spans(ang)) out.push_back(a.param_of(ang));
}

struct SideCheck {
  std::optional<std::pair<double, double>> witness;
};

SideCheck check_side(const ArcPath& side, Point2 x, Point2 y, int n_samples, double eps) {
  SideCheck out;
  double max_dx = -1.0, max_dx_s = 0.0;
  double min_dy = 1e300, min_dy_s = 0.0;
  auto offsets = side.offsets();
  for (size_t i = 0; i < side.primitives().size(); ++i) {
    const Primitive& p = side.primitives()[i];
    double len = prim_length(p);
    std::vector<double> ts;
    int n = std::max(2, n_samples);
    for (int k = 0; k <= n; ++k) ts.push_back(static_cast<double>(k) / n);
    critical_params(p, x, ts);
    critical_params(p, y, ts);
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
      Point2 q = prim_at(p, t);
      double s = offsets[i] + t * len;
      double dx = dist(q, x), dy = dist(q, y);
      if (dx < max_dx - eps) {
        out.witness = std::make_pair(max_dx_s, s);
        return out;
      }
      if (dy > min_dy + eps) {
        out.witness = std::make_pair(min_dy_s, s);
        return out;
      }
      if (dx > max_dx) { max_dx = dx; max_dx_s = s; }
      if (dy < min_dy) { min_dy = dy; min_dy_s = s; }
    }
  }
  return out;
}

// --- Envelope of slender upper sides in the frame x = (0,0), y = (d,0) -------
//
// A point w above the base is determined by u = |w-x| - |w-y| and
// s = |w-x| + |w-y|. A slender side is a graph s = S(u) over [-d, d], and the
// region it bounds with the base is {s <= S(u)}. Unions are pointwise maxima.

struct SideGraph {
  double d;
  std::vector<Primitive> prims;
  std::vector<double> u0, u1;

  double u_of(Point2 p) const { return norm(p) - dist(p, {d, 0}); }
  double s_of(Point2 p) const { return norm(p) + dist(p, {d, 0}); }

  SideGraph(const ArcPath& side, double d_) : d(d_) {
    for (const auto& p : side.primitives()) {
      double a = u_of(prim_start(p)), b = u_of(prim_end(p));
      if (b - a <= 1e-15) continue;
      prims.push_back(p);
      u0.push_back(a);
      u1.push_back(b);
    }
  }

  int locate(double u) const {
    for (size_t i = 0; i < prims.size(); ++i)
      if (u >= u0[i] - 1e-15 && u <= u1[i] + 1e-15) return static_cast<int>(i);
    return -1;
  }

  double param(int i, double u) const {
    double lo = 0.0, hi = 1.0;
    if (u <= u0[i]) return 0.0;
    if (u >= u1[i]) return 1.0;
    for (int it = 0; it < 64; ++it) {
      double mid = 0.5 * (lo + hi);
      if (u_of(prim_at(prims[i], mid)) < u) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  double S(int i, double u) const { return s_of(prim_at(prims[i], param(i, u))); }
};

struct Piece {
  int side;
  int prim;
  double t0, t1;
};

ArcPath envelope(const ArcPath& A, const ArcPath& B, double d) {
  SideGraph ga(A, d), gb(B, d);
  if (ga.prims.empty()) return B;
  if (gb.prims.empty()) return A;
  const SideGraph* g[2] = {&ga, &gb};

  std::vector<double> br = {-d, d};
  for (const SideGraph* gr : g)
    for (size_t i = 0; i < gr->prims.size(); ++i) {
      br.push_back(std::clamp(gr->u0[i], -d, d));
      br.push_back(std::clamp(gr->u1[i], -d, d));
    }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return b - a < 1e-13; }), br.end());

  std::vector<Piece> pieces;
  auto emit = [&](int side, int prim, double ul, double ur) {
    double t0 = g[side]->param(prim, ul), t1 = g[side]->param(prim, ur);
    if (!pieces.empty() && pieces.back().side == side && pieces.back().prim == prim &&
        std::fabs(pieces.back().t1 - t0) < 1e-12) {
      pieces.back().t1 = t1;
      return;
    }
    pieces.push_back({side, prim, t0, t1});
  };

  for (size_t k = 0; k + 1 < br.size(); ++k) {
    double ul = br[k], ur = br[k + 1];
    double um = 0.5 * (ul + ur);
    int ia = ga.locate(um), ib = gb.locate(um);
    if (ia < 0 && ib < 0) continue;
    if (ia < 0) { emit(1, ib, ul, ur); continue; }
    if (ib < 0) { emit(0, ia, ul, ur); continue; }
    auto f = [&](double u) { return ga.S(ia, u) - gb.S(ib, u); };
    const int m = 16;
    std::vector<double> cuts = {ul};
    // Bisect between consecutive samples of opposite sign, skipping samples
    // where f vanishes to rounding.
    double prev_u = ul, prev_f = f(ul);
    for (int j = 1; j <= m; ++j) {
      double u = ul + (ur - ul) * j / m;
      double fu = f(u);
      if (std::fabs(fu) <= 1e-13) continue;
      if (std::fabs(prev_f) > 1e-13 && (prev_f > 0) != (fu > 0)) {
        double lo = prev_u, hi = u, flo = prev_f;
        for (int it = 0; it < 64; ++it) {
          double mid = 0.5 * (lo + hi);
          double fm = f(mid);
          if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
          else hi = mid;
        }
        cuts.push_back(0.5 * (lo + hi));
      }
      prev_u = u;
      prev_f = fu;
    }
    cuts.push_back(ur);
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      double a = cuts[c], b = cuts[c + 1];
      if (b - a <= 0) continue;
      if (f(0.5 * (a + b)) >= -1e-13) emit(0, ia, a, b);
      else emit(1, ib, a, b);
    }
  }

  std::vector<Primitive> out;
  for (const Piece& p : pieces) {
    Primitive q = prim_sub(g[p.side]->prims[p.prim], p.t0, p.t1);
    // Near the base s = S(u) is steep in height, so switching sides where the
    // graphs agree to rounding can leave a tiny step; bridge it.
    if (!out.empty() && dist(prim_end(out.back()), prim_start(q)) > 1e-13)
      out.emplace_back(Segment{prim_end(out.back()), prim_start(q)});
    out.push_back(q);
  }
  return ArcPath(std::move(out));
}

ArcPath local_lens_side(double d, double rx, double ry) {
  rx = std::min(rx, d);
  ry = std::min(ry, d);
  Point2 x{0, 0}, y{d, 0};
  if (rx + ry <= d * (1 + 1e-15) || rx == 0.0 || ry == 0.0) return ArcPath::polyline({x, y});
  double wx = (rx * rx - ry * ry + d * d) / (2 * d);
  double wy2 = rx * rx - wx * wx;
  if (wy2 <= 0.0) return ArcPath::polyline({x, y});
  double wy = std::sqrt(wy2);
  std::vector<Primitive> prims;
  if (d - ry > 0) prims.emplace_back(Segment{x, {d - ry, 0}});
  double ang_y = std::atan2(wy, wx - d);
  prims.emplace_back(Arc(y, ry, kPi, ang_y - kPi));
  double ang_x = std::atan2(wy, wx);
  prims.emplace_back(Arc(x, rx, ang_x, -ang_x));
  if (rx < d) prims.emplace_back(Segment{{rx, 0}, y});
  return ArcPath(std::move(prims));
}

}  // namespace

// --- Adornment -----------------------------------------------------------------

Adornment Adornment::bare(Point2 x, Point2 y) { return Adornment{Segment{x, y}, {}, {}}; }

Adornment Adornment::polygon_side(Point2 x, Point2 y, const std::vector<Point2>& pts, bool upper_side) {
  std::vector<Point2> all = {x};
  all.insert(all.end(), pts.begin(), pts.end());
  all.push_back(y);
  Adornment a = bare(x, y);
  (upper_side ? a.upper : a.lower) = ArcPath::polyline(all);
  return a;
}

ArcPath Adornment::upper_side() const { return upper.empty() ? base_path(base) : upper; }
ArcPath Adornment::lower_side() const { return lower.empty() ? base_path(base) : lower; }

Region Adornment::region() const { return Region::from_sides(lower_side(), upper_side()); }

Adornment Adornment::transformed(const Similarity& s) const {
  return Adornment{Segment{s.apply(base.a), s.apply(base.b)}, upper.transformed(s), lower.transformed(s)};
}

Similarity base_frame(const Segment& base) {
  double len = base.length();
  if (len == 0.0) throw GeometryError("degenerate base");
  return Similarity::frame(base.a, base.b, len);
}

Adornment Adornment::to_local() const { return transformed(base_frame(base).inverse()); }

void Adornment::validate(const Tolerance& tol) const {
  if (base.length() <= tol.eps_geom) throw GeometryError("adornment base has zero length");
  auto check = [&](const ArcPath& side, const char* name) {
    if (side.empty()) return;
    side.check_continuity(tol.eps_geom);
    if (dist(side.start(), base.a) > tol.eps_geom || dist(side.end(), base.b) > tol.eps_geom)
      throw GeometryError(std::string(name) + " side does not run from base start to base end");
  };
  check(upper, "upper");
  check(lower, "lower");
  if (region().signed_area() < -tol.eps_overlap)
    throw GeometryError("upper side must lie left of the base direction");
}

// --- Slenderness ---------------------------------------------------------------

SlenderVerdict is_slender(const Adornment& a, int n_samples, const Tolerance& tol) {
  a.validate(tol);
  SlenderVerdict v;
  v.is_symmetric = is_symmetric(a, tol.eps_overlap);
  for (bool upper : {true, false}) {
    const ArcPath& side = upper ? a.upper : a.lower;
    if (side.empty()) continue;
    SideCheck c = check_side(side, a.x(), a.y(), n_samples, tol.eps_geom);
    if (c.witness) {
      v.is_slender = false;
      v.witness = c.witness;
      v.witness_upper = upper;
      return v;
    }
  }
  return v;
}

bool witness_violates(const ArcPath& side, Point2 x, Point2 y, std::pair<double, double> w, double eps) {
  if (!(w.first < w.second)) return false;
  Point2 p = side.point_at_arclength(w.first), q = side.point_at_arclength(w.second);
  return dist(q, x) < dist(p, x) - eps || dist(q, y) > dist(p, y) + eps;
}

bool is_symmetric(const Adornment& a, double tol) {
  if (a.is_bare()) return true;
  Adornment l = a.to_local();
  ArcPath up = l.upper_side(), lo = l.lower_side().mirrored_x();
  auto covered = [tol](const ArcPath& from, const ArcPath& to) {
    for (const auto& p : from.primitives())
      for (int k = 0; k <= 32; ++k)
        if (to.distance_to(prim_at(p, k / 32.0)) > tol) return false;
    return true;
  };
  return covered(up, lo) && covered(lo, up);
}

// --- Lenses --------------------------------------------------------------------

ArcPath Lens::upper_side() const {
  Segment base{x, y};
  return local_lens_side(base.length(), rx(), ry()).transformed(base_frame(base));
}

ArcPath Lens::lower_side() const {
  Segment base{x, y};
  return local_lens_side(base.length(), rx(), ry()).mirrored_x().transformed(base_frame(base));
}

Region Lens::region() const { return Region::from_sides(lower_side(), upper_side()); }

Adornment Lens::as_adornment() const { return Adornment{Segment{x, y}, upper_side(), lower_side()}; }

Region HalfLens::region() const { return as_adornment().region(); }

Adornment HalfLens::as_adornment() const {
  Adornment a = Adornment::bare(lens.x, lens.y);
  if (upper) a.upper = lens.upper_side();
  else a.lower = lens.lower_side();
  return a;
}

Lens lens_of(Point2 x, Point2 y, Point2 z, const Tolerance& tol) {
  double d = dist(x, y);
  if (d <= tol.eps_geom) throw GeometryError("lens needs distinct base endpoints");
  if (dist(z, x) > d + tol.eps_geom || dist(z, y) > d + tol.eps_geom)
    throw GeometryError("lens point must be within base length of both endpoints");
  return Lens{x, y, z};
}

Lens max_slender(Point2 x, Point2 y) {
  if (x == y) throw GeometryError("max_slender needs a nondegenerate base");
  Point2 v = y - x;
  double c = 0.5, s = std::sqrt(3.0) / 2;
  return Lens{x, y, x + Point2{c * v.x - s * v.y, s * v.x + c * v.y}};
}

CoveringLens covering_lens(const Adornment& a, Point2 z, const Tolerance& tol) {
  SlenderVerdict v = is_slender(a, 16, tol);
  if (!v.is_slender) throw GeometryError("covering lens needs a slender adornment");
  Region r = a.region();
  if (!r.interior(z, tol.eps_geom)) throw GeometryError("point is not interior to the adornment");
  double to_boundary = r.distance_to_boundary(z);
  double delta = std::min(tol.eps_overlap, to_boundary / 2);
  Point2 n = unit(perp(a.y() - a.x()));
  bool upper = cross(a.y() - a.x(), z - a.x()) >= 0;
  if (!upper) n = -n;
  Point2 zs = z + n * delta;
  CoveringLens out{HalfLens{lens_of(a.x(), a.y(), zs, tol), upper}, zs, delta};
  if (!region_contains(r, out.half.region(), tol.eps_overlap))
    throw GeometryError("covering lens is not contained in the adornment");
  return out;
}

Adornment union_of_lenses(Point2 x, Point2 y, const std::vector<Point2>& zs, const Tolerance& tol) {
  if (zs.empty()) throw GeometryError("union of lenses needs at least one point");
  Segment base{x, y};
  double d = base.length();
  Similarity frame = base_frame(base);
  ArcPath env;
  for (Point2 z : zs) {
    Lens L = lens_of(x, y, z, tol);
    ArcPath side = local_lens_side(d, L.rx(), L.ry());
    env = env.empty() ? side : envelope(env, side, d);
  }
  return Adornment{base, env.transformed(frame), env.mirrored_x().transformed(frame)};
}

Adornment slender_union(const Adornment& a, const Adornment& b, const Tolerance& tol) {
  if (dist(a.x(), b.x()) > tol.eps_overlap || dist(a.y(), b.y()) > tol.eps_overlap)
    throw GeometryError("slender union needs adornments on the same base");
  if (!is_slender(a, 16, tol).is_slender || !is_slender(b, 16, tol).is_slender)
    throw GeometryError("slender union needs slender adornments");
  Similarity frame = base_frame(a.base);
  Similarity inv = frame.inverse();
  Adornment la = a.transformed(inv), lb = b.transformed(inv);
  double d = a.base.length();
  ArcPath up = envelope(la.upper_side(), lb.upper_side(), d);
  ArcPath lo = envelope(la.lower_side().mirrored_x(), lb.lower_side().mirrored_x(), d).mirrored_x();
  return Adornment{a.base, up.transformed(frame), lo.transformed(frame)};
}

Adornment isosceles_adornment(Point2 x, Point2 y, double apex_angle, bool upper_side) {
  double d = dist(x, y);
  double h = (d / 2) / std::tan(apex_angle / 2);
  Point2 n = unit(perp(y - x));
  Point2 apex = (x + y) * 0.5 + (upper_side ? n : -n) * h;
  return Adornment::polygon_side(x, y, {apex}, upper_side);
}

}  // namespace adorn
