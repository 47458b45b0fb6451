#include "adorn/area.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace adorn {

void Flower::check() const {
  if (disks.empty() || disks.size() % 2 != 0) throw GeometryError("a flower needs a positive even number of disks");
  for (const Disk& d : disks)
    if (!is_finite(d.center) || !(d.radius >= 0)) throw GeometryError("flower disk with invalid center or radius");
}

bool Flower::contains(Point2 p) const {
  for (size_t k = 0; k + 1 < disks.size(); k += 2)
    if (disks[k].contains(p) && disks[k + 1].contains(p)) return true;
  return false;
}

double disk_intersection_area(const Disk& a, const Disk& b) {
  double d = dist(a.center, b.center);
  double r1 = a.radius, r2 = b.radius;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::fabs(r1 - r2)) {
    double r = std::min(r1, r2);
    return M_PI * r * r;
  }
  // Two circular segments cut by the common chord.
  double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1.0, 1.0));
  double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1.0, 1.0));
  return r1 * r1 * (a1 - 0.5 * std::sin(2 * a1)) + r2 * r2 * (a2 - 0.5 * std::sin(2 * a2));
}

AreaEstimate lens_area(const Lens& lens) {
  return {disk_intersection_area(Disk{lens.x, lens.rx()}, Disk{lens.y, lens.ry()}), 0.0};
}

AreaEstimate mc_area(const std::function<bool(Point2)>& inside, const BoundingBox& box, const McOptions& opts) {
  if (opts.grid < 1) throw GeometryError("Monte Carlo grid must be positive");
  if (box.empty() || box.area() == 0.0) return {0.0, 0.0};
  const int G = opts.grid;
  const double wx = box.width() / G, wy = box.height() / G, cell = wx * wy;
  double total = 0.0, var = 0.0;
  for (int row = 0; row < G; ++row) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(row)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double row_total = 0.0, row_var = 0.0;
    for (int col = 0; col < G; ++col) {
      int hits = 0;
      for (int s = 0; s < 2; ++s) {
        Point2 p{box.lo.x + (col + U(rng)) * wx, box.lo.y + (row + U(rng)) * wy};
        hits += inside(p);
      }
      row_total += 0.5 * hits * cell;
      // Sample variance of the two indicators is 1/2 when they differ.
      if (hits == 1) row_var += cell * cell * 0.5 / 2.0;
    }
    total += row_total;
    var += row_var;
  }
  return {total, 1.96 * std::sqrt(var)};
}

namespace {

bool petal_empty(const Disk& a, const Disk& b) { return dist(a.center, b.center) > a.radius + b.radius; }

BoundingBox petal_box(const Disk& a, const Disk& b) {
  BoundingBox box;
  box.lo = {std::max(a.center.x - a.radius, b.center.x - b.radius), std::max(a.center.y - a.radius, b.center.y - b.radius)};
  box.hi = {std::min(a.center.x + a.radius, b.center.x + b.radius), std::min(a.center.y + a.radius, b.center.y + b.radius)};
  return box;
}

// Farthest distance from q to a point of the petal a∩b (assumed nonempty).
double petal_reach(const Disk& a, const Disk& b, Point2 q) {
  double best = 0.0;
  auto far_on = [&](const Disk& on, const Disk& other) {
    Point2 dir = on.center == q ? Point2{1, 0} : unit(on.center - q);
    Point2 p = on.center + dir * on.radius;
    if (other.contains(p, 1e-12)) best = std::max(best, dist(p, q));
  };
  far_on(a, b);
  far_on(b, a);
  double d = dist(a.center, b.center);
  if (d > 0 && d <= a.radius + b.radius && d >= std::fabs(a.radius - b.radius)) {
    double t = (a.radius * a.radius - b.radius * b.radius + d * d) / (2 * d);
    double h = std::sqrt(std::max(0.0, a.radius * a.radius - t * t));
    Point2 ex = (b.center - a.center) / d;
    Point2 m = a.center + ex * t;
    best = std::max({best, dist(m + perp(ex) * h, q), dist(m - perp(ex) * h, q)});
  }
  return best;
}

bool petal_inside(const Disk& a, const Disk& b, const Disk& c, const Disk& d) {
  return petal_reach(a, b, c.center) <= c.radius + 1e-12 && petal_reach(a, b, d.center) <= d.radius + 1e-12;
}

// Petal-to-cell index for fast membership.
struct PetalGrid {
  BoundingBox box;
  int cells = 1;
  std::vector<std::vector<int>> lists;
  const Flower* f = nullptr;

  PetalGrid(const Flower& flower, const std::vector<int>& petals, int n) : cells(n), f(&flower) {
    for (int k : petals) {
      BoundingBox b = petal_box(flower.disks[2 * k], flower.disks[2 * k + 1]);
      box.add(b.lo);
      box.add(b.hi);
    }
    lists.assign(cells * cells, {});
    for (int k : petals) {
      BoundingBox b = petal_box(flower.disks[2 * k], flower.disks[2 * k + 1]);
      auto [i0, j0] = index(b.lo);
      auto [i1, j1] = index(b.hi);
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) lists[i * cells + j].push_back(k);
    }
  }
  std::pair<int, int> index(Point2 p) const {
    auto clampi = [&](double t) { return std::clamp(static_cast<int>(std::floor(t * cells)), 0, cells - 1); };
    double w = std::max(box.width(), 1e-300), h = std::max(box.height(), 1e-300);
    return {clampi((p.x - box.lo.x) / w), clampi((p.y - box.lo.y) / h)};
  }
  bool contains(Point2 p) const {
    auto [i, j] = index(p);
    for (int k : lists[i * cells + j])
      if (f->disks[2 * k].contains(p) && f->disks[2 * k + 1].contains(p)) return true;
    return false;
  }
};

}  // namespace

AreaEstimate flower_area(const Flower& f, const McOptions& opts) {
  f.check();
  std::vector<int> petals;
  for (size_t k = 0; k < f.n_petals(); ++k)
    if (!petal_empty(f.disks[2 * k], f.disks[2 * k + 1])) petals.push_back(static_cast<int>(k));
  if (petals.empty()) return {0.0, 0.0};
  auto area_of = [&](int k) { return disk_intersection_area(f.disks[2 * k], f.disks[2 * k + 1]); };
  if (petals.size() == 1) return {area_of(petals[0]), 0.0};
  if (petals.size() == 2) {
    const Disk &a = f.disks[2 * petals[0]], &b = f.disks[2 * petals[0] + 1];
    const Disk &c = f.disks[2 * petals[1]], &d = f.disks[2 * petals[1] + 1];
    if (!disks_intersect({a, b, c, d}, 0.0)) return {area_of(petals[0]) + area_of(petals[1]), 0.0};
    if (petal_inside(a, b, c, d)) return {area_of(petals[1]), 0.0};
    if (petal_inside(c, d, a, b)) return {area_of(petals[0]), 0.0};
  }
  int cells = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(petals.size()))) * 2, 4, 96);
  PetalGrid grid(f, petals, cells);
  return mc_area([&](Point2 p) { return grid.contains(p); }, grid.box, opts);
}

namespace {

// Angular intervals on one circle, as offsets in [0, 2pi) from a fixed start angle.
using Spans = std::vector<std::pair<double, double>>;

struct CircleCut {
  bool full = false, empty = false;
  double mid = 0, half = 0;
};

// Height of the triangle with sides r, R over base d, by Kahan's stable Heron formula.
double triangle_height(double d, double r, double R) {
  double x[3] = {d, r, R};
  std::sort(x, x + 3, std::greater<>());
  double a = x[0], b = x[1], c = x[2];
  double q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return 0.5 * std::sqrt(std::max(0.0, q)) / d;
}

// The part of circle `on` lying inside disk `d`.
CircleCut circle_in_disk(const Disk& on, const Disk& d) {
  CircleCut c;
  double r = on.radius, R = d.radius, dd = dist(on.center, d.center);
  if (dd + r <= R) {
    c.full = true;
  } else if (dd >= r + R || dd + R <= r) {
    c.empty = true;
  } else {
    double t = (r * r + dd * dd - R * R) / (2 * dd);
    c.mid = std::atan2(d.center.y - on.center.y, d.center.x - on.center.x);
    c.half = std::atan2(triangle_height(dd, r, R), t);
  }
  return c;
}

Spans to_spans(const CircleCut& c, double start) {
  if (c.empty) return {};
  if (c.full) return {{0, kTwoPi}};
  double lo = std::fmod(c.mid - c.half - start, kTwoPi);
  if (lo < 0) lo += kTwoPi;
  double hi = lo + 2 * c.half;
  if (hi <= kTwoPi) return {{lo, hi}};
  return {{0, hi - kTwoPi}, {lo, kTwoPi}};
}

Spans intersect(const Spans& a, const Spans& b) {
  Spans out;
  for (auto [a0, a1] : a)
    for (auto [b0, b1] : b) {
      double lo = std::max(a0, b0), hi = std::min(a1, b1);
      if (hi > lo) out.push_back({lo, hi});
    }
  return out;
}

bool same_circle(const Disk& a, const Disk& b) {
  double tol = 1e-12 * std::max(1.0, a.radius);
  return dist(a.center, b.center) <= tol && std::fabs(a.radius - b.radius) <= tol;
}

// Green's theorem term for the ccw arc of `c` between angles t0 and t1.
double arc_term(const Disk& c, double t0, double t1) {
  double r = c.radius;
  return 0.5 * (r * r * (t1 - t0) + r * c.center.x * (std::sin(t1) - std::sin(t0)) -
                r * c.center.y * (std::cos(t1) - std::cos(t0)));
}

}  // namespace

AreaEstimate flower_area_exact(const Flower& f) {
  f.check();
  struct Petal {
    Disk a, b;
    BoundingBox box;
  };
  std::vector<Petal> petals;
  for (size_t k = 0; k < f.n_petals(); ++k) {
    const Disk &a = f.disks[2 * k], &b = f.disks[2 * k + 1];
    if (petal_empty(a, b) || std::min(a.radius, b.radius) <= 0) continue;
    petals.push_back({a, b, petal_box(a, b)});
  }
  std::vector<size_t> order(petals.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return petals[i].box.lo.x < petals[j].box.lo.x; });

  double area = 0;
  for (size_t pi = 0; pi < petals.size(); ++pi) {
    const Petal& p = petals[pi];
    for (int side = 0; side < 2; ++side) {
      const Disk& on = side ? p.b : p.a;
      const Disk& other = side ? p.a : p.b;
      if (side == 1 && same_circle(p.a, p.b)) continue;
      CircleCut own = circle_in_disk(on, other);
      if (own.empty) continue;
      double start = own.full ? 0.0 : own.mid - own.half;
      double width = own.full ? kTwoPi : 2 * own.half;
      Spans covered;
      for (size_t qi : order) {
        const Petal& q = petals[qi];
        if (q.box.lo.x > p.box.hi.x) break;
        if (qi == pi || q.box.hi.x < p.box.lo.x || q.box.hi.y < p.box.lo.y || q.box.lo.y > p.box.hi.y) continue;
        bool sa = same_circle(on, q.a), sb = same_circle(on, q.b);
        // A shared boundary arc counts once, for the lowest-indexed petal.
        if ((sa || sb) && qi > pi) continue;
        Spans s = sa ? to_spans(circle_in_disk(on, q.b), start)
                  : sb ? to_spans(circle_in_disk(on, q.a), start)
                       : intersect(to_spans(circle_in_disk(on, q.a), start), to_spans(circle_in_disk(on, q.b), start));
        for (auto [lo, hi] : s)
          if (lo < width) covered.push_back({lo, std::min(hi, width)});
      }
      std::sort(covered.begin(), covered.end());
      double at = 0;
      for (auto [lo, hi] : covered) {
        if (lo > at) area += arc_term(on, start + at, start + lo);
        at = std::max(at, hi);
      }
      if (at < width) area += arc_term(on, start + at, start + width);
    }
  }
  return {area, 0.0};
}

Flower adornment_flower(const AdornedChain& chain, int edge, const Configuration& c, int per_side) {
  if (per_side < 2) throw GeometryError("need at least two boundary samples per side");
  const Adornment& local = chain.adornments[edge];
  auto [i, j] = chain.edges[edge];
  Flower f;
  for (const ArcPath* side : {&local.upper, &local.lower}) {
    if (side->empty()) continue;
    double len = side->length();
    for (int k = 0; k < per_side; ++k) {
      Point2 z = side->point_at_arclength(len * k / (per_side - 1));
      f.disks.push_back(Disk{c[i], dist(z, local.x())});
      f.disks.push_back(Disk{c[j], dist(z, local.y())});
    }
  }
  return f;
}

Flower chain_flower(const AdornedChain& chain, const Configuration& c, int per_side) {
  Flower f;
  for (size_t e = 0; e < chain.n_edges(); ++e) {
    if (chain.adornments[e].is_bare()) continue;
    Flower part = adornment_flower(chain, static_cast<int>(e), c, per_side);
    f.disks.insert(f.disks.end(), part.disks.begin(), part.disks.end());
  }
  return f;
}

AreaEstimate union_area(const AdornedChain& chain, const Configuration& c, const McOptions& opts) {
  std::vector<Region> regions;
  BoundingBox box;
  for (size_t e = 0; e < chain.n_edges(); ++e) {
    if (chain.adornments[e].is_bare()) continue;
    regions.push_back(chain.region_at(static_cast<int>(e), c));
    box.add(regions.back().bbox().lo);
    box.add(regions.back().bbox().hi);
  }
  if (regions.empty()) return {0.0, 0.0};
  auto inside = [&](Point2 p) {
    for (const Region& r : regions) {
      const BoundingBox& b = r.bbox();
      if (p.x < b.lo.x || p.x > b.hi.x || p.y < b.lo.y || p.y > b.hi.y) continue;
      if (r.contains(p)) return true;
    }
    return false;
  };
  return mc_area(inside, box, opts);
}

MonotonicityReport union_area_monotonicity(const AdornedChain& chain, const Trajectory& t,
                                           const MonotonicityOptions& opts) {
  MonotonicityReport rep;
  if (t.frames.empty()) throw GeometryError("empty trajectory");
  for (size_t e = 0; e < chain.n_edges(); ++e) {
    if (chain.adornments[e].is_bare()) continue;
    SlenderVerdict v = is_slender(chain.adornments[e]);
    if (!v.is_slender || !v.is_symmetric) {
      rep.preconditions_ok = false;
      rep.reason = "adornment of edge " + std::to_string(e) + (v.is_slender ? " is not symmetric" : " is not slender");
      return rep;
    }
  }
  for (size_t k = 0; k + 1 < t.frames.size(); ++k) {
    ExpansionReport ex = is_expansion(t.frames[k], t.frames[k + 1], 1e-7);
    if (!ex.is_expansion) {
      rep.preconditions_ok = false;
      rep.reason = "frames " + std::to_string(k) + " and " + std::to_string(k + 1) + " are not an expansion";
      return rep;
    }
  }

  const int total = static_cast<int>(t.frames.size());
  if (total <= opts.max_frames) {
    for (int k = 0; k < total; ++k) rep.frames.push_back(k);
  } else {
    for (int s = 0; s < opts.max_frames; ++s)
      rep.frames.push_back(static_cast<int>(std::lround(static_cast<double>(s) * (total - 1) / (opts.max_frames - 1))));
  }

  auto area_at = [&](int f, int per_side) {
    Flower fl = chain_flower(chain, t.frames[f], per_side);
    if (!opts.exact) return flower_area(fl, opts.mc);
    AreaEstimate a = flower_area_exact(fl);
    a.half_width = 1e-9 * std::max(1.0, a.value);
    return a;
  };
  // Refine the boundary sampling until the first frame's area settles.
  int k = opts.per_side;
  AreaEstimate cur = area_at(0, k);
  while (k < 512) {
    AreaEstimate fine = area_at(0, 2 * k);
    double tol = opts.exact ? 1e-3 * cur.value : cur.half_width + fine.half_width;
    bool settled = std::fabs(fine.value - cur.value) < tol;
    cur = fine;
    k *= 2;
    if (settled) break;
  }
  rep.per_side = k;

  for (int f : rep.frames) rep.areas.push_back(area_at(f, k));
  for (size_t s = 0; s + 1 < rep.areas.size(); ++s) {
    double dec = rep.areas[s].value - rep.areas[s + 1].value;
    if (dec > rep.worst_decrease) {
      rep.worst_decrease = dec;
      rep.worst_pair = static_cast<int>(s);
    }
    if (dec > rep.areas[s].half_width + rep.areas[s + 1].half_width) rep.monotone = false;
  }
  return rep;
}

}  // namespace adorn
