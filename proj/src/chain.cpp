#include "adorn/chain.hpp"

#include <algorithm>
#include <sstream>

namespace adorn {

AdornedChain AdornedChain::from_positions(const std::vector<Point2>& pts, bool closed) {
  AdornedChain ch;
  ch.n_vertices = static_cast<int>(pts.size());
  ch.closed = closed;
  int n = ch.n_vertices;
  int m = closed ? n : n - 1;
  for (int i = 0; i < m; ++i) {
    int j = (i + 1) % n;
    double len = dist(pts[i], pts[j]);
    ch.edges.emplace_back(i, j);
    ch.rest_lengths.push_back(len);
    ch.adornments.push_back(Adornment::bare({0, 0}, {len, 0}));
  }
  return ch;
}

Similarity AdornedChain::edge_frame(int edge, const Configuration& c) const {
  auto [i, j] = edges[edge];
  return Similarity::frame(c.positions[i], c.positions[j], rest_lengths[edge]);
}

void AdornedChain::attach(int edge, const Adornment& world, const Configuration& c) {
  Similarity inv = edge_frame(edge, c).inverse();
  Adornment local = world.transformed(inv);
  local.base = Segment{{0, 0}, {rest_lengths[edge], 0}};
  adornments[edge] = local;
}

Adornment AdornedChain::adornment_at(int edge, const Configuration& c) const {
  return adornments[edge].transformed(edge_frame(edge, c));
}

Region AdornedChain::region_at(int edge, const Configuration& c) const {
  return adornment_at(edge, c).region();
}

bool AdornedChain::adjacent(int e1, int e2) const {
  auto [a, b] = edges[e1];
  auto [c, d] = edges[e2];
  return a == c || a == d || b == c || b == d;
}

void AdornedChain::check_structure(const Tolerance& tol) const {
  if (edges.size() != rest_lengths.size() || edges.size() != adornments.size())
    throw GeometryError("edge, length and adornment counts differ");
  std::vector<int> degree(n_vertices, 0);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_vertices || j >= n_vertices || i == j)
      throw GeometryError("edge refers to an invalid vertex");
    ++degree[i];
    ++degree[j];
  }
  int expected = closed ? n_vertices : n_vertices - 1;
  if (static_cast<int>(edges.size()) != expected) throw GeometryError("edge count does not match chain type");
  for (int v = 0; v < n_vertices; ++v) {
    int want = closed ? 2 : ((v == 0 || v == n_vertices - 1) ? 1 : 2);
    if (n_vertices == 1) want = 0;
    if (degree[v] != want) throw GeometryError("edges do not form a path or cycle at vertex " + std::to_string(v));
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    if (!(rest_lengths[e] > 0)) throw GeometryError("edge " + std::to_string(e) + " has nonpositive length");
    const Adornment& a = adornments[e];
    if (dist(a.x(), {0, 0}) > tol.eps_geom || dist(a.y(), {rest_lengths[e], 0}) > tol.eps_geom)
      throw GeometryError("adornment base of edge " + std::to_string(e) + " does not match its rest length");
    a.validate(tol);
  }
}

namespace {

bool bases_overlap(const AdornedChain& ch, const Configuration& c, int e1, int e2, double eps) {
  auto [a, b] = ch.edges[e1];
  auto [p, q] = ch.edges[e2];
  Point2 A = c[a], B = c[b], P = c[p], Q = c[q];
  if (ch.adjacent(e1, e2)) {
    // Shared hinge: only folding back onto each other counts.
    int shared = (a == p || a == q) ? a : b;
    Point2 v = c[shared];
    Point2 o1 = c[shared == a ? b : a];
    Point2 o2 = c[(p == shared) ? q : p];
    if (orientation(v, o1, o2, eps) != 0) return false;
    return dot(o1 - v, o2 - v) > 0;
  }
  int d1 = orientation(A, B, P, eps), d2 = orientation(A, B, Q, eps);
  int d3 = orientation(P, Q, A, eps), d4 = orientation(P, Q, B, eps);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (orientation(A, B, P, eps) == 0 && orientation(A, B, Q, eps) == 0) {
    Point2 dir = unit(B - A);
    double len = dist(A, B);
    double s0 = dot(P - A, dir), s1 = dot(Q - A, dir);
    double lo = std::max(0.0, std::min(s0, s1)), hi = std::min(len, std::max(s0, s1));
    return hi - lo > eps;
  }
  return false;
}

}  // namespace

OverlapReport validate(const AdornedChain& chain, const Configuration& c, const Tolerance& tol) {
  if (static_cast<int>(c.size()) != chain.n_vertices)
    throw GeometryError("configuration has " + std::to_string(c.size()) + " positions, chain has " +
                        std::to_string(chain.n_vertices) + " vertices");
  OverlapReport rep;
  for (size_t i = 0; i < c.size(); ++i)
    if (!is_finite(c[i])) throw GeometryError("non-finite position at vertex " + std::to_string(i));

  const int m = static_cast<int>(chain.n_edges());
  for (int e = 0; e < m; ++e) {
    auto [i, j] = chain.edges[e];
    double len = dist(c[i], c[j]);
    if (std::fabs(len - chain.rest_lengths[e]) > tol.eps_geom * std::max(1.0, chain.rest_lengths[e])) {
      std::ostringstream os;
      os.precision(17);
      os << "edge " << e << " length " << len << " differs from rest length " << chain.rest_lengths[e];
      rep.issues.push_back(os.str());
    }
  }
  for (int e1 = 0; e1 < m; ++e1)
    for (int e2 = e1 + 1; e2 < m; ++e2)
      if (bases_overlap(chain, c, e1, e2, tol.eps_geom))
        rep.issues.push_back("bases of edges " + std::to_string(e1) + " and " + std::to_string(e2) + " intersect");

  std::vector<Region> regions;
  for (int e = 0; e < m; ++e) regions.push_back(chain.region_at(e, c));
  for (int e1 = 0; e1 < m; ++e1) {
    for (int e2 = e1 + 1; e2 < m; ++e2) {
      bool adj = chain.adjacent(e1, e2);
      double sep = adj ? separation_bounded(regions[e1], regions[e2], 0.0)
                       : separation_bounded(regions[e1], regions[e2], 2 * tol.eps_overlap);
      if (!adj) rep.min_nonadjacent_separation = std::min(rep.min_nonadjacent_separation, sep);
      if (sep < -tol.eps_overlap) rep.overlaps.push_back({e1, e2, sep});
    }
  }
  rep.clean = rep.issues.empty() && rep.overlaps.empty();
  return rep;
}

double min_nonadjacent_separation(const AdornedChain& chain, const Configuration& c) {
  const int m = static_cast<int>(chain.n_edges());
  std::vector<Region> regions;
  for (int e = 0; e < m; ++e) regions.push_back(chain.region_at(e, c));
  double best = 1e300;
  for (int e1 = 0; e1 < m; ++e1)
    for (int e2 = e1 + 1; e2 < m; ++e2)
      if (!chain.adjacent(e1, e2)) best = std::min(best, separation(regions[e1], regions[e2]));
  return best;
}

bool strictly_simple(const AdornedChain& chain, const Configuration& c, const Tolerance& tol) {
  OverlapReport r = validate(chain, c, tol);
  return r.clean && r.min_nonadjacent_separation > tol.eps_overlap;
}

ExpansionReport is_expansion(const Configuration& from, const Configuration& to, double eps) {
  if (from.size() != to.size()) throw GeometryError("configurations have different vertex counts");
  ExpansionReport rep;
  double worst = 0.0;
  for (size_t i = 0; i < from.size(); ++i) {
    for (size_t j = i + 1; j < from.size(); ++j) {
      double a = dist(from[i], from[j]), b = dist(to[i], to[j]);
      if (b - a < worst) {
        worst = b - a;
        rep.i = static_cast<int>(i);
        rep.j = static_cast<int>(j);
        rep.old_distance = a;
        rep.new_distance = b;
      }
    }
  }
  rep.is_expansion = worst >= -eps;
  return rep;
}

bool disks_intersect(const std::array<Disk, 4>& disks, double eps) {
  std::vector<Point2> cand;
  for (const Disk& d : disks) cand.push_back(d.center);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Point2 c1 = disks[i].center, c2 = disks[j].center;
      double r1 = disks[i].radius, r2 = disks[j].radius;
      double d = dist(c1, c2);
      if (d == 0.0 || d > r1 + r2 + eps || d < std::fabs(r1 - r2) - eps) continue;
      double a = (r1 * r1 - r2 * r2 + d * d) / (2 * d);
      double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
      Point2 ex = (c2 - c1) / d;
      Point2 base = c1 + ex * a;
      cand.push_back(base + perp(ex) * h);
      cand.push_back(base - perp(ex) * h);
    }
  }
  for (Point2 p : cand) {
    bool all = true;
    for (const Disk& d : disks) all = all && d.contains(p, eps);
    if (all) return true;
  }
  return false;
}

KirszbraunResult kirszbraun_preserves_empty(const std::array<Disk, 4>& disks,
                                            const std::array<Point2, 4>& centers_to, double eps) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (dist(centers_to[i], centers_to[j]) < dist(disks[i].center, disks[j].center) - eps)
        throw GeometryError("rearrangement brings centers " + std::to_string(i) + " and " + std::to_string(j) +
                            " closer together");
  std::array<Disk, 4> after = disks;
  for (int i = 0; i < 4; ++i) after[i].center = centers_to[i];
  KirszbraunResult r;
  r.empty_before = !disks_intersect(disks);
  r.empty_after = !disks_intersect(after);
  r.guarantee_holds = !(r.empty_before && !r.empty_after);
  return r;
}

std::string to_string(ExpansionStatus s) {
  switch (s) {
    case ExpansionStatus::clean: return "clean";
    case ExpansionStatus::overlap: return "overlap";
    case ExpansionStatus::precondition_violated: return "precondition_violated";
  }
  return "unknown";
}

SymmetricExpansionReport verify_symmetric_expansion(const AdornedChain& chain, const Configuration& from,
                                                    const Configuration& to, const Tolerance& tol) {
  SymmetricExpansionReport rep;
  std::vector<std::string> why;
  for (size_t e = 0; e < chain.n_edges(); ++e) {
    SlenderVerdict v = is_slender(chain.adornments[e], 16, tol);
    if (!v.is_slender) why.push_back("edge " + std::to_string(e) + " is not slender");
    else if (!v.is_symmetric) why.push_back("edge " + std::to_string(e) + " is not symmetric");
  }
  if (!validate(chain, from, tol).clean) why.push_back("initial configuration is not clean");
  ExpansionReport ex = is_expansion(from, to, tol.eps_geom);
  if (!ex.is_expansion)
    why.push_back("vertices " + std::to_string(ex.i) + " and " + std::to_string(ex.j) + " get closer");

  rep.after = validate(chain, to, tol);
  if (!rep.after.overlaps.empty()) {
    const OverlapPair& o = rep.after.overlaps.front();
    auto [a, b] = chain.edges[o.e1];
    auto [p, q] = chain.edges[o.e2];
    rep.centers_from = std::array<Point2, 4>{from[a], from[b], from[p], from[q]};
    rep.centers_to = std::array<Point2, 4>{to[a], to[b], to[p], to[q]};
  }
  if (!why.empty()) {
    rep.status = ExpansionStatus::precondition_violated;
    for (size_t i = 0; i < why.size(); ++i) rep.reason += (i ? "; " : "") + why[i];
    return rep;
  }
  if (!rep.after.clean) {
    rep.status = ExpansionStatus::overlap;
    rep.reason = "expanded configuration overlaps although the preconditions hold (numerical failure)";
  }
  return rep;
}

}  // namespace adorn
