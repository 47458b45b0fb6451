#include "adorn/gallery.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>

namespace adorn {

namespace {

double rad(double deg) { return deg * M_PI / 180.0; }

Scene chain_scene(const std::string& name, const std::string& note, const std::vector<Point2>& pts, bool closed) {
  Scene s = Scene::from_chain(name, AdornedChain::from_positions(pts, closed), Configuration{pts});
  s.note = note;
  return s;
}

// Attaches a world-coordinate adornment to edge e of the scene's own configuration.
void adorn_edge(Scene& s, int e, const Adornment& world) {
  AdornedChain ch = s.chain();
  ch.attach(e, world, s.config());
  s.adornments = ch.adornments;
}

// One-sided triangle on edge e with the given apex.
void triangle(Scene& s, int e, Point2 apex) {
  Point2 x = s.vertices[s.edges[e].first], y = s.vertices[s.edges[e].second];
  adorn_edge(s, e, Adornment::polygon_side(x, y, {apex}, cross(y - x, apex - x) > 0));
}

void mark_world(Scene& s, int e, Point2 p) {
  s.marks.emplace_back(e, s.chain().edge_frame(e, s.config()).inverse().apply(p));
}

// Two edges hinged at the origin with outward triangles; opening the hinge brings the apexes together.
Scene non_expansive() {
  Scene s = chain_scene("non-expansive", "hinge opening carries two outward triangles closer together",
                        {{-1, 0}, {0, 0}, {std::cos(rad(30)), std::sin(rad(30))}}, false);
  double h = 0.5 * std::tan(rad(30));
  Point2 a = {-0.5, -h};
  Point2 mid = s.vertices[2] * 0.5, n = {std::sin(rad(30)), -std::cos(rad(30))};
  Point2 b = mid + n * h;
  triangle(s, 0, a);
  triangle(s, 1, b);
  mark_world(s, 0, a);
  mark_world(s, 1, b);
  s.target = {{-1, 0}, {0, 0}, {1, 0}};
  return s;
}

// Edge A carries a one-sided triangle; edge B, below A's empty side, is reflected across A's line.
Scene non_symmetric_overlap() {
  Scene s = chain_scene("non-symmetric-overlap", "one-sided triangles; the reflected chain is an expansion",
                        {{-1, 0}, {1, 0}, {0.2, -0.3}, {-0.2, -0.3}}, false);
  triangle(s, 0, {0, 0.9});
  triangle(s, 2, {0, -0.45});
  s.target = {{-1, 0}, {1, 0}, {0.2, 0.3}, {-0.2, 0.3}};
  return s;
}

Scene area_down() {
  Scene s = chain_scene("area-down", "one-sided triangles; an expansion pushes B's triangle into A's",
                        {{-1, 0}, {1, 0}, {0.3, -0.4}, {-0.3, -0.4}}, false);
  triangle(s, 0, {0, 0.8});
  triangle(s, 2, {0, -0.6});
  // Keep the connector length while sliding its free end toward y.
  double r = dist(s.vertices[1], s.vertices[2]);
  Point2 q = {0.35, std::sqrt(r * r - 0.65 * 0.65)};
  Point2 p = q + Point2{-std::cos(rad(20)), std::sin(rad(20))} * 0.6;
  s.target = {{-1, 0}, {1, 0}, q, p};
  return s;
}

// Parallelogram with two inward triangles; shearing through the upright position makes them collide.
Scene two_components() {
  const double side = 1.3, h = 0.7;
  auto config = [&](double phi) {
    Point2 d = Point2{std::cos(rad(phi)), std::sin(rad(phi))} * side;
    return std::vector<Point2>{{0, 0}, {2, 0}, Point2{2, 0} + d, d};
  };
  Scene s = chain_scene("two-components-quadrilateral", "quadrilateral with two slender triangles", config(50), true);
  triangle(s, 0, {1, h});
  Point2 d = s.vertices[3];
  triangle(s, 2, d + Point2{1, -h});
  s.target = config(130);
  return s;
}

// Finite truncation of the many-components construction. The top triangle's apex runs along a circle C while
// the bottom adornment is the hull of points just outside C; chords between them dip inside, so a shear sweep
// alternates between collisions at each point and clean gaps between them.
Scene many_components() {
  const double side = 1.2, h = 0.6, out = 0.002;
  auto config = [&](double phi) {
    Point2 d = Point2{std::cos(rad(phi)), std::sin(rad(phi))} * side;
    return std::vector<Point2>{{0, 0}, {2, 0}, Point2{2, 0} + d, d};
  };
  Scene s = chain_scene("many-components-truncated",
                        "quadrilateral whose shear passes four collisions, truncated from an infinite family",
                        config(110), true);
  std::vector<Point2> hull;
  for (double a : {94.0, 86.0, 78.0, 70.0})
    hull.push_back(Point2{1, -h} + Point2{std::cos(rad(a)), std::sin(rad(a))} * (side + out));
  adorn_edge(s, 0, Adornment::polygon_side(s.vertices[0], s.vertices[1], hull, true));
  triangle(s, 2, s.vertices[3] + Point2{1, -h});
  s.target = config(55);
  return s;
}

// U-shaped chain of three intervals with symmetric lenses that overlap across the gap.
Scene area_overlap() {
  Scene s = chain_scene("area-overlap", "three intervals with overlapping symmetric lenses",
                        {{0, 1}, {0, 0}, {0.6, 0}, {0.6, 1}}, false);
  for (int e = 0; e < 3; ++e) {
    Point2 x = s.vertices[e], y = s.vertices[e + 1];
    Point2 z = (x + y) * 0.5 + unit(perp(y - x)) * (e == 1 ? 0.15 : 0.35);
    adorn_edge(s, e, lens_of(x, y, z).as_adornment());
  }
  return s;
}

void one_sided(SelfTouchingLinkage& l, int u, int v, int w, int away_from) {
  Point2 p = l.vertices[v], q = l.vertices[w], a = l.vertices[away_from];
  l.connections.push_back({u, v, w, cross(q - p, a - p) > 0 ? -1 : 1});
}

// Collocated copy of triangle (p, q, r): new vertices at p and q, joined to r. Rule 1 folds it onto the original.
RuleStep copy_triangle(SelfTouchingLinkage& l, const std::string& p, const std::string& q, const std::string& r,
                       const std::string& np, const std::string& nq) {
  int P = l.add_vertex(l.vertices[l.vertex(p)], np), Q = l.add_vertex(l.vertices[l.vertex(q)], nq);
  l.add_bar(P, Q);
  l.add_bar(P, l.vertex(r));
  l.add_bar(Q, l.vertex(r));
  return {1, {np, nq}, {p, q}, {}};
}

// Bar from h to a new vertex at q, doubling bar h-q. Rule 2 folds it away, using bar q-r.
RuleStep hairpin(SelfTouchingLinkage& l, const std::string& h, const std::string& q, const std::string& r,
                 const std::string& nx) {
  int X = l.add_vertex(l.vertices[l.vertex(q)], nx);
  l.add_bar(l.vertex(h), X);
  return {2, {h, nx}, {h, q}, {q, r}};
}

std::vector<std::vector<int>> triangles_of(const SelfTouchingLinkage& l) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < l.n(); ++i)
    for (int j = i + 1; j < l.n(); ++j)
      for (int k = j + 1; k < l.n(); ++k)
        if (l.bar_between(i, j) >= 0 && l.bar_between(j, k) >= 0 && l.bar_between(i, k) >= 0) out.push_back({i, j, k});
  return out;
}

Scene linkage_scene(const std::string& name, const std::string& note, const SelfTouchingLinkage& l,
                    const std::vector<RuleStep>& rules = {}) {
  Scene s = Scene::from_linkage(name, l);
  s.note = note;
  s.rules = rules;
  s.pieces = triangles_of(l);
  return s;
}

// Adds a convex piece with fan braces; each (piece, point) pair reuses that piece's corner as a hinge.
void add_piece(SelfTouchingLinkage& l, std::vector<std::vector<int>>& pieces, const std::vector<Point2>& corners,
               const std::vector<std::pair<int, Point2>>& hinges = {}) {
  std::vector<int> idx;
  for (Point2 c : corners) {
    int v = -1;
    for (auto [p, at] : hinges)
      if (at == c)
        for (int j : pieces[p])
          if (l.vertices[j] == c) v = j;
    idx.push_back(v >= 0 ? v : l.add_vertex(c));
  }
  for (size_t k = 0; k < idx.size(); ++k) l.add_bar(idx[k], idx[(k + 1) % idx.size()]);
  for (size_t k = 2; k + 1 < idx.size(); ++k) l.add_bar(idx[0], idx[k]);
  pieces.push_back(idx);
}

Scene pieces_scene(const std::string& note, const SelfTouchingLinkage& l, const std::vector<std::vector<int>>& pieces) {
  Scene s = Scene::from_linkage("", l);
  s.note = note;
  s.pieces = pieces;
  return s;
}

// T1 lies flat on the top of the long obtuse T2; T3 hangs from the far end of T2, flush with its
// lower edge, and leans back onto T1.
Scene three_triangles() {
  SelfTouchingLinkage l;
  std::vector<std::vector<int>> pc;
  Point2 h1{0, 0}, h2{2, 0}, m2{3.1, -0.4}, a{1.6, 0}, p{0.4, 1.15};
  add_piece(l, pc, {h1, a, p});
  add_piece(l, pc, {h1, h2, m2}, {{0, h1}});
  add_piece(l, pc, {h2, h2 + (m2 - h2) * (1.4 / norm(m2 - h2)), a + (p - a) * 0.35}, {{1, h2}});
  return pieces_scene("three triangles, two of them with very obtuse angles", l, pc);
}

// Four unit squares filling a 2x2 block; B, C and D each carry their hinges at adjacent corners.
Scene squares(bool closed) {
  SelfTouchingLinkage l;
  std::vector<std::vector<int>> pc;
  auto sq = [](double x, double y) { return std::vector<Point2>{{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}}; };
  add_piece(l, pc, sq(0, 0));
  add_piece(l, pc, sq(-1, -1), {{0, {0, 0}}});
  add_piece(l, pc, sq(-1, 0), {{1, {-1, 0}}});
  if (closed)
    add_piece(l, pc, sq(0, -1), {{2, {0, 0}}, {0, {1, 0}}});
  else
    add_piece(l, pc, sq(0, -1), {{2, {0, 0}}});
  return pieces_scene(closed ? "closed chain of four self-touching squares" : "open chain of four self-touching squares",
                      l, pc);
}

std::string degrees(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", deg);
  return buf;
}

Scene seven_tight() {
  SelfTouchingLinkage l = seven_simplified_linkage();
  std::vector<RuleStep> rules = {copy_triangle(l, "P", "T1", "A", "P1", "T1a"), copy_triangle(l, "A", "T1", "P", "A2", "T1b"),
                                 copy_triangle(l, "P", "T2", "Q", "P3", "T2a"), copy_triangle(l, "Q", "T3", "B", "Q4", "T3a"),
                                 hairpin(l, "M", "A", "P", "X5")};
  return linkage_scene("locked-7-equilateral", "seven triangles, collocated copies fold onto the simplified linkage", l,
                       rules);
}

struct Maker {
  Expected expected;
  std::function<Scene(double)> make;
  bool angled = false;
  double default_deg = 60;
};

const std::map<std::string, Maker>& registry() {
  static const std::map<std::string, Maker> r = {
      {"non-expansive", {Expected::counterexample, [](double) { return non_expansive(); }}},
      {"non-symmetric-overlap", {Expected::counterexample, [](double) { return non_symmetric_overlap(); }}},
      {"area-down", {Expected::counterexample, [](double) { return area_down(); }}},
      {"two-components-quadrilateral", {Expected::counterexample, [](double) { return two_components(); }}},
      {"many-components-truncated", {Expected::counterexample, [](double) { return many_components(); }}},
      {"area-overlap", {Expected::unfolds, [](double) { return area_overlap(); }}},
      {"locked-9-simplified",
       {Expected::certified_rigid,
        [](double deg) {
          return linkage_scene("", "simplified nine-triangle linkage, apex angle " + degrees(deg),
                               nine_simplified_linkage(deg));
        },
        true}},
      {"locked-9-equilateral-tight", {Expected::certified_rigid, [](double) { return nine_tight(60); }}},
      {"locked-9-isosceles-tight", {Expected::certified_rigid, [](double deg) { return nine_tight(deg); }, true, 75}},
      {"locked-9-equilateral-loose",
       {Expected::conjectured_locked,
        [](double) {
          return linkage_scene("", "nine-triangle linkage with every wedged vertex moved 0.01 into its wedge",
                               perturb(nine_simplified_linkage(60), 0.01));
        }}},
      {"locked-7-simplified",
       {Expected::conjectured_locked,
        [](double) { return linkage_scene("", "simplified seven-triangle linkage", seven_simplified_linkage()); }}},
      {"locked-7-equilateral", {Expected::conjectured_locked, [](double) { return seven_tight(); }}},
      {"locked-3-triangles", {Expected::conjectured_locked, [](double) { return three_triangles(); }}},
      {"locked-squares-open", {Expected::conjectured_locked, [](double) { return squares(false); }}},
      {"locked-squares-closed", {Expected::conjectured_locked, [](double) { return squares(true); }}},
  };
  return r;
}

}  // namespace

std::string to_string(Expected e) {
  switch (e) {
    case Expected::unfolds: return "unfolds";
    case Expected::certified_rigid: return "certified_rigid";
    case Expected::conjectured_locked: return "conjectured_locked";
    case Expected::counterexample: return "counterexample";
  }
  return "?";
}

// Wedges at C' and D have the apex angle, the angle ABC is its supplement. F braces the block ADE,
// whose three labelled points are collinear.
SelfTouchingLinkage nine_simplified_linkage(double apex_deg) {
  double co = std::cos(rad(apex_deg) / 2), si = std::sin(rad(apex_deg) / 2);
  SelfTouchingLinkage l;
  int A = l.add_vertex({co, si}, "A"), B = l.add_vertex({0, 0}, "B"), B2 = l.add_vertex({0, 0}, "B'");
  int C = l.add_vertex({-co, si}, "C"), C2 = l.add_vertex({-co, si}, "C'");
  int D = l.add_vertex({0, 2 * si}, "D"), D2 = l.add_vertex({0, 2 * si}, "D'");
  int E = l.add_vertex({-co, 3 * si}, "E"), F = l.add_vertex({co, 3 * si}, "F");
  for (auto [i, j] : {std::pair{A, B}, {A, B2}, {B, C}, {B2, C2}, {C, D}, {C2, D2}, {A, C}, {A, D}, {D, E}, {A, E},
                      {A, F}, {D, F}, {E, F}})
    l.add_bar(i, j);
  l.add_wedge(B, B2, A, C2);
  l.add_wedge(C, C2, B2, D2);
  l.add_wedge(D2, D, C, E);
  return l;
}

SelfTouchingLinkage seven_simplified_linkage() {
  SelfTouchingLinkage l;
  double h = std::sqrt(3.0) / 2;
  int A = l.add_vertex({0, 0}, "A"), M = l.add_vertex({0, 1}, "M"), B = l.add_vertex({0, 2}, "B");
  int P = l.add_vertex({h, 0.5}, "P"), Q = l.add_vertex({h, 1.5}, "Q");
  int T1 = l.add_vertex({0, 1}, "T1"), T2 = l.add_vertex({0, 1}, "T2"), T3 = l.add_vertex({0, 1}, "T3");
  for (auto [i, j] : {std::pair{A, M}, {M, B}, {A, P}, {P, Q}, {Q, B}, {A, T1}, {P, T1}, {P, T2}, {Q, T2}, {Q, T3}, {B, T3}})
    l.add_bar(i, j);
  one_sided(l, T2, T1, P, A);
  one_sided(l, T1, T2, P, Q);
  one_sided(l, T3, T2, Q, P);
  one_sided(l, T2, T3, Q, B);
  one_sided(l, M, T1, A, P);
  one_sided(l, M, T3, B, Q);
  return l;
}

Scene nine_tight(double apex_deg) {
  SelfTouchingLinkage l = nine_simplified_linkage(apex_deg);
  std::vector<RuleStep> rules = {copy_triangle(l, "A", "C", "B", "A1", "C1"), copy_triangle(l, "A", "C", "D", "A2", "C2"),
                                 copy_triangle(l, "E", "F", "D", "E3", "F3"), hairpin(l, "D'", "C'", "B'", "X4"),
                                 hairpin(l, "B'", "C'", "D'", "X5")};
  return linkage_scene("locked-9-isosceles-tight",
                       "nine triangles, apex angle " + degrees(apex_deg) +
                           "; collocated copies and hairpins fold onto the simplified linkage",
                       l, rules);
}

std::vector<Point2> seven_cauchy_arm() {
  double h = std::sqrt(3.0) / 2;
  return {{0, 0}, {h, 0.5}, {h, 1.5}, {0, 2}};
}

std::vector<std::string> gallery_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

GalleryEntry gallery(const std::string& name) {
  std::string base = name;
  std::optional<double> deg;
  size_t at = name.find('@');
  if (at != std::string::npos) {
    base = name.substr(0, at);
    char* end = nullptr;
    std::string num = name.substr(at + 1);
    double v = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size() || !(v > 0 && v < 180))
      throw GeometryError("bad apex angle in '" + name + "'");
    deg = v;
  }
  auto it = registry().find(base);
  if (it == registry().end()) {
    std::string list;
    for (const std::string& n : gallery_names()) list += "\n  " + n;
    throw GeometryError("unknown gallery scene '" + name + "'; available:" + list);
  }
  if (deg && !it->second.angled) throw GeometryError("scene '" + base + "' takes no apex angle");
  GalleryEntry e;
  e.name = name;
  e.expected = it->second.expected;
  e.scene = it->second.make(deg.value_or(it->second.default_deg));
  e.scene.name = name;
  return e;
}

}  // namespace adorn
