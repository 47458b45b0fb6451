#include "adorn/scene.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace adorn {

namespace {

constexpr const char* kMagic = "adorn-scene/1";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pt(Point2 p) { return num(p.x) + " " + num(p.y); }

void write_side(std::ostream& os, int e, const char* which, const ArcPath& path) {
  for (const Primitive& prim : path.primitives()) {
    os << "side " << e << ' ' << which << ' ';
    if (const auto* s = std::get_if<Segment>(&prim)) {
      os << "seg " << pt(s->a) << ' ' << pt(s->b) << '\n';
    } else {
      const Arc& a = std::get<Arc>(prim);
      os << "arc " << pt(a.center()) << ' ' << num(a.radius()) << ' ' << num(a.start_angle()) << ' '
         << num(a.sweep()) << '\n';
    }
  }
}

class LineReader {
 public:
  LineReader(int line, const std::string& text) : line_(line), in_(text) {}

  std::string word(const std::string& field) {
    std::string w;
    if (!(in_ >> w)) throw ParseError(line_, field, "missing value");
    return w;
  }

  double number(const std::string& field) {
    std::string w = word(field);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size() || errno == ERANGE)
      throw ParseError(line_, field, "expected a number, got '" + w + "'");
    return v;
  }

  int integer(const std::string& field) {
    std::string w = word(field);
    char* end = nullptr;
    long v = std::strtol(w.c_str(), &end, 10);
    if (end != w.c_str() + w.size()) throw ParseError(line_, field, "expected an integer, got '" + w + "'");
    return static_cast<int>(v);
  }

  int index(const std::string& field, int n) {
    int v = integer(field);
    if (v < 0 || v >= n)
      throw ParseError(line_, field, "index " + std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
    return v;
  }

  Point2 point(const std::string& field) {
    double x = number(field + ".x");
    return {x, number(field + ".y")};
  }

  std::string rest() {
    std::string r;
    std::getline(in_, r);
    size_t a = r.find_first_not_of(" \t");
    return a == std::string::npos ? "" : r.substr(a);
  }

  bool at_end() {
    std::string w;
    return !(in_ >> w);
  }

  bool at_end_peek() {
    in_ >> std::ws;
    return in_.eof();
  }

 private:
  int line_;
  std::istringstream in_;
};

void check_pair(const std::pair<int, int>& p, int n, const char* what) {
  if (p.first < 0 || p.first >= n || p.second < 0 || p.second >= n || p.first == p.second)
    throw GeometryError(std::string("scene: bad ") + what + " " + std::to_string(p.first) + " " +
                        std::to_string(p.second));
}

}  // namespace

ParseError::ParseError(int line_no, const std::string& f, const std::string& what)
    : GeometryError("line " + std::to_string(line_no) + ": field '" + f + "': " + what), line(line_no), field(f) {}

int Scene::chain_vertices() const {
  int m = 0;
  for (auto [i, j] : edges) m = std::max({m, i + 1, j + 1});
  return m;
}

Configuration Scene::chain_config(const std::vector<Point2>& positions) const {
  int m = has_chain() ? chain_vertices() : static_cast<int>(positions.size());
  if (static_cast<int>(positions.size()) < m) throw GeometryError("scene: too few positions");
  return {std::vector<Point2>(positions.begin(), positions.begin() + m)};
}

Point2 Scene::mark_at(int k, const Configuration& c) const {
  auto [e, p] = marks.at(k);
  return chain().edge_frame(e, c).apply(p);
}

AdornedChain Scene::chain() const {
  check();
  if (!has_chain()) throw GeometryError("scene '" + name + "' has no chain edges");
  AdornedChain ch;
  ch.n_vertices = chain_vertices();
  ch.closed = closed;
  ch.edges = edges;
  for (size_t e = 0; e < edges.size(); ++e) {
    double len = dist(vertices[edges[e].first], vertices[edges[e].second]);
    ch.rest_lengths.push_back(len);
    Adornment a = e < adornments.size() ? adornments[e] : Adornment::bare({0, 0}, {len, 0});
    a.base = Segment{{0, 0}, {len, 0}};
    ch.adornments.push_back(a);
  }
  ch.check_structure();
  return ch;
}

SelfTouchingLinkage Scene::linkage() const {
  check();
  SelfTouchingLinkage l;
  for (size_t i = 0; i < vertices.size(); ++i) l.add_vertex(vertices[i], i < labels.size() ? labels[i] : "");
  for (auto [i, j] : edges) l.add_bar(i, j);
  for (auto [i, j] : bars) l.add_bar(i, j);
  l.connections = connections;
  l.pins = pins;
  return l;
}

Scene Scene::from_chain(const std::string& nm, const AdornedChain& ch, const Configuration& c) {
  Scene s;
  s.name = nm;
  s.vertices = c.positions;
  s.labels.assign(s.vertices.size(), "");
  s.closed = ch.closed;
  s.edges = ch.edges;
  s.adornments = ch.adornments;
  return s;
}

Scene Scene::from_linkage(const std::string& nm, const SelfTouchingLinkage& l) {
  Scene s;
  s.name = nm;
  s.vertices = l.vertices;
  s.labels = l.labels;
  s.labels.resize(s.vertices.size());
  s.bars = l.bars;
  s.pins = l.pins;
  s.connections = l.connections;
  return s;
}

void Scene::check() const {
  int n = static_cast<int>(vertices.size());
  if (labels.size() > vertices.size()) throw GeometryError("scene: more labels than vertices");
  if (!adornments.empty() && adornments.size() != edges.size())
    throw GeometryError("scene: adornment count does not match edge count");
  for (const auto& e : edges) check_pair(e, n, "edge");
  for (const auto& b : bars) check_pair(b, n, "bar");
  for (const auto& p : pins) check_pair(p, n, "pin");
  for (const auto& [e, p] : marks)
    if (e < 0 || e >= static_cast<int>(edges.size())) throw GeometryError("scene: mark on unknown edge");
  for (const auto& pc : pieces) {
    if (pc.size() < 3) throw GeometryError("scene: piece with fewer than three vertices");
    for (int v : pc)
      if (v < 0 || v >= n) throw GeometryError("scene: piece vertex out of range");
  }
  for (const Connection& c : connections) {
    if (c.u < 0 || c.u >= n || c.v < 0 || c.v >= n || c.w < 0 || c.w >= n || (c.side != 1 && c.side != -1))
      throw GeometryError("scene: bad connection");
  }
  if (!target.empty() && target.size() != vertices.size())
    throw GeometryError("scene: target has " + std::to_string(target.size()) + " vertices, expected " +
                        std::to_string(n));
}

std::string to_text(const Scene& s) {
  s.check();
  std::ostringstream os;
  os << kMagic << '\n';
  os << "name " << s.name << '\n';
  if (!s.note.empty()) os << "note " << s.note << '\n';
  os << "closed " << (s.closed ? 1 : 0) << '\n';
  for (size_t i = 0; i < s.vertices.size(); ++i) {
    os << "vertex " << pt(s.vertices[i]);
    if (i < s.labels.size() && !s.labels[i].empty()) os << ' ' << s.labels[i];
    os << '\n';
  }
  for (size_t e = 0; e < s.edges.size(); ++e) {
    os << "edge " << s.edges[e].first << ' ' << s.edges[e].second << '\n';
    if (e < s.adornments.size()) {
      write_side(os, static_cast<int>(e), "upper", s.adornments[e].upper);
      write_side(os, static_cast<int>(e), "lower", s.adornments[e].lower);
    }
  }
  for (auto [i, j] : s.bars) os << "bar " << i << ' ' << j << '\n';
  for (auto [i, j] : s.pins) os << "pin " << i << ' ' << j << '\n';
  for (const Connection& c : s.connections) os << "conn " << c.u << ' ' << c.v << ' ' << c.w << ' ' << c.side << '\n';
  for (const RuleStep& r : s.rules) {
    os << "rule " << r.rule << ' ' << r.b.first << ' ' << r.b.second << ' ' << r.b_prime.first << ' '
       << r.b_prime.second;
    if (r.rule == 2) os << ' ' << r.b_second.first << ' ' << r.b_second.second;
    os << '\n';
  }
  for (Point2 p : s.target) os << "target " << pt(p) << '\n';
  for (const auto& [e, p] : s.marks) os << "mark " << e << ' ' << pt(p) << '\n';
  for (const auto& pc : s.pieces) {
    os << "piece";
    for (int v : pc) os << ' ' << v;
    os << '\n';
  }
  os << "end\n";
  return os.str();
}

Scene parse_scene(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool seen_magic = false, seen_end = false;
  Scene s;
  std::vector<std::vector<Primitive>> upper, lower;
  while (std::getline(in, raw)) {
    ++line;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    LineReader r(line, raw);
    std::string key;
    {
      std::istringstream probe(raw);
      if (!(probe >> key)) continue;
    }
    if (seen_end) throw ParseError(line, key, "content after 'end'");
    r.word("key");
    if (!seen_magic) {
      if (key.rfind("adorn-scene/", 0) == 0 && key != kMagic)
        throw ParseError(line, "version", "unsupported version '" + key + "', expected " + kMagic);
      if (key != kMagic) throw ParseError(line, "version", std::string("expected header ") + kMagic);
      seen_magic = true;
      continue;
    }
    int n = static_cast<int>(s.vertices.size());
    if (key == "name") {
      s.name = r.word("name");
    } else if (key == "note") {
      s.note = r.rest();
    } else if (key == "closed") {
      int c = r.integer("closed");
      if (c != 0 && c != 1) throw ParseError(line, "closed", "expected 0 or 1");
      s.closed = c == 1;
    } else if (key == "vertex") {
      s.vertices.push_back(r.point("vertex"));
      std::string lab = r.rest();
      if (lab.find_first_of(" \t") != std::string::npos) throw ParseError(line, "vertex.label", "labels are single words");
      s.labels.push_back(lab);
    } else if (key == "edge") {
      int i = r.index("edge.i", n);
      s.edges.emplace_back(i, r.index("edge.j", n));
      upper.emplace_back();
      lower.emplace_back();
    } else if (key == "side") {
      int e = r.index("side.edge", static_cast<int>(s.edges.size()));
      std::string which = r.word("side.which");
      if (which != "upper" && which != "lower") throw ParseError(line, "side.which", "expected upper or lower");
      std::string kind = r.word("side.kind");
      Primitive prim;
      if (kind == "seg") {
        Point2 a = r.point("seg.a");
        prim = Segment{a, r.point("seg.b")};
      } else if (kind == "arc") {
        Point2 c = r.point("arc.center");
        double rad = r.number("arc.radius");
        double st = r.number("arc.start");
        double sw = r.number("arc.sweep");
        if (!(rad > 0)) throw ParseError(line, "arc.radius", "must be positive");
        prim = Arc(c, rad, st, sw);
      } else {
        throw ParseError(line, "side.kind", "expected seg or arc, got '" + kind + "'");
      }
      (which == "upper" ? upper : lower)[e].push_back(prim);
    } else if (key == "bar" || key == "pin") {
      int i = r.index(key + ".i", n);
      int j = r.index(key + ".j", n);
      (key == "bar" ? s.bars : s.pins).emplace_back(i, j);
    } else if (key == "mark") {
      int e = r.index("mark.edge", static_cast<int>(s.edges.size()));
      s.marks.emplace_back(e, r.point("mark"));
    } else if (key == "piece") {
      std::vector<int> pc;
      pc.push_back(r.index("piece.vertex", n));
      while (!r.at_end_peek()) pc.push_back(r.index("piece.vertex", n));
      if (pc.size() < 3) throw ParseError(line, "piece", "needs at least three vertices");
      s.pieces.push_back(pc);
    } else if (key == "conn") {
      Connection c;
      c.u = r.index("conn.u", n);
      c.v = r.index("conn.v", n);
      c.w = r.index("conn.w", n);
      c.side = r.integer("conn.side");
      if (c.side != 1 && c.side != -1) throw ParseError(line, "conn.side", "expected 1 or -1");
      s.connections.push_back(c);
    } else if (key == "rule") {
      RuleStep st;
      st.rule = r.integer("rule.kind");
      if (st.rule != 1 && st.rule != 2) throw ParseError(line, "rule.kind", "expected 1 or 2");
      st.b.first = r.word("rule.b");
      st.b.second = r.word("rule.b");
      st.b_prime.first = r.word("rule.b_prime");
      st.b_prime.second = r.word("rule.b_prime");
      if (st.rule == 2) {
        st.b_second.first = r.word("rule.b_second");
        st.b_second.second = r.word("rule.b_second");
      }
      s.rules.push_back(st);
    } else if (key == "target") {
      s.target.push_back(r.point("target"));
    } else if (key == "end") {
      seen_end = true;
      continue;
    } else {
      throw ParseError(line, key, "unknown field");
    }
    if (key != "note" && key != "vertex" && !r.at_end()) throw ParseError(line, key, "trailing data");
  }
  if (!seen_magic) throw ParseError(line + 1, "version", std::string("empty file, expected header ") + kMagic);
  if (!seen_end) throw ParseError(line + 1, "end", "file is truncated");
  if (s.name.empty()) throw ParseError(line, "name", "missing");
  for (size_t e = 0; e < s.edges.size(); ++e) {
    double len = dist(s.vertices[s.edges[e].first], s.vertices[s.edges[e].second]);
    Adornment a = Adornment::bare({0, 0}, {len, 0});
    a.upper = ArcPath(upper[e]);
    a.lower = ArcPath(lower[e]);
    s.adornments.push_back(a);
  }
  try {
    s.check();
  } catch (const GeometryError& e) {
    throw ParseError(line, "scene", e.what());
  }
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GeometryError("cannot open scene file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_scene(buf.str());
}

void save_scene(const Scene& s, const std::string& path) {
  std::string text = to_text(s);
  std::ofstream f(path);
  if (!f) throw GeometryError("cannot write scene file '" + path + "'");
  f << text;
  if (!f) throw GeometryError("write failed for '" + path + "'");
}

std::string scene_schema() {
  return R"(adorn-scene/1    first significant line
# comment        anything after '#' is ignored
name <word>
note <text>
closed 0|1
vertex <x> <y> [label]
edge <i> <j>                                   chain edge, in order
side <edge> upper|lower seg <x1> <y1> <x2> <y2>  adornment piece, edge-local frame
side <edge> upper|lower arc <cx> <cy> <r> <start> <sweep>
bar <i> <j>                                    extra bar (self-touching linkages)
pin <i> <j>                                    collocated vertices
conn <u> <v> <w> <side>                        u stays on side (+1 left, -1 right) of v->w
rule 1 <p> <q> <p'> <q'>                       simplification step, by vertex labels
rule 2 <p> <q> <p'> <q'> <p''> <q''>
target <x> <y>                                 one per vertex, optional
mark <edge> <x> <y>                            adornment point singled out in reports, edge-local
piece <i> <j> <k> ...                          filled polygon over vertices (linkage pieces)
end
Numbers are written with 17 significant digits; the edge-local frame puts the base at (0,0)-(L,0).
)";
}

}  // namespace adorn
