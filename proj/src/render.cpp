#include "adorn/render.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace adorn {

namespace {

struct View {
  BoundingBox box;
  double scale = 1, width = 0, height = 0, margin = 0;

  Point2 map(Point2 p) const { return {margin + (p.x - box.lo.x) * scale, margin + (box.hi.y - p.y) * scale}; }
};

std::vector<Region> adornment_regions(const Scene& s, const std::vector<Point2>& positions) {
  std::vector<Region> out;
  if (!s.has_chain() || s.adornments.empty()) return out;
  AdornedChain ch = s.chain();
  Configuration c = s.chain_config(positions);
  for (size_t e = 0; e < ch.n_edges(); ++e) {
    Adornment a = ch.adornment_at(static_cast<int>(e), c);
    if (!a.is_bare()) out.push_back(a.region());
  }
  return out;
}

void extend(BoundingBox& box, const Scene& s, const std::vector<Point2>& positions) {
  for (Point2 p : positions) box.add(Primitive{Segment{p, p}});
  for (const Region& r : adornment_regions(s, positions))
    for (const Primitive& p : r.boundary()) box.add(p);
}

View make_view(BoundingBox box, const RenderOptions& opts) {
  if (box.empty()) box.add(Primitive{Segment{{0, 0}, {1, 1}}});
  double span = std::max({box.width(), box.height(), 1e-9});
  View v;
  v.box = box;
  v.margin = opts.margin;
  v.scale = (opts.width - 2 * opts.margin) / std::max(box.width(), 1e-3 * span);
  v.width = opts.width;
  v.height = 2 * opts.margin + std::max(box.height(), 1e-3 * span) * v.scale;
  return v;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string pt(Point2 p) { return num(p.x) + "," + num(p.y); }

// The y flip turns world-ccw arcs clockwise on screen, so the SVG sweep flag is the opposite of ccw().
void arc_commands(std::ostringstream& d, const Arc& a, const View& v) {
  int pieces = std::fabs(a.sweep()) > M_PI ? 2 : 1;
  for (int k = 1; k <= pieces; ++k) {
    Point2 q = v.map(a.at(static_cast<double>(k) / pieces));
    d << " A" << num(a.radius() * v.scale) << "," << num(a.radius() * v.scale) << " 0 0," << (a.ccw() ? 0 : 1) << " "
      << pt(q);
  }
}

std::string path_data(const Region& r, const View& v) {
  std::ostringstream d;
  const auto& b = r.boundary();
  if (b.empty()) return "";
  d << "M" << pt(v.map(prim_start(b.front())));
  for (const Primitive& p : b) {
    if (const Arc* a = std::get_if<Arc>(&p))
      arc_commands(d, *a, v);
    else
      d << " L" << pt(v.map(prim_end(p)));
  }
  d << " Z";
  return d.str();
}

std::string frame_svg(const Scene& s, const std::vector<Point2>& positions, const View& v) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(v.width) << "\" height=\"" << num(v.height)
    << "\" viewBox=\"0 0 " << num(v.width) << " " << num(v.height) << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const Region& r : adornment_regions(s, positions))
    o << "<path class=\"adornment\" d=\"" << path_data(r, v)
      << "\" fill=\"#9ecae1\" fill-opacity=\"0.6\" stroke=\"#3182bd\" stroke-width=\"1\"/>\n";
  for (const auto& pc : s.pieces) {
    o << "<polygon class=\"piece\" points=\"";
    for (size_t k = 0; k < pc.size(); ++k) o << (k ? " " : "") << pt(v.map(positions[pc[k]]));
    o << "\" fill=\"#fdd0a2\" fill-opacity=\"0.7\" stroke=\"#e6550d\" stroke-width=\"1\"/>\n";
  }
  auto line = [&](const char* cls, int i, int j, double w) {
    Point2 a = v.map(positions[i]), b = v.map(positions[j]);
    o << "<line class=\"" << cls << "\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x)
      << "\" y2=\"" << num(b.y) << "\" stroke=\"black\" stroke-width=\"" << w << "\" stroke-linecap=\"round\"/>\n";
  };
  for (auto [i, j] : s.edges) line("base", i, j, 3);
  for (auto [i, j] : s.bars) line("bar", i, j, 1);
  for (size_t k = 0; k < positions.size(); ++k) {
    Point2 p = v.map(positions[k]);
    o << "<circle class=\"vertex\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"2\" fill=\"black\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw GeometryError("cannot write " + path);
  f << text;
  f.close();
  if (!f) throw GeometryError("cannot write " + path);
}

std::vector<Point2> full_positions(const Scene& s, const Configuration& c) {
  std::vector<Point2> p = s.vertices;
  for (size_t k = 0; k < c.positions.size() && k < p.size(); ++k) p[k] = c.positions[k];
  return p;
}

}  // namespace

std::string render_svg(const Scene& s, const std::vector<Point2>& positions, const RenderOptions& opts) {
  if (positions.size() != s.vertices.size()) throw GeometryError("render: position count does not match the scene");
  BoundingBox box;
  extend(box, s, positions);
  return frame_svg(s, positions, make_view(box, opts));
}

void render(const Scene& s, const std::string& path, const RenderOptions& opts) {
  write_file(path, render_svg(s, s.vertices, opts));
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
  std::ostringstream o;
  o << "t,vertex,x,y\n";
  char buf[128];
  for (size_t f = 0; f < t.frames.size(); ++f)
    for (size_t v = 0; v < t.frames[f].positions.size(); ++v) {
      Point2 p = t.frames[f].positions[v];
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", t.times[f], v, p.x, p.y);
      o << buf;
    }
  write_file(path, o.str());
}

std::vector<std::string> render_trajectory(const Scene& s, const Trajectory& t, const std::string& dir,
                                           const RenderOptions& opts) {
  if (t.times.size() != t.frames.size()) throw GeometryError("render: trajectory times and frames differ in length");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw GeometryError("cannot create directory " + dir);
  BoundingBox box;
  for (const Configuration& c : t.frames) extend(box, s, full_positions(s, c));
  View v = make_view(box, opts);
  int digits = std::max<int>(4, static_cast<int>(std::to_string(t.frames.empty() ? 0 : t.frames.size() - 1).size()));
  std::vector<std::string> paths;
  for (size_t f = 0; f < t.frames.size(); ++f) {
    char name[64];
    std::snprintf(name, sizeof name, "frame_%0*zu.svg", digits, f);
    std::string path = (std::filesystem::path(dir) / name).string();
    write_file(path, frame_svg(s, full_positions(s, t.frames[f]), v));
    paths.push_back(path);
  }
  write_trajectory_csv(t, (std::filesystem::path(dir) / "trajectory.csv").string());
  return paths;
}

}  // namespace adorn
