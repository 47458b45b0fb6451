#pragma once

// Text scene files ("adorn-scene/1"): an adorned chain and/or a self-touching linkage.

#include <string>
#include <vector>

#include "adorn/chain.hpp"
#include "adorn/rigidity.hpp"

namespace adorn {

class ParseError : public GeometryError {
 public:
  ParseError(int line, const std::string& field, const std::string& what);
  int line = 0;
  std::string field;
};

struct Scene {
  std::string name;
  std::string note;
  std::vector<Point2> vertices;
  std::vector<std::string> labels;
  bool closed = false;
  /// Chain edges in order; adornments are in edge-local coordinates, one per edge.
  std::vector<std::pair<int, int>> edges;
  std::vector<Adornment> adornments;
  /// Self-touching annotations: bars beyond the chain edges, collocations, connections,
  /// and the simplification chain applied before certification.
  std::vector<std::pair<int, int>> bars;
  std::vector<std::pair<int, int>> pins;
  std::vector<Connection> connections;
  std::vector<RuleStep> rules;
  /// Optional target configuration (same vertex count).
  std::vector<Point2> target;
  /// Adornment points singled out for reporting: edge and edge-local position.
  std::vector<std::pair<int, Point2>> marks;
  /// Filled polygons over vertex indices (rigid pieces of a linkage).
  std::vector<std::vector<int>> pieces;

  bool has_chain() const { return !edges.empty(); }
  bool is_self_touching() const { return !connections.empty(); }
  /// Chain vertices are 0..chain_vertices()-1; later vertices belong to the linkage only.
  int chain_vertices() const;
  AdornedChain chain() const;
  Configuration config() const { return chain_config(vertices); }
  Configuration chain_config(const std::vector<Point2>& positions) const;
  /// World position of mark k in configuration c.
  Point2 mark_at(int k, const Configuration& c) const;
  /// Chain edges plus extra bars, with connections and pins.
  SelfTouchingLinkage linkage() const;

  static Scene from_chain(const std::string& name, const AdornedChain& chain, const Configuration& c);
  static Scene from_linkage(const std::string& name, const SelfTouchingLinkage& l);
  /// Throws GeometryError when indices are out of range or the chain is malformed.
  void check() const;
};

std::string to_text(const Scene& s);
Scene parse_scene(const std::string& text);
Scene load_scene(const std::string& path);
void save_scene(const Scene& s, const std::string& path);

/// Documentation of the file format, printed by the command-line tool.
std::string scene_schema();

}  // namespace adorn
