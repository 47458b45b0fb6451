#pragma once

// Self-touching linkages: zero-length connections, stresses, infinitesimal
// rigidity, certification, simplifying rules and lockedness probes.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adorn/geom.hpp"

namespace adorn {

/// Vertex u is kept on side `side` (+1 left, -1 right) of the directed line v->w,
/// where {v, w} is a bar and u is collocated with v.
struct Connection {
  int u = 0, v = 0, w = 0;
  int side = 1;
};

struct SelfTouchingLinkage {
  std::vector<Point2> vertices;
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> bars;
  std::vector<double> rest_lengths;
  std::vector<Connection> connections;
  /// Extra collocation facts (pairs of vertices that sit on the same point).
  std::vector<std::pair<int, int>> pins;

  int n() const { return static_cast<int>(vertices.size()); }
  int add_vertex(Point2 p, const std::string& label = "");
  int add_bar(int i, int j);
  /// Two connections for u wedged at v into the convex angle between bars {v,w1} and {v,w2}.
  void add_wedge(int u, int v, int w1, int w2);
  int vertex(const std::string& label) const;
  /// Bar index joining two vertices, -1 if none.
  int bar_between(int i, int j) const;
  std::string name(int v) const;
  /// Unit normal of connection c pointing to the allowed side.
  Point2 normal(const Connection& c) const;
  /// Throws GeometryError on malformed data.
  void check(const Tolerance& tol = {}) const;
};

struct Stress {
  std::vector<double> omega_bar;
  std::vector<double> omega_conn;
};

/// Largest norm over vertices of the stress-weighted sum of constraint gradients
/// (p_v - p_w per bar, the connection normal at u and its negative at v).
/// Negative stresses are struts: a negative connection stress pushes u off its bar.
double equilibrium_residual(const SelfTouchingLinkage& l, const Stress& s);

/// One row per bar; with pins, two rows per connection pair (u, v) and per pin.
Eigen::MatrixXd rigidity_matrix(const SelfTouchingLinkage& l, bool treat_connections_as_pins);
/// One row per connection: first-order change of u's signed distance from the line.
Eigen::MatrixXd connection_matrix(const SelfTouchingLinkage& l);
int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8);
bool is_infinitesimally_rigid(const SelfTouchingLinkage& l, bool pins);

struct StressResult {
  bool feasible = false;
  Stress stress;
  std::string message;
};

/// Equilibrium stress with every connection stress <= -1 (minimum norm among those).
/// Throws GeometryError when the linkage has no connections.
StressResult find_stress(const SelfTouchingLinkage& l);

struct InfinitesimalMotion {
  bool found = false;
  std::vector<Point2> velocities;
  std::string description;
};

/// Searches for a nontrivial first-order motion: bars preserved, connections not decreasing,
/// bar `pinned_bar` fixed. Tries each vertex in each of eight directions.
InfinitesimalMotion find_infinitesimal_motion(const SelfTouchingLinkage& l, int pinned_bar = 0);

enum class Conclusion { certified_rigid, not_certified };
std::string to_string(Conclusion c);

struct RigidityCertificate {
  std::optional<Stress> stress;
  double equilibrium_residual = 0.0;
  double max_conn_stress = 0.0;
  int pinned_rank = 0;
  int required_rank = 0;
  bool pinned_rank_ok = false;
  Conclusion conclusion = Conclusion::not_certified;
  std::vector<std::string> rule_chain;
  std::vector<std::string> notes;

  /// Text artifact listing the data needed to re-check the certificate by hand.
  std::string to_text(const SelfTouchingLinkage& l) const;
};

RigidityCertificate certify_rigid(const SelfTouchingLinkage& l);
/// Re-checks a certificate against the linkage without trusting its stored numbers.
bool verify_certificate(const SelfTouchingLinkage& l, const RigidityCertificate& c, std::string* why = nullptr);

/// Identifies vertex `drop` with `keep`; degenerate or repeated bars and connections go away.
SelfTouchingLinkage merge_vertices(const SelfTouchingLinkage& l, int keep, int drop);

bool applicable_rule1(const SelfTouchingLinkage& l, int b, int b_prime, std::string* why = nullptr);
SelfTouchingLinkage apply_rule1(const SelfTouchingLinkage& l, int b, int b_prime);
bool applicable_rule2(const SelfTouchingLinkage& l, int b, int b_prime, int b_second, std::string* why = nullptr);
SelfTouchingLinkage apply_rule2(const SelfTouchingLinkage& l, int b, int b_prime, int b_second);

/// A rule application named by vertex labels so it survives reindexing.
struct RuleStep {
  int rule = 1;
  std::pair<std::string, std::string> b, b_prime, b_second;
};

struct SimplifyResult {
  SelfTouchingLinkage linkage;
  std::vector<std::string> log;
};

SimplifyResult simplify(const SelfTouchingLinkage& l, const std::vector<RuleStep>& steps);

/// Opens the joints of a convex open chain by angle_deltas (radians, >= 0, one per interior joint)
/// in `increments` equal steps; true when the endpoint distance never decreases.
/// Throws GeometryError for non-convex input, closing deltas, or deltas past straight.
bool cauchy_arm_check(const std::vector<Point2>& chain, const std::vector<double>& angle_deltas,
                      int increments = 10);

/// Moves every wedged vertex by delta into its wedge; rest lengths follow the new positions.
SelfTouchingLinkage perturb(const SelfTouchingLinkage& l, double delta);

struct ProbeOptions {
  int trials = 100;
  int steps = 400;
  double step = 0.0;  // 0 picks delta / 4
  double cap = 1.0;
  int pinned_bar = 0;
  std::uint64_t seed = 1;
  // Convex pieces (vertex index cycles) whose interiors must stay disjoint.
  std::vector<std::vector<int>> pieces;
};

struct ProbeReport {
  double max_displacement = 0.0;
  int worst_trial = -1;
  bool hit_cap = false;
  int trials = 0;
  std::vector<double> per_trial;
};

/// Random-restart attempts to move the linkage away from its start while keeping bar lengths
/// and connection sides, and optionally keeping convex pieces from overlapping. Evidence only.
ProbeReport probe_locked(const SelfTouchingLinkage& l, double delta, const ProbeOptions& opts = {});

}  // namespace adorn
