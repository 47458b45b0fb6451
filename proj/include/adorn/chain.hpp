#pragma once

// Adorned chains, configurations, expansion checks and non-overlap verification.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adorn/adornment.hpp"

namespace adorn {

struct Configuration {
  std::vector<Point2> positions;

  size_t size() const { return positions.size(); }
  Point2 operator[](size_t i) const { return positions[i]; }
};

/// Adornments are stored with their base on (0,0)-(L,0), L the rest length.
struct AdornedChain {
  int n_vertices = 0;
  bool closed = false;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> rest_lengths;
  std::vector<Adornment> adornments;

  /// Path (or cycle) through the given positions with bare adornments.
  static AdornedChain from_positions(const std::vector<Point2>& pts, bool closed);
  /// Attaches an adornment given in world coordinates for configuration c.
  void attach(int edge, const Adornment& world, const Configuration& c);
  Similarity edge_frame(int edge, const Configuration& c) const;
  Adornment adornment_at(int edge, const Configuration& c) const;
  Region region_at(int edge, const Configuration& c) const;
  bool adjacent(int e1, int e2) const;
  /// Throws GeometryError when the edge list is not a path or cycle, or
  /// adornment bases disagree with the rest lengths.
  void check_structure(const Tolerance& tol = {}) const;
  size_t n_edges() const { return edges.size(); }
};

struct OverlapPair {
  int e1 = 0, e2 = 0;
  double separation = 0.0;
};

struct OverlapReport {
  bool clean = true;
  std::vector<OverlapPair> overlaps;
  std::vector<std::string> issues;
  /// Smallest separation between non-adjacent adornments (lower bound when far apart).
  double min_nonadjacent_separation = 1e300;
};

OverlapReport validate(const AdornedChain& chain, const Configuration& c, const Tolerance& tol = {});
double min_nonadjacent_separation(const AdornedChain& chain, const Configuration& c);
bool strictly_simple(const AdornedChain& chain, const Configuration& c, const Tolerance& tol = {});

struct ExpansionReport {
  bool is_expansion = true;
  int i = -1, j = -1;
  double old_distance = 0.0, new_distance = 0.0;
};

ExpansionReport is_expansion(const Configuration& from, const Configuration& to, double eps = 1e-9);

struct KirszbraunResult {
  bool empty_before = false;
  bool empty_after = false;
  /// False only if an empty intersection became nonempty.
  bool guarantee_holds = true;
};

/// True when the four disks have a common point (within eps).
bool disks_intersect(const std::array<Disk, 4>& disks, double eps = 1e-12);
KirszbraunResult kirszbraun_preserves_empty(const std::array<Disk, 4>& disks,
                                            const std::array<Point2, 4>& centers_to, double eps = 1e-9);

enum class ExpansionStatus { clean, overlap, precondition_violated };

struct SymmetricExpansionReport {
  ExpansionStatus status = ExpansionStatus::clean;
  std::string reason;
  OverlapReport after;
  /// Base endpoints of the first overlapping pair, before and after.
  std::optional<std::array<Point2, 4>> centers_from, centers_to;
};

SymmetricExpansionReport verify_symmetric_expansion(const AdornedChain& chain, const Configuration& from,
                                                    const Configuration& to, const Tolerance& tol = {});

std::string to_string(ExpansionStatus s);

}  // namespace adorn
