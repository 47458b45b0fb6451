#pragma once

// Lens and flower areas, and area monotonicity of adornment unions along expansions.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "adorn/unfold.hpp"

namespace adorn {

struct AreaEstimate {
  double value = 0.0;
  /// 95% confidence half-width; 0 for exact values.
  double half_width = 0.0;
};

/// Union of the pairwise intersections B1∩B2, B3∩B4, ...
struct Flower {
  std::vector<Disk> disks;

  void check() const;
  size_t n_petals() const { return disks.size() / 2; }
  bool contains(Point2 p) const;
};

struct McOptions {
  std::uint64_t seed = 1;
  /// Strata per axis; two samples per stratum.
  int grid = 600;
};

double disk_intersection_area(const Disk& a, const Disk& b);
AreaEstimate lens_area(const Lens& lens);

/// Stratified Monte Carlo area of {p in box : inside(p)}.
AreaEstimate mc_area(const std::function<bool(Point2)>& inside, const BoundingBox& box, const McOptions& opts = {});

AreaEstimate flower_area(const Flower& f, const McOptions& opts = {});
/// Exact union area by Green's theorem over the uncovered petal boundary arcs.
AreaEstimate flower_area_exact(const Flower& f);

/// Lenses L(x, y, z) over boundary points z of a symmetric slender adornment, with
/// `per_side` points per side. The disk radii are fixed, so the flower follows the chain.
Flower adornment_flower(const AdornedChain& chain, int edge, const Configuration& c, int per_side);
Flower chain_flower(const AdornedChain& chain, const Configuration& c, int per_side);

/// Area of the union of the adornment regions, sampled directly.
AreaEstimate union_area(const AdornedChain& chain, const Configuration& c, const McOptions& opts = {});

struct MonotonicityOptions {
  int per_side = 64;
  int max_frames = 16;
  /// Exact flower areas (half-width is a rounding bound); otherwise Monte Carlo with `mc`.
  bool exact = true;
  McOptions mc;
};

struct MonotonicityReport {
  bool preconditions_ok = true;
  std::string reason;
  bool monotone = true;
  int per_side = 0;
  std::vector<int> frames;
  std::vector<AreaEstimate> areas;
  /// Frame pair (into `frames`) with the largest decrease; -1 if the area never decreases.
  int worst_pair = -1;
  double worst_decrease = 0.0;
};

MonotonicityReport union_area_monotonicity(const AdornedChain& chain, const Trajectory& t,
                                           const MonotonicityOptions& opts = {});

}  // namespace adorn
