#pragma once

// Expansive motions: per-step QP velocities, Euler integration with
// bar-length projection, trajectory guards and open-chain reconfiguration.

#include <string>
#include <vector>

#include "adorn/chain.hpp"

namespace adorn {

struct UnfoldOptions {
  double dt_init = 0.02;
  double dt_min = 1e-10;
  double dt_max = 0.05;
  int max_steps = 20000;
  double straightness_tol = 1e-6;
  /// Pairs closer than this get no expansion target (slack target min(1, d - strut_floor)).
  double strut_floor = 1e-7;
  Tolerance tol;

  void check() const;
};

enum class Termination { straight, convex, max_steps, stalled, none };
std::string to_string(Termination t);

struct MotionStep {
  std::vector<Point2> velocities;
  double dt = 0.0;
  /// 1 / (largest vertex speed before normalization); 0 at terminal states.
  double margin = 0.0;
  bool terminal = false;
  std::vector<int> active;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> frames;
  Termination termination = Termination::none;
  std::string message;

  size_t size() const { return frames.size(); }
};

/// Turn angle at each joint: interior vertices of an open chain, every vertex of a closed one.
/// Entry i is the turn at vertex i (0 for the ends of an open chain).
std::vector<double> turn_angles(const AdornedChain& chain, const Configuration& c);
bool is_straight(const AdornedChain& chain, const Configuration& c, double tol);
bool is_convex(const AdornedChain& chain, const Configuration& c, double tol);

/// Velocities for one expansive step. `frozen[v]` marks joints held straight.
/// Throws GeometryError when the QP is infeasible (message lists the blocking pairs).
MotionStep expansive_velocity(const AdornedChain& chain, const Configuration& c, const std::vector<bool>& frozen,
                              const UnfoldOptions& opts = {});
MotionStep expansive_velocity(const AdornedChain& chain, const Configuration& c, const UnfoldOptions& opts = {});

/// Restores bar lengths (and straightness of frozen joints) by Gauss-Newton.
Configuration project_lengths(const AdornedChain& chain, const Configuration& c, const std::vector<bool>& frozen);

Trajectory integrate(const AdornedChain& chain, const Configuration& c0, const UnfoldOptions& opts = {});

struct GuardReport {
  bool clean = true;
  std::vector<std::pair<int, OverlapPair>> overlaps;  // (frame, pair)
  std::vector<int> invalid_frames;
  std::vector<std::pair<int, ExpansionReport>> non_expansive;  // (frame k, report for k -> k+1)
  std::vector<int> subdivide;  // frames k whose step k -> k+1 should be refined
  double min_separation = 1e300;
  int first_bad_frame() const;
};

GuardReport guard_trajectory(const AdornedChain& chain, const Trajectory& t, const Tolerance& tol = {},
                             double expansion_eps = 1e-7);

Trajectory reconfigure(const AdornedChain& chain, const Configuration& from, const Configuration& to,
                       const UnfoldOptions& opts = {});

/// Straight-line interpolation of positions, each frame projected back onto the bar lengths.
Trajectory sweep(const AdornedChain& chain, const Configuration& from, const Configuration& to, int steps);

}  // namespace adorn
