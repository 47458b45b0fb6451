#include "adorn/unfold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "adorn/qp.hpp"

namespace adorn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void UnfoldOptions::check() const {
  if (!(dt_min > 0 && dt_min <= dt_init && dt_init <= dt_max))
    throw GeometryError("need 0 < dt_min <= dt_init <= dt_max");
  if (max_steps < 1) throw GeometryError("max_steps must be positive");
  if (!(straightness_tol > 0)) throw GeometryError("straightness_tol must be positive");
  if (!(strut_floor >= 0)) throw GeometryError("strut_floor must be nonnegative");
  tol.check();
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::straight: return "straight";
    case Termination::convex: return "convex";
    case Termination::max_steps: return "max_steps";
    case Termination::stalled: return "stalled";
    case Termination::none: return "none";
  }
  return "unknown";
}

namespace {

// Vertices must be numbered along the chain.
void require_chain_order(const AdornedChain& ch) {
  ch.check_structure();
  const int n = ch.n_vertices;
  for (size_t e = 0; e < ch.n_edges(); ++e) {
    auto [i, j] = ch.edges[e];
    int k = static_cast<int>(e);
    bool ok = (i == k && j == (k + 1) % n) || (j == k && i == (k + 1) % n);
    if (!ok) throw GeometryError("edge " + std::to_string(e) + " does not join consecutive vertices");
  }
}

std::vector<bool> joint_mask(const AdornedChain& ch) {
  std::vector<bool> joint(ch.n_vertices, true);
  if (!ch.closed) {
    joint.front() = false;
    joint.back() = false;
  }
  return joint;
}

// Maximal vertex runs held rigid by frozen joints; consecutive runs share endpoints.
std::vector<std::vector<int>> make_runs(const AdornedChain& ch, const std::vector<bool>& frozen) {
  const int n = ch.n_vertices;
  std::vector<std::vector<int>> runs;
  if (!ch.closed) {
    std::vector<int> cur{0};
    for (int v = 1; v < n; ++v) {
      cur.push_back(v);
      if (v == n - 1 || !frozen[v]) {
        runs.push_back(cur);
        cur = {v};
      }
    }
    return runs;
  }
  int s = -1;
  for (int v = 0; v < n; ++v)
    if (!frozen[v]) {
      s = v;
      break;
    }
  if (s < 0) throw GeometryError("every joint of the closed chain is frozen");
  std::vector<int> cur{s};
  for (int k = 1; k <= n; ++k) {
    int v = (s + k) % n;
    cur.push_back(v);
    if (!frozen[v]) {
      runs.push_back(cur);
      cur = {v};
    }
  }
  return runs;
}

double edge_length(const AdornedChain& ch, int a, int b) {
  const int n = ch.n_vertices;
  int e = ((a + 1) % n == b) ? a : b;
  return ch.rest_lengths[e];
}

// Cumulative rest-length fractions along a run.
std::vector<double> run_params(const AdornedChain& ch, const std::vector<int>& run, double* total) {
  std::vector<double> s{0.0};
  for (size_t k = 1; k < run.size(); ++k) s.push_back(s.back() + edge_length(ch, run[k - 1], run[k]));
  *total = s.back();
  for (double& x : s) x /= *total;
  return s;
}

double min_base_separation(const AdornedChain& ch, const Configuration& c) {
  double best = 1e300;
  const int m = static_cast<int>(ch.n_edges());
  for (int e1 = 0; e1 < m; ++e1)
    for (int e2 = e1 + 1; e2 < m; ++e2) {
      if (ch.adjacent(e1, e2)) continue;
      auto [a, b] = ch.edges[e1];
      auto [p, q] = ch.edges[e2];
      best = std::min(best, prim_prim_distance(Segment{c[a], c[b]}, Segment{c[p], c[q]}));
    }
  return best;
}

bool all_bare(const AdornedChain& ch) {
  for (const Adornment& a : ch.adornments)
    if (!a.is_bare()) return false;
  return true;
}

double min_adornment_separation(const AdornedChain& ch, const Configuration& c, double cutoff) {
  const int m = static_cast<int>(ch.n_edges());
  std::vector<Region> regions;
  for (int e = 0; e < m; ++e) regions.push_back(ch.region_at(e, c));
  double best = 1e300;
  for (int e1 = 0; e1 < m; ++e1)
    for (int e2 = e1 + 1; e2 < m; ++e2)
      if (!ch.adjacent(e1, e2)) best = std::min(best, separation_bounded(regions[e1], regions[e2], cutoff));
  return best;
}

// Rate of change of the turn angle at joint k.
double turn_rate(const AdornedChain& ch, const Configuration& c, const std::vector<Point2>& v, int k) {
  const int n = ch.n_vertices;
  int a = (k - 1 + n) % n, b = (k + 1) % n;
  Point2 d1 = c[k] - c[a], d2 = c[b] - c[k];
  Point2 w1 = v[k] - v[a], w2 = v[b] - v[k];
  return cross(d2, w2) / dot(d2, d2) - cross(d1, w1) / dot(d1, d1);
}

}  // namespace

std::vector<double> turn_angles(const AdornedChain& chain, const Configuration& c) {
  const int n = chain.n_vertices;
  std::vector<double> t(n, 0.0);
  std::vector<bool> joint = joint_mask(chain);
  for (int k = 0; k < n; ++k) {
    if (!joint[k]) continue;
    Point2 d1 = c[k] - c[(k - 1 + n) % n], d2 = c[(k + 1) % n] - c[k];
    t[k] = std::atan2(cross(d1, d2), dot(d1, d2));
  }
  return t;
}

bool is_straight(const AdornedChain& chain, const Configuration& c, double tol) {
  if (chain.closed) return false;
  for (double t : turn_angles(chain, c))
    if (std::fabs(t) >= tol) return false;
  return true;
}

bool is_convex(const AdornedChain& chain, const Configuration& c, double tol) {
  if (!chain.closed) return false;
  int pos = 0, neg = 0;
  double total = 0.0;
  for (double t : turn_angles(chain, c)) {
    total += t;
    if (t > tol) ++pos;
    if (t < -tol) ++neg;
  }
  return (pos == 0 || neg == 0) && std::fabs(std::fabs(total) - 2 * M_PI) < 1e-6;
}

MotionStep expansive_velocity(const AdornedChain& chain, const Configuration& c, const std::vector<bool>& frozen,
                              const UnfoldOptions& opts) {
  require_chain_order(chain);
  const int n = chain.n_vertices;
  if (static_cast<int>(c.size()) != n) throw GeometryError("configuration size does not match the chain");
  if (static_cast<int>(frozen.size()) != n) throw GeometryError("frozen mask size does not match the chain");
  MotionStep step;
  step.velocities.assign(n, Point2{});
  if ((!chain.closed && is_straight(chain, c, opts.straightness_tol)) ||
      (chain.closed && is_convex(chain, c, opts.straightness_tol)) || n <= 2) {
    step.terminal = true;
    return step;
  }
  double sep = min_base_separation(chain, c);
  if (!(sep > opts.strut_floor)) {
    std::ostringstream os;
    os << "configuration is not strictly simple (base separation " << sep << ")";
    throw GeometryError(os.str());
  }

  std::vector<std::vector<int>> runs = make_runs(chain, frozen);
  std::vector<std::vector<bool>> same(n, std::vector<bool>(n, false));
  for (const auto& r : runs)
    for (int a : r)
      for (int b : r) same[a][b] = true;

  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  auto row = [&]() { return std::vector<double>(2 * n, 0.0); };
  for (const auto& r : runs) {
    int a = r.front(), b = r.back();
    double total = 0;
    std::vector<double> s = run_params(chain, r, &total);
    Point2 d = c[a] - c[b];
    std::vector<double> q = row();
    q[2 * a] += d.x;
    q[2 * a + 1] += d.y;
    q[2 * b] -= d.x;
    q[2 * b + 1] -= d.y;
    eq_rows.push_back(q);
    eq_rhs.push_back(0.0);
    for (size_t k = 1; k + 1 < r.size(); ++k)
      for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> z = row();
        z[2 * r[k] + axis] = 1.0;
        z[2 * a + axis] -= 1.0 - s[k];
        z[2 * b + axis] -= s[k];
        eq_rows.push_back(z);
        eq_rhs.push_back(0.0);
      }
  }
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> z = row();
    z[axis] = 1.0;
    eq_rows.push_back(z);
    eq_rhs.push_back(0.0);
  }
  {
    Point2 w = perp(c[1] - c[0]);
    std::vector<double> z = row();
    z[2] = w.x;
    z[3] = w.y;
    z[0] = -w.x;
    z[1] = -w.y;
    eq_rows.push_back(z);
    eq_rhs.push_back(0.0);
  }

  std::vector<std::pair<int, int>> pairs;
  std::vector<double> targets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (same[i][j]) continue;
      double d = dist(c[i], c[j]);
      pairs.emplace_back(i, j);
      targets.push_back(std::min(1.0, d - opts.strut_floor));
    }

  QpProblem qp;
  qp.G = MatrixXd::Identity(2 * n, 2 * n);
  qp.Aeq.resize(static_cast<int>(eq_rows.size()), 2 * n);
  qp.beq.resize(static_cast<int>(eq_rows.size()));
  for (size_t r = 0; r < eq_rows.size(); ++r) {
    for (int k = 0; k < 2 * n; ++k) qp.Aeq(r, k) = eq_rows[r][k];
    qp.beq[r] = eq_rhs[r];
  }
  qp.Ain = MatrixXd::Zero(static_cast<int>(pairs.size()), 2 * n);
  qp.bin.resize(static_cast<int>(pairs.size()));
  for (size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    Point2 u = unit(c[i] - c[j]);
    qp.Ain(r, 2 * i) = u.x;
    qp.Ain(r, 2 * i + 1) = u.y;
    qp.Ain(r, 2 * j) = -u.x;
    qp.Ain(r, 2 * j + 1) = -u.y;
    qp.bin[r] = targets[r];
  }
  QpResult res = solve_qp(qp);
  if (!res.feasible) {
    std::ostringstream os;
    os << "expansion QP infeasible (" << res.message << "); active pairs:";
    for (int a : res.active)
      if (a >= 0 && a < static_cast<int>(pairs.size())) os << " (" << pairs[a].first << "," << pairs[a].second << ")";
    throw GeometryError(os.str());
  }
  double vmax = 0.0;
  for (int i = 0; i < n; ++i) vmax = std::max(vmax, std::hypot(res.x[2 * i], res.x[2 * i + 1]));
  if (!(vmax > 0)) throw GeometryError("expansion QP returned a zero velocity away from a terminal state");
  for (int i = 0; i < n; ++i) step.velocities[i] = Point2{res.x[2 * i], res.x[2 * i + 1]} / vmax;
  step.margin = 1.0 / vmax;
  for (int a : res.active) step.active.push_back(a);
  return step;
}

MotionStep expansive_velocity(const AdornedChain& chain, const Configuration& c, const UnfoldOptions& opts) {
  std::vector<bool> frozen(chain.n_vertices, false);
  std::vector<double> t = turn_angles(chain, c);
  std::vector<bool> joint = joint_mask(chain);
  for (int k = 0; k < chain.n_vertices; ++k) frozen[k] = joint[k] && std::fabs(t[k]) < 1e-9;
  return expansive_velocity(chain, c, frozen, opts);
}

Configuration project_lengths(const AdornedChain& chain, const Configuration& c, const std::vector<bool>& frozen) {
  const int n = chain.n_vertices;
  std::vector<std::vector<int>> runs = make_runs(chain, frozen);
  double scale = 0;
  for (double L : chain.rest_lengths) scale = std::max(scale, L);
  Configuration out = c;
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<std::vector<double>> rows;
    std::vector<double> resid;
    double worst = 0.0;
    for (const auto& r : runs) {
      int a = r.front(), b = r.back();
      double total = 0;
      std::vector<double> s = run_params(chain, r, &total);
      Point2 d = out[a] - out[b];
      double len = norm(d);
      Point2 u = d / len;
      std::vector<double> q(2 * n, 0.0);
      q[2 * a] = u.x;
      q[2 * a + 1] = u.y;
      q[2 * b] = -u.x;
      q[2 * b + 1] = -u.y;
      rows.push_back(q);
      resid.push_back(len - total);
      worst = std::max(worst, std::fabs(len - total));
      for (size_t k = 1; k + 1 < r.size(); ++k) {
        Point2 target = out[a] * (1.0 - s[k]) + out[b] * s[k];
        Point2 e = out[r[k]] - target;
        worst = std::max(worst, norm(e));
        for (int axis = 0; axis < 2; ++axis) {
          std::vector<double> z(2 * n, 0.0);
          z[2 * r[k] + axis] = 1.0;
          z[2 * a + axis] = -(1.0 - s[k]);
          z[2 * b + axis] = -s[k];
          rows.push_back(z);
          resid.push_back(axis == 0 ? e.x : e.y);
        }
      }
    }
    if (worst <= 1e-14 * std::max(1.0, scale)) break;
    MatrixXd J(static_cast<int>(rows.size()), 2 * n);
    VectorXd r(static_cast<int>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
      for (int k = 0; k < 2 * n; ++k) J(i, k) = rows[i][k];
      r[i] = resid[i];
    }
    VectorXd delta = J.completeOrthogonalDecomposition().solve(-r);
    for (int i = 0; i < n; ++i) out.positions[i] = out[i] + Point2{delta[2 * i], delta[2 * i + 1]};
  }
  return out;
}

Trajectory integrate(const AdornedChain& chain, const Configuration& c0, const UnfoldOptions& opts) {
  opts.check();
  require_chain_order(chain);
  OverlapReport v0 = validate(chain, c0, opts.tol);
  if (!v0.clean) {
    std::string why = v0.issues.empty() ? "adornments overlap" : v0.issues.front();
    throw GeometryError("initial configuration is not clean: " + why);
  }
  const int n = chain.n_vertices;
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.frames.push_back(c0);

  std::vector<bool> joint = joint_mask(chain);
  std::vector<bool> frozen(n, false);
  {
    std::vector<double> t = turn_angles(chain, c0);
    for (int k = 0; k < n; ++k) frozen[k] = joint[k] && std::fabs(t[k]) < 1e-9;
  }
  const bool bare = all_bare(chain);
  double dt = opts.dt_init;
  double time = 0.0;
  Configuration c = c0;

  for (int step_no = 0;; ++step_no) {
    if (!chain.closed && is_straight(chain, c, opts.straightness_tol)) {
      traj.termination = Termination::straight;
      return traj;
    }
    if (chain.closed && is_convex(chain, c, opts.straightness_tol)) {
      traj.termination = Termination::convex;
      return traj;
    }
    if (step_no >= opts.max_steps) {
      traj.termination = Termination::max_steps;
      traj.message = "step limit reached";
      return traj;
    }
    MotionStep ms;
    try {
      ms = expansive_velocity(chain, c, frozen, opts);
    } catch (const GeometryError& e) {
      traj.termination = Termination::stalled;
      traj.message = e.what();
      return traj;
    }
    if (ms.margin < 1e-12) {
      traj.termination = Termination::stalled;
      traj.message = "expansion margin below 1e-12";
      return traj;
    }

    double limit = opts.dt_max;
    double bsep = min_base_separation(chain, c);
    limit = std::min(limit, std::max(bsep / 4, opts.dt_min));
    if (!bare) {
      double asep = min_adornment_separation(chain, c, 8 * opts.dt_max);
      if (asep > opts.tol.eps_overlap) limit = std::min(limit, std::max(asep / 8, 1e-4));
    }
    dt = std::min(dt, limit);

    // Earliest joint predicted to reach straight.
    double t_land = 1e300;
    for (int k = 0; k < n; ++k) {
      if (!joint[k] || frozen[k]) continue;
      double th = turn_angles(chain, c)[k];
      double rate = turn_rate(chain, c, ms.velocities, k);
      if (th * rate < 0) t_land = std::min(t_land, -th / rate);
    }

    bool accepted = false;
    while (!accepted) {
      if (dt < opts.dt_min) {
        traj.termination = Termination::stalled;
        traj.message = "step size fell below dt_min";
        return traj;
      }
      bool landing = t_land <= dt;
      double h = landing ? t_land : dt;
      Configuration next = c;
      for (int i = 0; i < n; ++i) next.positions[i] = c[i] + ms.velocities[i] * h;
      std::vector<bool> fz = frozen;
      std::vector<double> th = turn_angles(chain, next);
      for (int k = 0; k < n; ++k) {
        if (!joint[k] || fz[k]) continue;
        if (std::fabs(th[k]) < 1e-9) fz[k] = true;
        if (landing) {
          double r0 = turn_rate(chain, c, ms.velocities, k);
          double th0 = turn_angles(chain, c)[k];
          if (th0 * r0 < 0 && -th0 / r0 <= t_land * (1 + 1e-6)) fz[k] = true;
        }
      }
      next = project_lengths(chain, next, fz);
      bool ok = is_expansion(c, next, 1e-9).is_expansion && min_base_separation(chain, next) > opts.strut_floor;
      if (ok) {
        std::vector<double> before = turn_angles(chain, c), after = turn_angles(chain, next);
        for (int k = 0; k < n; ++k)
          if (joint[k] && !fz[k] && before[k] * after[k] <= 0) ok = false;
      }
      if (ok) {
        c = next;
        frozen = fz;
        time += h;
        traj.times.push_back(time);
        traj.frames.push_back(c);
        accepted = true;
        if (!landing) dt = std::min(dt * 1.5, opts.dt_max);
      } else if (landing) {
        dt = t_land / 2;
        t_land = 1e300;
      } else {
        dt /= 2;
      }
    }
  }
}

int GuardReport::first_bad_frame() const {
  int best = -1;
  for (auto& [k, o] : overlaps)
    if (best < 0 || k < best) best = k;
  for (int k : invalid_frames)
    if (best < 0 || k < best) best = k;
  return best;
}

GuardReport guard_trajectory(const AdornedChain& chain, const Trajectory& t, const Tolerance& tol,
                             double expansion_eps) {
  GuardReport g;
  double prev_sep = 1e300;
  for (size_t k = 0; k < t.frames.size(); ++k) {
    const Configuration& c = t.frames[k];
    OverlapReport r = validate(chain, c, tol);
    for (const OverlapPair& o : r.overlaps) g.overlaps.emplace_back(static_cast<int>(k), o);
    if (!r.issues.empty()) g.invalid_frames.push_back(static_cast<int>(k));
    g.min_separation = std::min(g.min_separation, r.min_nonadjacent_separation);
    if (k > 0) {
      const Configuration& p = t.frames[k - 1];
      ExpansionReport e = is_expansion(p, c, expansion_eps);
      if (!e.is_expansion) g.non_expansive.emplace_back(static_cast<int>(k - 1), e);
      double disp = 0;
      for (size_t i = 0; i < c.size(); ++i) disp = std::max(disp, dist(p[i], c[i]));
      if (prev_sep > tol.eps_overlap && prev_sep < 1e299 && disp > 0.5 * prev_sep)
        g.subdivide.push_back(static_cast<int>(k - 1));
    }
    prev_sep = r.min_nonadjacent_separation;
  }
  g.clean = g.overlaps.empty() && g.invalid_frames.empty();
  return g;
}

Trajectory reconfigure(const AdornedChain& chain, const Configuration& from, const Configuration& to,
                       const UnfoldOptions& opts) {
  if (chain.closed) throw GeometryError("reconfigure needs an open chain");
  Trajectory a = integrate(chain, from, opts);
  Trajectory b = integrate(chain, to, opts);
  if (a.termination != Termination::straight || b.termination != Termination::straight)
    throw GeometryError("could not straighten both configurations: " +
                        (a.termination != Termination::straight ? a.message : b.message));
  Trajectory out = a;
  const Configuration& s0 = a.frames.back();
  const Configuration& s1 = b.frames.back();
  const int n = chain.n_vertices;
  Point2 u0 = unit(s0[n - 1] - s0[0]), u1 = unit(s1[n - 1] - s1[0]);
  double phi = std::atan2(cross(u0, u1), dot(u0, u1));
  double total = 0;
  for (double L : chain.rest_lengths) total += L;
  double travel = std::fabs(phi) * total + dist(s0[0], s1[0]);
  int nb = static_cast<int>(std::ceil(travel / opts.dt_max));
  double time = out.times.back();
  for (int k = 1; k <= nb; ++k) {
    double s = static_cast<double>(k) / nb;
    Point2 base = s0[0] * (1 - s) + s1[0] * s;
    double ang = phi * s;
    Configuration c = s0;
    for (int i = 0; i < n; ++i) {
      Point2 d = s0[i] - s0[0];
      c.positions[i] = base + Point2{std::cos(ang) * d.x - std::sin(ang) * d.y, std::sin(ang) * d.x + std::cos(ang) * d.y};
    }
    time += opts.dt_max;
    out.times.push_back(time);
    out.frames.push_back(c);
  }
  if (nb > 0) out.frames.back() = s1;
  for (int k = static_cast<int>(b.frames.size()) - 2; k >= 0; --k) {
    time += b.times[k + 1] - b.times[k];
    out.times.push_back(time);
    out.frames.push_back(b.frames[k]);
  }
  out.termination = Termination::none;
  out.message.clear();
  return out;
}

Trajectory sweep(const AdornedChain& chain, const Configuration& from, const Configuration& to, int steps) {
  if (steps < 1) throw GeometryError("sweep needs at least one step");
  if (from.size() != to.size()) throw GeometryError("configurations have different vertex counts");
  require_chain_order(chain);
  std::vector<bool> none(chain.n_vertices, false);
  Trajectory t;
  for (int k = 0; k <= steps; ++k) {
    double s = static_cast<double>(k) / steps;
    Configuration c = from;
    for (size_t i = 0; i < c.size(); ++i) c.positions[i] = from[i] * (1 - s) + to[i] * s;
    if (k > 0 && k < steps) c = project_lengths(chain, c, none);
    if (k == steps) c = to;
    t.times.push_back(s);
    t.frames.push_back(c);
  }
  return t;
}

}  // namespace adorn
