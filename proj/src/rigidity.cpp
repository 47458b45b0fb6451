#include "adorn/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "adorn/qp.hpp"

namespace adorn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int SelfTouchingLinkage::add_vertex(Point2 p, const std::string& label) {
  vertices.push_back(p);
  labels.push_back(label.empty() ? "v" + std::to_string(vertices.size() - 1) : label);
  return n() - 1;
}

int SelfTouchingLinkage::add_bar(int i, int j) {
  if (i < 0 || j < 0 || i >= n() || j >= n() || i == j) throw GeometryError("bar endpoints out of range");
  bars.emplace_back(i, j);
  rest_lengths.push_back(dist(vertices[i], vertices[j]));
  return static_cast<int>(bars.size()) - 1;
}

void SelfTouchingLinkage::add_wedge(int u, int v, int w1, int w2) {
  double s = cross(vertices[w1] - vertices[v], vertices[w2] - vertices[v]);
  if (s == 0.0) throw GeometryError("wedge bars are collinear");
  int side = s > 0 ? 1 : -1;
  connections.push_back({u, v, w1, side});
  connections.push_back({u, v, w2, -side});
}

int SelfTouchingLinkage::vertex(const std::string& label) const {
  for (int i = 0; i < n(); ++i)
    if (labels[i] == label) return i;
  throw GeometryError("no vertex labelled '" + label + "'");
}

int SelfTouchingLinkage::bar_between(int i, int j) const {
  for (size_t b = 0; b < bars.size(); ++b)
    if ((bars[b].first == i && bars[b].second == j) || (bars[b].first == j && bars[b].second == i))
      return static_cast<int>(b);
  return -1;
}

std::string SelfTouchingLinkage::name(int v) const {
  return v >= 0 && v < static_cast<int>(labels.size()) ? labels[v] : "v" + std::to_string(v);
}

Point2 SelfTouchingLinkage::normal(const Connection& c) const {
  return unit(perp(vertices[c.w] - vertices[c.v])) * static_cast<double>(c.side);
}

void SelfTouchingLinkage::check(const Tolerance& tol) const {
  if (labels.size() != vertices.size()) throw GeometryError("one label per vertex required");
  if (rest_lengths.size() != bars.size()) throw GeometryError("one rest length per bar required");
  for (const Point2& p : vertices)
    if (!is_finite(p)) throw GeometryError("vertex with non-finite coordinates");
  for (size_t b = 0; b < bars.size(); ++b) {
    auto [i, j] = bars[b];
    if (i < 0 || j < 0 || i >= n() || j >= n() || i == j) throw GeometryError("bar endpoints out of range");
    double len = dist(vertices[i], vertices[j]);
    if (len <= tol.eps_geom) throw GeometryError("bar " + std::to_string(b) + " has zero length");
    if (std::fabs(len - rest_lengths[b]) > 1e-9 * std::max(1.0, len))
      throw GeometryError("bar " + std::to_string(b) + " does not match its rest length");
  }
  for (const Connection& c : connections) {
    if (c.u < 0 || c.v < 0 || c.w < 0 || c.u >= n() || c.v >= n() || c.w >= n())
      throw GeometryError("connection vertex out of range");
    if (c.side != 1 && c.side != -1) throw GeometryError("connection side must be +1 or -1");
    if (bar_between(c.v, c.w) < 0)
      throw GeometryError("connection " + name(c.u) + " refers to missing bar " + name(c.v) + name(c.w));
    if (c.u == c.v) throw GeometryError("connection joins a vertex to itself");
  }
  for (auto [a, b] : pins)
    if (a < 0 || b < 0 || a >= n() || b >= n()) throw GeometryError("pin vertex out of range");
}

double equilibrium_residual(const SelfTouchingLinkage& l, const Stress& s) {
  if (s.omega_bar.size() != l.bars.size() || s.omega_conn.size() != l.connections.size())
    throw GeometryError("stress size does not match the linkage");
  std::vector<Point2> force(l.n());
  for (size_t b = 0; b < l.bars.size(); ++b) {
    auto [i, j] = l.bars[b];
    Point2 d = l.vertices[i] - l.vertices[j];
    force[i] += d * s.omega_bar[b];
    force[j] -= d * s.omega_bar[b];
  }
  for (size_t k = 0; k < l.connections.size(); ++k) {
    const Connection& c = l.connections[k];
    Point2 nrm = l.normal(c);
    force[c.u] += nrm * s.omega_conn[k];
    force[c.v] -= nrm * s.omega_conn[k];
  }
  double worst = 0.0;
  for (const Point2& f : force) worst = std::max(worst, norm(f));
  return worst;
}

MatrixXd rigidity_matrix(const SelfTouchingLinkage& l, bool treat_connections_as_pins) {
  std::set<std::pair<int, int>> pairs;
  if (treat_connections_as_pins) {
    for (const Connection& c : l.connections) pairs.insert(std::minmax(c.u, c.v));
    for (auto [a, b] : l.pins)
      if (a != b) pairs.insert(std::minmax(a, b));
  }
  MatrixXd R = MatrixXd::Zero(static_cast<int>(l.bars.size() + 2 * pairs.size()), 2 * l.n());
  int row = 0;
  for (auto [i, j] : l.bars) {
    Point2 d = l.vertices[i] - l.vertices[j];
    R(row, 2 * i) = d.x;
    R(row, 2 * i + 1) = d.y;
    R(row, 2 * j) = -d.x;
    R(row, 2 * j + 1) = -d.y;
    ++row;
  }
  for (auto [a, b] : pairs) {
    for (int axis = 0; axis < 2; ++axis) {
      R(row, 2 * a + axis) = 1.0;
      R(row, 2 * b + axis) = -1.0;
      ++row;
    }
  }
  return R;
}

MatrixXd connection_matrix(const SelfTouchingLinkage& l) {
  MatrixXd C = MatrixXd::Zero(static_cast<int>(l.connections.size()), 2 * l.n());
  for (size_t k = 0; k < l.connections.size(); ++k) {
    const Connection& c = l.connections[k];
    Point2 nrm = l.normal(c);
    int r = static_cast<int>(k);
    C(r, 2 * c.u) = nrm.x;
    C(r, 2 * c.u + 1) = nrm.y;
    C(r, 2 * c.v) -= nrm.x;
    C(r, 2 * c.v + 1) -= nrm.y;
  }
  return C;
}

int numerical_rank(const MatrixXd& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++r;
  return r;
}

bool is_infinitesimally_rigid(const SelfTouchingLinkage& l, bool pins) {
  if (l.n() < 2) return true;
  return numerical_rank(rigidity_matrix(l, pins)) == 2 * l.n() - 3;
}

StressResult find_stress(const SelfTouchingLinkage& l) {
  if (l.connections.empty()) throw GeometryError("linkage has no connections to stress");
  const int nb = static_cast<int>(l.bars.size()), nc = static_cast<int>(l.connections.size());
  MatrixXd rows(nb + nc, 2 * l.n());
  rows << rigidity_matrix(l, false), connection_matrix(l);
  QpProblem p;
  p.G = MatrixXd::Identity(nb + nc, nb + nc);
  p.Aeq = rows.transpose();
  p.beq = VectorXd::Zero(2 * l.n());
  p.Ain = MatrixXd::Zero(nc, nb + nc);
  for (int k = 0; k < nc; ++k) p.Ain(k, nb + k) = -1.0;
  p.bin = VectorXd::Ones(nc);
  QpResult r = solve_qp(p);
  StressResult out;
  out.feasible = r.feasible;
  out.message = r.feasible ? "stress found" : "no stress with all connection stresses negative: " + r.message;
  if (r.x.size() == nb + nc) {
    out.stress.omega_bar.assign(r.x.data(), r.x.data() + nb);
    out.stress.omega_conn.assign(r.x.data() + nb, r.x.data() + nb + nc);
  }
  return out;
}

InfinitesimalMotion find_infinitesimal_motion(const SelfTouchingLinkage& l, int pinned_bar) {
  if (pinned_bar < 0 || pinned_bar >= static_cast<int>(l.bars.size())) throw GeometryError("pinned bar out of range");
  const int N = 2 * l.n();
  auto [p0, p1] = l.bars[pinned_bar];
  MatrixXd R = rigidity_matrix(l, false);
  MatrixXd Aeq(R.rows() + 4, N);
  Aeq.topRows(R.rows()) = R;
  Aeq.bottomRows(4).setZero();
  Aeq(R.rows(), 2 * p0) = Aeq(R.rows() + 1, 2 * p0 + 1) = 1.0;
  Aeq(R.rows() + 2, 2 * p1) = Aeq(R.rows() + 3, 2 * p1 + 1) = 1.0;
  MatrixXd C = connection_matrix(l);

  InfinitesimalMotion out;
  for (int v = 0; v < l.n(); ++v) {
    if (v == p0 || v == p1) continue;
    for (int k = 0; k < 8; ++k) {
      Point2 d = polar(1.0, kTwoPi * k / 8);
      QpProblem p;
      p.G = MatrixXd::Identity(N, N);
      p.Aeq = Aeq;
      p.beq = VectorXd::Zero(Aeq.rows());
      p.Ain = MatrixXd::Zero(C.rows() + 1, N);
      p.Ain.topRows(C.rows()) = C;
      p.Ain(C.rows(), 2 * v) = d.x;
      p.Ain(C.rows(), 2 * v + 1) = d.y;
      p.bin = VectorXd::Zero(C.rows() + 1);
      p.bin[C.rows()] = 1.0;
      QpResult r = solve_qp(p);
      if (!r.feasible) continue;
      // Guard against a solver answer that violates the constraints.
      if ((Aeq * r.x).cwiseAbs().maxCoeff() > 1e-7 * (1.0 + r.x.norm())) continue;
      if (C.rows() > 0 && (C * r.x).minCoeff() < -1e-7 * (1.0 + r.x.norm())) continue;
      out.found = true;
      out.velocities.resize(l.n());
      for (int i = 0; i < l.n(); ++i) out.velocities[i] = {r.x[2 * i], r.x[2 * i + 1]};
      std::ostringstream s;
      s << "vertex " << l.name(v) << " can move toward (" << d.x << ", " << d.y << ") to first order";
      out.description = s.str();
      return out;
    }
  }
  out.description = "no first-order motion found";
  return out;
}

std::string to_string(Conclusion c) { return c == Conclusion::certified_rigid ? "certified_rigid" : "not_certified"; }

RigidityCertificate certify_rigid(const SelfTouchingLinkage& l) {
  l.check();
  RigidityCertificate cert;
  cert.required_rank = 2 * l.n() - 3;
  cert.pinned_rank = numerical_rank(rigidity_matrix(l, true));
  cert.pinned_rank_ok = cert.pinned_rank == cert.required_rank;
  if (!cert.pinned_rank_ok)
    cert.notes.push_back("framework with connections pinned has rank " + std::to_string(cert.pinned_rank) +
                         ", needs " + std::to_string(cert.required_rank));
  if (l.connections.empty()) {
    cert.notes.push_back("no connections");
    return cert;
  }
  StressResult s = find_stress(l);
  if (!s.feasible) {
    cert.notes.push_back(s.message);
    return cert;
  }
  cert.stress = s.stress;
  cert.equilibrium_residual = equilibrium_residual(l, s.stress);
  cert.max_conn_stress = *std::max_element(s.stress.omega_conn.begin(), s.stress.omega_conn.end());
  double scale = 1.0;
  for (double w : s.stress.omega_bar) scale = std::max(scale, std::fabs(w));
  bool ok = cert.equilibrium_residual <= 1e-9 * scale && cert.max_conn_stress <= -1.0 + 1e-9;
  if (!ok) cert.notes.push_back("stress check failed");
  if (ok && cert.pinned_rank_ok) cert.conclusion = Conclusion::certified_rigid;
  return cert;
}

bool verify_certificate(const SelfTouchingLinkage& l, const RigidityCertificate& c, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (c.conclusion != Conclusion::certified_rigid) return fail("certificate does not claim rigidity");
  if (!c.stress) return fail("certificate has no stress");
  if (c.stress->omega_bar.size() != l.bars.size() || c.stress->omega_conn.size() != l.connections.size())
    return fail("stress does not match the linkage");
  double scale = 1.0;
  for (double w : c.stress->omega_bar) scale = std::max(scale, std::fabs(w));
  if (equilibrium_residual(l, *c.stress) > 1e-9 * scale) return fail("stress is not in equilibrium");
  for (double w : c.stress->omega_conn)
    if (!(w < 0)) return fail("a connection stress is not negative");
  if (numerical_rank(rigidity_matrix(l, true)) != 2 * l.n() - 3) return fail("pinned framework is not rigid");
  return true;
}

std::string RigidityCertificate::to_text(const SelfTouchingLinkage& l) const {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "rigidity-certificate/1\n";
  o << "conclusion " << to_string(conclusion) << "\n";
  o << "vertices " << l.n() << "\n";
  for (int i = 0; i < l.n(); ++i) o << "  " << l.name(i) << " " << l.vertices[i].x << " " << l.vertices[i].y << "\n";
  for (const std::string& r : rule_chain) o << "rule " << r << "\n";
  o << "pinned_rank " << pinned_rank << " required " << required_rank << "\n";
  if (stress) {
    o << "bar_stress\n";
    for (size_t b = 0; b < l.bars.size(); ++b)
      o << "  " << l.name(l.bars[b].first) << l.name(l.bars[b].second) << " " << stress->omega_bar[b] << "\n";
    o << "connection_stress\n";
    for (size_t k = 0; k < l.connections.size(); ++k) {
      const Connection& c = l.connections[k];
      o << "  " << l.name(c.u) << " on " << (c.side > 0 ? "left" : "right") << " of " << l.name(c.v) << l.name(c.w)
        << " " << stress->omega_conn[k] << "\n";
    }
    o << "equilibrium_residual " << equilibrium_residual << "\n";
    o << "max_connection_stress " << max_conn_stress << "\n";
  }
  for (const std::string& n : notes) o << "note " << n << "\n";
  return o.str();
}

namespace {

constexpr double kRightAngle = 0.5 * kPi;

double angle_between(Point2 a, Point2 b) { return std::atan2(std::fabs(cross(a, b)), dot(a, b)); }

int sign_of(double v, double eps) { return v > eps ? 1 : (v < -eps ? -1 : 0); }

bool fail_with(std::string* why, const std::string& m) {
  if (why) *why = m;
  return false;
}

// Sides (relative to the directed line a->b) of the far endpoints of bars at `ends`, other than bar `skip`.
std::set<int> sides_of_other_bars(const SelfTouchingLinkage& l, const std::vector<int>& ends, int skip, Point2 a, Point2 b) {
  std::set<int> out;
  for (size_t k = 0; k < l.bars.size(); ++k) {
    if (static_cast<int>(k) == skip) continue;
    auto [i, j] = l.bars[k];
    for (int e : ends) {
      int far = i == e ? j : (j == e ? i : -1);
      if (far < 0) continue;
      int s = sign_of(cross(b - a, l.vertices[far] - a), 1e-12 * std::max(1.0, dist(a, b)));
      if (s != 0) out.insert(s);
    }
  }
  return out;
}

}  // namespace

SelfTouchingLinkage merge_vertices(const SelfTouchingLinkage& l, int keep, int drop) {
  if (keep < 0 || drop < 0 || keep >= l.n() || drop >= l.n() || keep == drop) throw GeometryError("bad vertex merge");
  auto map = [&](int i) {
    if (i == drop) i = keep;
    return i > drop ? i - 1 : i;
  };
  SelfTouchingLinkage out;
  for (int i = 0; i < l.n(); ++i) {
    if (i == drop) continue;
    out.vertices.push_back(l.vertices[i]);
    out.labels.push_back(l.labels[i]);
  }
  for (size_t b = 0; b < l.bars.size(); ++b) {
    int i = map(l.bars[b].first), j = map(l.bars[b].second);
    if (i == j || out.bar_between(i, j) >= 0) continue;
    out.bars.emplace_back(i, j);
    out.rest_lengths.push_back(l.rest_lengths[b]);
  }
  for (const Connection& c : l.connections) {
    Connection m{map(c.u), map(c.v), map(c.w), c.side};
    if (m.u == m.v || m.v == m.w || m.u == m.w || out.bar_between(m.v, m.w) < 0) continue;
    bool dup = false;
    for (const Connection& o : out.connections)
      dup = dup || (o.u == m.u && o.v == m.v && o.w == m.w && o.side == m.side);
    if (!dup) out.connections.push_back(m);
  }
  for (auto [a, b] : l.pins) {
    int ma = map(a), mb = map(b);
    std::pair<int, int> p{std::min(ma, mb), std::max(ma, mb)};
    if (p.first != p.second && std::find(out.pins.begin(), out.pins.end(), p) == out.pins.end()) out.pins.push_back(p);
  }
  return out;
}

bool applicable_rule1(const SelfTouchingLinkage& l, int b, int b_prime, std::string* why) {
  const int nb = static_cast<int>(l.bars.size());
  if (b < 0 || b_prime < 0 || b >= nb || b_prime >= nb || b == b_prime) return fail_with(why, "bar index out of range");
  auto [p, q] = l.bars[b];
  auto [p2, q2] = l.bars[b_prime];
  if (p == p2 || p == q2 || q == p2 || q == q2) return fail_with(why, "bars share an endpoint");
  const double eps = 1e-9 * std::max(1.0, l.rest_lengths[b_prime]);
  if (std::fabs(l.rest_lengths[b] - l.rest_lengths[b_prime]) > eps) return fail_with(why, "bars differ in length");
  if (dist(l.vertices[p], l.vertices[q2]) <= eps && dist(l.vertices[q], l.vertices[p2]) <= eps) std::swap(p2, q2);
  if (dist(l.vertices[p], l.vertices[p2]) > eps || dist(l.vertices[q], l.vertices[q2]) > eps)
    return fail_with(why, "bars are not collocated");
  Point2 a = l.vertices[p2], c = l.vertices[q2];
  std::set<int> sides = sides_of_other_bars(l, {p, q}, b, a, c);
  if (sides.size() != 1) return fail_with(why, "side of the bar is not determined");
  const int side = *sides.begin();
  for (auto [e, o] : {std::pair{p2, q2}, std::pair{q2, p2}}) {
    bool blocked = false;
    for (size_t k = 0; k < l.bars.size() && !blocked; ++k) {
      if (static_cast<int>(k) == b_prime || static_cast<int>(k) == b) continue;
      auto [i, j] = l.bars[k];
      int w = i == e ? j : (j == e ? i : -1);
      if (w < 0) continue;
      Point2 dw = l.vertices[w] - l.vertices[e];
      blocked = sign_of(cross(c - a, l.vertices[w] - a), 1e-12) == side &&
                angle_between(l.vertices[o] - l.vertices[e], dw) < kRightAngle - 1e-12;
    }
    if (!blocked) return fail_with(why, "no acute bar at " + l.name(e) + " on the side of the bar");
  }
  return true;
}

SelfTouchingLinkage apply_rule1(const SelfTouchingLinkage& l, int b, int b_prime) {
  std::string why;
  if (!applicable_rule1(l, b, b_prime, &why)) throw GeometryError("rule 1 does not apply: " + why);
  auto [p, q] = l.bars[b];
  auto [p2, q2] = l.bars[b_prime];
  if (dist(l.vertices[p], l.vertices[p2]) > dist(l.vertices[p], l.vertices[q2])) std::swap(p2, q2);
  const std::string lq = l.labels[q], lq2 = l.labels[q2];
  SelfTouchingLinkage m = merge_vertices(l, p2, p);
  return merge_vertices(m, m.vertex(lq2), m.vertex(lq));
}

bool applicable_rule2(const SelfTouchingLinkage& l, int b, int b_prime, int b_second, std::string* why) {
  const int nb = static_cast<int>(l.bars.size());
  for (int k : {b, b_prime, b_second})
    if (k < 0 || k >= nb) return fail_with(why, "bar index out of range");
  if (b == b_prime || b == b_second || b_prime == b_second) return fail_with(why, "bars must be distinct");
  auto [b0, b1] = l.bars[b];
  auto [c0, c1] = l.bars[b_prime];
  int h = (b0 == c0 || b0 == c1) ? b0 : ((b1 == c0 || b1 == c1) ? b1 : -1);
  if (h < 0) return fail_with(why, "bars do not share a vertex");
  int p = b0 == h ? b1 : b0, q = c0 == h ? c1 : c0;
  const double eps = 1e-9 * std::max(1.0, l.rest_lengths[b_prime]);
  if (std::fabs(l.rest_lengths[b] - l.rest_lengths[b_prime]) > eps) return fail_with(why, "bars differ in length");
  if (dist(l.vertices[p], l.vertices[q]) > eps) return fail_with(why, "free ends are not collocated");
  auto [s0, s1] = l.bars[b_second];
  if (s0 != q && s1 != q) return fail_with(why, "third bar is not incident to " + l.name(q));
  int r = s0 == q ? s1 : s0;
  if (r == h || r == p) return fail_with(why, "third bar folds back onto the pair");
  Point2 H = l.vertices[h], Q = l.vertices[q];
  if (angle_between(H - Q, l.vertices[r] - Q) >= kRightAngle - 1e-12) return fail_with(why, "angle is not acute");
  int side = sign_of(cross(Q - H, l.vertices[r] - H), 1e-12);
  if (side == 0) return fail_with(why, "third bar is collinear with the pair");
  std::set<int> sides = sides_of_other_bars(l, {p}, b, H, Q);
  if (sides.size() > 1 || (sides.size() == 1 && *sides.begin() != side))
    return fail_with(why, "the angle does not surround the bar");
  return true;
}

SelfTouchingLinkage apply_rule2(const SelfTouchingLinkage& l, int b, int b_prime, int b_second) {
  std::string why;
  if (!applicable_rule2(l, b, b_prime, b_second, &why)) throw GeometryError("rule 2 does not apply: " + why);
  auto [b0, b1] = l.bars[b];
  auto [c0, c1] = l.bars[b_prime];
  int h = (b0 == c0 || b0 == c1) ? b0 : b1;
  int p = b0 == h ? b1 : b0, q = c0 == h ? c1 : c0;
  return merge_vertices(l, q, p);
}

SimplifyResult simplify(const SelfTouchingLinkage& l, const std::vector<RuleStep>& steps) {
  SimplifyResult out{l, {}};
  auto bar = [&](const std::pair<std::string, std::string>& e) {
    int k = out.linkage.bar_between(out.linkage.vertex(e.first), out.linkage.vertex(e.second));
    if (k < 0) throw GeometryError("no bar " + e.first + e.second);
    return k;
  };
  for (const RuleStep& s : steps) {
    std::string text;
    if (s.rule == 1) {
      out.linkage = apply_rule1(out.linkage, bar(s.b), bar(s.b_prime));
      text = "1 b=" + s.b.first + s.b.second + " b'=" + s.b_prime.first + s.b_prime.second;
    } else if (s.rule == 2) {
      out.linkage = apply_rule2(out.linkage, bar(s.b), bar(s.b_prime), bar(s.b_second));
      text = "2 b=" + s.b.first + s.b.second + " b'=" + s.b_prime.first + s.b_prime.second +
             " b''=" + s.b_second.first + s.b_second.second;
    } else {
      throw GeometryError("unknown rule " + std::to_string(s.rule));
    }
    out.log.push_back(text);
  }
  return out;
}

bool cauchy_arm_check(const std::vector<Point2>& chain, const std::vector<double>& angle_deltas, int increments) {
  const int k = static_cast<int>(chain.size()) - 1;
  if (k < 2) throw GeometryError("arm needs at least two bars");
  if (static_cast<int>(angle_deltas.size()) != k - 1) throw GeometryError("one angle change per interior joint");
  if (increments < 1) throw GeometryError("increments must be positive");
  std::vector<double> len(k), turn(k - 1);
  for (int i = 0; i < k; ++i) {
    len[i] = dist(chain[i], chain[i + 1]);
    if (len[i] <= 0) throw GeometryError("arm has a zero-length bar");
  }
  int sign = 0;
  double total = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    Point2 d0 = chain[i + 1] - chain[i], d1 = chain[i + 2] - chain[i + 1];
    turn[i] = std::atan2(cross(d0, d1), dot(d0, d1));
    int s = sign_of(turn[i], 1e-12);
    if (s != 0 && sign != 0 && s != sign) throw GeometryError("arm is not convex");
    if (s != 0) sign = s;
    total += std::fabs(turn[i]);
  }
  if (total >= kPi) throw GeometryError("arm is not convex");
  for (int i = 0; i + 1 < k; ++i) {
    if (angle_deltas[i] < 0) throw GeometryError("angle changes must open the arm");
    if (angle_deltas[i] > std::fabs(turn[i]) + 1e-15) throw GeometryError("angle change opens past straight");
  }
  double heading0 = std::atan2(chain[1].y - chain[0].y, chain[1].x - chain[0].x);
  auto reach = [&](double t) {
    Point2 p = chain[0];
    double h = heading0;
    for (int i = 0; i < k; ++i) {
      if (i > 0) h += sign * (std::fabs(turn[i - 1]) - t * angle_deltas[i - 1]);
      p += polar(len[i], h);
    }
    return dist(p, chain[0]);
  };
  double scale = 0.0;
  for (double L : len) scale += L;
  double prev = reach(0.0);
  for (int m = 1; m <= increments; ++m) {
    double d = reach(static_cast<double>(m) / increments);
    if (d < prev - 1e-12 * scale) return false;
    prev = d;
  }
  return true;
}

SelfTouchingLinkage perturb(const SelfTouchingLinkage& l, double delta) {
  if (!(delta > 0)) throw GeometryError("perturbation must be positive");
  std::map<int, Point2> push;
  for (const Connection& c : l.connections) push[c.u] += l.normal(c);
  SelfTouchingLinkage out = l;
  for (auto [u, d] : push) out.vertices[u] += unit(d) * delta;
  for (size_t b = 0; b < out.bars.size(); ++b)
    out.rest_lengths[b] = dist(out.vertices[out.bars[b].first], out.vertices[out.bars[b].second]);
  out.pins.clear();
  return out;
}

namespace {

// Signed distance of u from the line through v, w on the allowed side, and its gradient.
double side_distance(const std::vector<Point2>& x, const Connection& c, Point2 grad[3]) {
  Point2 e = x[c.w] - x[c.v], r = x[c.u] - x[c.v];
  double L = norm(e), cr = cross(e, r), s = c.side;
  grad[0] = perp(e) * (s / L);
  grad[2] = (-perp(r) / L - e * (cr / (L * L * L))) * s;
  grad[1] = -(grad[0] + grad[2]);
  return s * cr / L;
}

bool project_bars(const SelfTouchingLinkage& l, std::vector<Point2>& x, const std::vector<bool>& fixed) {
  const int nb = static_cast<int>(l.bars.size());
  for (int it = 0; it < 20; ++it) {
    VectorXd r(nb);
    MatrixXd J = MatrixXd::Zero(nb, 2 * l.n());
    double worst = 0.0;
    for (int b = 0; b < nb; ++b) {
      auto [i, j] = l.bars[b];
      Point2 d = x[i] - x[j];
      r[b] = 0.5 * (dot(d, d) - l.rest_lengths[b] * l.rest_lengths[b]);
      worst = std::max(worst, std::fabs(norm(d) - l.rest_lengths[b]));
      if (!fixed[i]) J(b, 2 * i) = d.x, J(b, 2 * i + 1) = d.y;
      if (!fixed[j]) J(b, 2 * j) = -d.x, J(b, 2 * j + 1) = -d.y;
    }
    if (worst < 1e-12) return true;
    VectorXd dx = J.completeOrthogonalDecomposition().solve(-r);
    for (int i = 0; i < l.n(); ++i) x[i] += Point2{dx[2 * i], dx[2 * i + 1]};
  }
  return false;
}

// Edges of either piece that best separate two convex pieces; each comes back as the connections
// keeping every vertex of the other piece on its outer side. Ties arise when corners touch.
std::vector<std::vector<Connection>> separating_edges(const std::vector<Point2>& x, const std::vector<int>& a,
                                                      const std::vector<int>& b, double& sep) {
  std::vector<std::pair<double, std::vector<Connection>>> cand;
  sep = -1e300;
  for (const auto* p : {&a, &b}) {
    const std::vector<int>& q = p == &a ? b : a;
    double area = 0.0;
    for (size_t k = 0; k < p->size(); ++k) area += cross(x[(*p)[k]], x[(*p)[(k + 1) % p->size()]]);
    for (size_t k = 0; k < p->size(); ++k) {
      std::vector<Connection> rows;
      double m = 1e300;
      for (int v : q) {
        Connection c{v, (*p)[k], (*p)[(k + 1) % p->size()], area > 0 ? -1 : 1};
        Point2 g[3];
        if (v == c.v || v == c.w) continue;
        m = std::min(m, side_distance(x, c, g));
        rows.push_back(c);
      }
      cand.push_back({m, rows});
      sep = std::max(sep, m);
    }
  }
  std::vector<std::vector<Connection>> best;
  for (auto& [m, rows] : cand)
    if (m >= sep - 1e-9) best.push_back(rows);
  return best;
}

// Largest separation of two convex pieces over their edge normals; negative means overlap.
double separation(const std::vector<Point2>& x, const std::vector<int>& a, const std::vector<int>& b) {
  double best = -1e300;
  for (const auto* p : {&a, &b}) {
    const std::vector<int>& q = p == &a ? b : a;
    for (size_t k = 0; k < p->size(); ++k) {
      Point2 e = x[(*p)[(k + 1) % p->size()]] - x[(*p)[k]];
      Point2 n = perp(e) / norm(e);
      double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
      for (int i : *p) lo1 = std::min(lo1, dot(n, x[i])), hi1 = std::max(hi1, dot(n, x[i]));
      for (int i : q) lo2 = std::min(lo2, dot(n, x[i])), hi2 = std::max(hi2, dot(n, x[i]));
      best = std::max(best, std::max(lo2 - hi1, lo1 - hi2));
    }
  }
  return best;
}

bool pieces_clear(const std::vector<Point2>& x, const std::vector<std::vector<int>>& pieces, double tol) {
  for (size_t a = 0; a < pieces.size(); ++a)
    for (size_t b = a + 1; b < pieces.size(); ++b)
      if (separation(x, pieces[a], pieces[b]) < -tol) return false;
  return true;
}

}  // namespace

ProbeReport probe_locked(const SelfTouchingLinkage& l, double delta, const ProbeOptions& opts) {
  l.check();
  if (!(delta > 0)) throw GeometryError("probe scale must be positive");
  if (opts.pinned_bar < 0 || opts.pinned_bar >= static_cast<int>(l.bars.size()))
    throw GeometryError("pinned bar out of range");
  const int N = 2 * l.n();
  std::vector<bool> fixed(l.n(), false);
  fixed[l.bars[opts.pinned_bar].first] = fixed[l.bars[opts.pinned_bar].second] = true;
  for (const Connection& c : l.connections) {
    Point2 g[3];
    if (side_distance(l.vertices, c, g) < -1e-12) throw GeometryError("start violates connection " + l.name(c.u));
  }
  for (const std::vector<int>& p : opts.pieces) {
    if (p.size() < 3) throw GeometryError("probe piece needs at least three vertices");
    for (int i : p)
      if (i < 0 || i >= l.n()) throw GeometryError("probe piece vertex out of range");
  }
  const double piece_tol = 1e-9;
  if (!pieces_clear(l.vertices, opts.pieces, piece_tol)) throw GeometryError("start has overlapping pieces");
  std::vector<int> movable;
  for (int i = 0; i < l.n(); ++i)
    if (!fixed[i]) movable.push_back(i);

  ProbeReport rep;
  rep.trials = opts.trials;
  if (movable.empty()) {
    rep.per_trial.assign(opts.trials, 0.0);
    return rep;
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double h0 = opts.step > 0 ? opts.step : delta / 4;
  for (int trial = 0; trial < opts.trials; ++trial) {
    int k = movable[static_cast<size_t>(U(rng) * movable.size()) % movable.size()];
    Point2 target = polar(1.0, kTwoPi * U(rng));
    std::vector<Point2> x = l.vertices;
    double h = h0, best = 0.0;
    int stalls = 0;
    for (int step = 0; step < opts.steps && h > 1e-6 * h0; ++step) {
      QpProblem p;
      p.G = MatrixXd::Identity(N, N);
      p.g = VectorXd::Zero(N);
      p.g[2 * k] = -target.x;
      p.g[2 * k + 1] = -target.y;
      const int nb = static_cast<int>(l.bars.size()), nf = 2 * static_cast<int>(std::count(fixed.begin(), fixed.end(), true));
      p.Aeq = MatrixXd::Zero(nb + nf, N);
      int row = 0;
      for (auto [i, j] : l.bars) {
        Point2 d = x[i] - x[j];
        p.Aeq(row, 2 * i) = d.x, p.Aeq(row, 2 * i + 1) = d.y;
        p.Aeq(row, 2 * j) = -d.x, p.Aeq(row, 2 * j + 1) = -d.y;
        ++row;
      }
      for (int i = 0; i < l.n(); ++i)
        if (fixed[i]) p.Aeq(row++, 2 * i) = 1.0, p.Aeq(row++, 2 * i + 1) = 1.0;
      p.beq = VectorXd::Zero(nb + nf);
      std::vector<Connection> sides = l.connections;
      std::vector<std::vector<std::vector<Connection>>> corners;
      for (size_t a = 0; a < opts.pieces.size(); ++a)
        for (size_t b = a + 1; b < opts.pieces.size(); ++b) {
          double sep;
          auto c = separating_edges(x, opts.pieces[a], opts.pieces[b], sep);
          if (sep >= std::max(4 * h, delta)) continue;
          if (c.size() == 1) sides.insert(sides.end(), c[0].begin(), c[0].end());
          else corners.push_back(c);
        }
      auto solve = [&](const std::vector<Connection>& cs) {
        const int nc = static_cast<int>(cs.size());
        p.Ain = MatrixXd::Zero(nc, N);
        p.bin = VectorXd::Zero(nc);
        for (int c = 0; c < nc; ++c) {
          Point2 g[3];
          double s = side_distance(x, cs[c], g);
          int idx[3] = {cs[c].u, cs[c].v, cs[c].w};
          for (int a = 0; a < 3; ++a) p.Ain(c, 2 * idx[a]) += g[a].x, p.Ain(c, 2 * idx[a] + 1) += g[a].y;
          p.bin[c] = -0.5 * (c < static_cast<int>(l.connections.size()) ? s : std::max(s, 0.0)) / h;
        }
        return solve_qp(p);
      };
      QpResult r = solve(sides);
      if (!corners.empty()) {
        // A vertex at a corner may leave through either edge: keep the one the tentative motion
        // moves away from, or a random one after a stall.
        bool guided = stalls == 0 && r.feasible && r.x.norm() >= 1e-9;
        std::vector<Connection> all = sides;
        for (const auto& cs : corners) {
          size_t pick = rng() % cs.size();
          if (guided) {
            double best_rate = -1e300;
            for (size_t k = 0; k < cs.size(); ++k) {
              double rate = 1e300;
              for (const Connection& cn : cs[k]) {
                Point2 g[3];
                if (side_distance(x, cn, g) > 1e-9) continue;
                int idx[3] = {cn.u, cn.v, cn.w};
                double dr = 0.0;
                for (int a = 0; a < 3; ++a) dr += g[a].x * r.x[2 * idx[a]] + g[a].y * r.x[2 * idx[a] + 1];
                rate = std::min(rate, dr);
              }
              if (rate > best_rate) best_rate = rate, pick = k;
            }
          }
          all.insert(all.end(), cs[pick].begin(), cs[pick].end());
        }
        r = solve(all);
      }
      if (!r.feasible || r.x.norm() < 1e-9) {
        if (opts.pieces.empty() || ++stalls > 8) break;
        continue;
      }
      stalls = 0;
      std::vector<Point2> y = x;
      for (int i = 0; i < l.n(); ++i) y[i] += Point2{r.x[2 * i], r.x[2 * i + 1]} * h;
      bool ok = project_bars(l, y, fixed);
      for (const Connection& cn : l.connections) {
        Point2 g[3];
        ok = ok && side_distance(y, cn, g) >= 0.0;
      }
      ok = ok && pieces_clear(y, opts.pieces, piece_tol);
      if (!ok) {
        h *= 0.5;
        continue;
      }
      x = y;
      double disp = 0.0;
      for (int i = 0; i < l.n(); ++i) disp = std::max(disp, dist(x[i], l.vertices[i]));
      best = std::max(best, disp);
      if (best > opts.cap) {
        rep.hit_cap = true;
        break;
      }
      h = std::min(h * 1.5, opts.cap / 20);
    }
    rep.per_trial.push_back(best);
    if (best > rep.max_displacement) {
      rep.max_displacement = best;
      rep.worst_trial = trial;
    }
  }
  return rep;
}

}  // namespace adorn
