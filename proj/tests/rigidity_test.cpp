#include <gtest/gtest.h>

#include <random>

#include "adorn/gallery.hpp"
#include "adorn/rigidity.hpp"

using namespace adorn;

namespace {

SelfTouchingLinkage nine(double theta_deg) { return nine_simplified_linkage(theta_deg); }
SelfTouchingLinkage seven() { return seven_simplified_linkage(); }

}  // namespace

TEST(Rigidity, SmallFrameworks) {
  SelfTouchingLinkage tri;
  tri.add_vertex({0, 0});
  tri.add_vertex({1, 0});
  tri.add_vertex({0.3, 0.8});
  tri.add_bar(0, 1);
  tri.add_bar(1, 2);
  tri.add_bar(2, 0);
  EXPECT_EQ(numerical_rank(rigidity_matrix(tri, false)), 3);
  EXPECT_TRUE(is_infinitesimally_rigid(tri, false));

  SelfTouchingLinkage quad;
  for (Point2 p : {Point2{0, 0}, {1, 0}, {1.2, 1}, {0, 0.9}}) quad.add_vertex(p);
  for (int i = 0; i < 4; ++i) quad.add_bar(i, (i + 1) % 4);
  EXPECT_EQ(numerical_rank(rigidity_matrix(quad, false)), 4);
  EXPECT_FALSE(is_infinitesimally_rigid(quad, false));
  EXPECT_TRUE(find_infinitesimal_motion(quad).found);

  SelfTouchingLinkage bar;
  bar.add_vertex({0, 0});
  bar.add_vertex({2, 1});
  bar.add_bar(0, 1);
  Eigen::MatrixXd R = rigidity_matrix(bar, false);
  EXPECT_EQ(R.rows(), 1);
  EXPECT_EQ(R.cols(), 4);
  EXPECT_TRUE(is_infinitesimally_rigid(bar, false));
  EXPECT_THROW(find_stress(bar), GeometryError);

  // Three collinear points braced by two bars flex to first order.
  SelfTouchingLinkage line;
  for (Point2 p : {Point2{0, 0}, {1, 0}, {2, 0}}) line.add_vertex(p);
  line.add_bar(0, 1);
  line.add_bar(1, 2);
  line.add_bar(0, 2);
  EXPECT_FALSE(is_infinitesimally_rigid(line, false));
}

TEST(Rigidity, NineTriangleFamilyIsCertifiedBelowRightAngle) {
  for (double theta : {60.0, 75.0, 89.0}) {
    SelfTouchingLinkage l = nine(theta);
    RigidityCertificate cert = certify_rigid(l);
    ASSERT_EQ(cert.conclusion, Conclusion::certified_rigid) << theta << " " << cert.to_text(l);
    EXPECT_LE(cert.equilibrium_residual, 1e-9);
    EXPECT_LE(cert.max_conn_stress, -1.0 + 1e-9);
    EXPECT_TRUE(cert.pinned_rank_ok);
    std::string why;
    EXPECT_TRUE(verify_certificate(l, cert, &why)) << why;
    // Independent check: no first-order motion respects the connections.
    EXPECT_FALSE(find_infinitesimal_motion(l).found) << theta;
    int ab = l.bar_between(l.vertex("A"), l.vertex("B")), ab2 = l.bar_between(l.vertex("A"), l.vertex("B'"));
    EXPECT_LT(cert.stress->omega_bar[ab], 0.0) << theta;
    EXPECT_GT(cert.stress->omega_bar[ab2], 0.0) << theta;
  }
}

TEST(Rigidity, NineTriangleFamilyDeclinesAtRightAngle) {
  for (double theta : {90.0, 95.0, 100.0}) {
    SelfTouchingLinkage l = nine(theta);
    RigidityCertificate cert = certify_rigid(l);
    EXPECT_EQ(cert.conclusion, Conclusion::not_certified) << theta;
    EXPECT_FALSE(cert.notes.empty());
    // Past the right angle an outward first-order motion exists.
    if (theta > 90) EXPECT_TRUE(find_infinitesimal_motion(l).found) << theta;
  }
}

TEST(Rigidity, TamperedCertificateFailsVerification) {
  SelfTouchingLinkage l = nine(60);
  RigidityCertificate cert = certify_rigid(l);
  ASSERT_EQ(cert.conclusion, Conclusion::certified_rigid);
  cert.stress->omega_bar[0] += 0.1;
  EXPECT_FALSE(verify_certificate(l, cert));
}

TEST(Rigidity, SevenTriangleSceneIsNotInfinitesimallyRigid) {
  SelfTouchingLinkage l = seven();
  EXPECT_NO_THROW(l.check());
  EXPECT_FALSE(is_infinitesimally_rigid(l, false));
  InfinitesimalMotion m = find_infinitesimal_motion(l, l.bar_between(l.vertex("A"), l.vertex("P")));
  ASSERT_TRUE(m.found) << m.description;
  EXPECT_EQ(certify_rigid(l).conclusion, Conclusion::not_certified);

  // The middle vertex moving sideways is a first-order motion of the straight chain.
  std::vector<Point2> v(l.n());
  v[l.vertex("M")] = {-1, 0};
  Eigen::VectorXd x(2 * l.n());
  for (int i = 0; i < l.n(); ++i) x[2 * i] = v[i].x, x[2 * i + 1] = v[i].y;
  EXPECT_NEAR((rigidity_matrix(l, false) * x).norm(), 0.0, 1e-12);
  EXPECT_GE((connection_matrix(l) * x).minCoeff(), 0.0);

  std::vector<Point2> arm = {l.vertices[l.vertex("A")], l.vertices[l.vertex("P")], l.vertices[l.vertex("Q")],
                             l.vertices[l.vertex("B")]};
  EXPECT_TRUE(cauchy_arm_check(arm, {0.3, 0.1}));
}

TEST(CauchyArm, RandomConvexArmsOpenOutward) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    int k = 2 + static_cast<int>(U(rng) * 6);
    double budget = 0.95 * kPi;
    std::vector<double> turns(k - 1);
    double sum = 0;
    for (double& t : turns) sum += (t = 0.05 + U(rng));
    for (double& t : turns) t *= budget * U(rng) / sum + 1e-3;
    double sign = U(rng) < 0.5 ? -1 : 1;
    std::vector<Point2> arm = {{0, 0}};
    double h = kTwoPi * U(rng);
    for (int i = 0; i < k; ++i) {
      if (i > 0) h += sign * turns[i - 1];
      arm.push_back(arm.back() + polar(0.2 + U(rng), h));
    }
    std::vector<double> deltas(k - 1);
    for (int i = 0; i < k - 1; ++i) deltas[i] = turns[i] * U(rng);
    EXPECT_TRUE(cauchy_arm_check(arm, deltas)) << trial;
  }
}

TEST(CauchyArm, RejectsBadInput) {
  std::vector<Point2> zig = {{0, 0}, {1, 0}, {1.5, 0.5}, {2.5, 0.3}};
  EXPECT_THROW(cauchy_arm_check(zig, {0.1, 0.1}), GeometryError);
  std::vector<Point2> arm = {{0, 0}, {1, 0}, {1.5, 0.5}};
  EXPECT_THROW(cauchy_arm_check(arm, {-0.1}), GeometryError);
  EXPECT_THROW(cauchy_arm_check(arm, {1.0}), GeometryError);
  EXPECT_THROW(cauchy_arm_check(arm, {0.1, 0.2}), GeometryError);
  // A closing arm whose turning exceeds a half turn is not convex.
  std::vector<Point2> hook = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0.5}};
  EXPECT_THROW(cauchy_arm_check(hook, {0.1, 0.1, 0.1}), GeometryError);
}

TEST(Rules, RuleOneSite) {
  auto site = [](Point2 x1, double b_len, Point2 y) {
    SelfTouchingLinkage l;
    int p0 = l.add_vertex({0, 0}, "P0"), p1 = l.add_vertex({1, 0}, "P1");
    int x0 = l.add_vertex({0.3, 0.5}, "X0"), xx = l.add_vertex(x1, "X1");
    int q0 = l.add_vertex({0, 0}, "Q0"), q1 = l.add_vertex({b_len, 0}, "Q1"), yy = l.add_vertex(y, "Y");
    l.add_bar(p0, p1);
    l.add_bar(p0, x0);
    l.add_bar(p1, xx);
    l.add_bar(q0, q1);
    l.add_bar(q0, yy);
    return l;
  };
  SelfTouchingLinkage ok = site({0.7, 0.5}, 1.0, {0.2, 0.2});
  int b = ok.bar_between(ok.vertex("Q0"), ok.vertex("Q1")), bp = ok.bar_between(ok.vertex("P0"), ok.vertex("P1"));
  std::string why;
  ASSERT_TRUE(applicable_rule1(ok, b, bp, &why)) << why;
  SelfTouchingLinkage m = apply_rule1(ok, b, bp);
  EXPECT_EQ(m.n(), ok.n() - 2);
  EXPECT_EQ(m.bars.size(), ok.bars.size() - 1);
  EXPECT_GE(m.bar_between(m.vertex("P0"), m.vertex("Y")), 0);

  SelfTouchingLinkage right = site({1, 0.5}, 1.0, {0.2, 0.2});
  EXPECT_FALSE(applicable_rule1(right, b, bp, &why));
  EXPECT_THROW(apply_rule1(right, b, bp), GeometryError);
  SelfTouchingLinkage shorter = site({0.7, 0.5}, 0.9, {0.2, 0.2});
  EXPECT_FALSE(applicable_rule1(shorter, b, bp));
  SelfTouchingLinkage below = site({0.7, 0.5}, 1.0, {0.2, -0.2});
  EXPECT_FALSE(applicable_rule1(below, b, bp));
}

TEST(Rules, RuleTwoSite) {
  auto site = [](Point2 r, Point2 z) {
    SelfTouchingLinkage l;
    int h = l.add_vertex({0, 0}, "H"), q = l.add_vertex({1, 0}, "Q"), p = l.add_vertex({1, 0}, "P");
    int rr = l.add_vertex(r, "R"), zz = l.add_vertex(z, "Z");
    l.add_bar(h, p);
    l.add_bar(h, q);
    l.add_bar(q, rr);
    l.add_bar(p, zz);
    return l;
  };
  SelfTouchingLinkage ok = site({0.5, 0.6}, {0.8, 0.1});
  std::string why;
  ASSERT_TRUE(applicable_rule2(ok, 0, 1, 2, &why)) << why;
  SelfTouchingLinkage m = apply_rule2(ok, 0, 1, 2);
  EXPECT_EQ(m.n(), 4);
  EXPECT_EQ(m.bars.size(), 3u);
  EXPECT_GE(m.bar_between(m.vertex("Q"), m.vertex("Z")), 0);

  EXPECT_FALSE(applicable_rule2(site({1, 1}, {0.8, 0.1}), 0, 1, 2));
  EXPECT_FALSE(applicable_rule2(site({0.5, 0.6}, {0.8, -0.1}), 0, 1, 2));
  EXPECT_FALSE(applicable_rule2(ok, 0, 2, 1));
}

TEST(Rules, RightAngleSiteInTheNineFamily) {
  // At a right apex angle the wedge at C' no longer allows rule 2 on the hairpin at D'.
  for (double theta : {60.0, 90.0}) {
    SelfTouchingLinkage l = nine(theta);
    int c2 = l.vertex("C'"), d2 = l.vertex("D'");
    int x = l.add_vertex(l.vertices[c2], "X");
    l.add_bar(d2, x);
    bool ok = applicable_rule2(l, l.bar_between(d2, x), l.bar_between(d2, c2), l.bar_between(c2, l.vertex("B'")));
    EXPECT_EQ(ok, theta < 90) << theta;
  }
}

TEST(Probe, PerturbedNineStaysPut) {
  const double delta = 1e-3;
  SelfTouchingLinkage p = perturb(nine(60), delta);
  EXPECT_NO_THROW(p.check());
  ProbeOptions opts;
  opts.trials = 30;
  ProbeReport rep = probe_locked(p, delta, opts);
  EXPECT_FALSE(rep.hit_cap);
  EXPECT_LE(rep.max_displacement, 10 * delta) << rep.max_displacement;
}

TEST(Probe, FreeBarHitsCap) {
  SelfTouchingLinkage l;
  l.add_vertex({0, 0});
  l.add_vertex({1, 0});
  l.add_vertex({2, 0.1});
  l.add_bar(0, 1);
  l.add_bar(1, 2);
  ProbeOptions opts;
  opts.trials = 5;
  ProbeReport rep = probe_locked(l, 1e-3, opts);
  EXPECT_TRUE(rep.hit_cap);
  EXPECT_GT(rep.max_displacement, 1.0);
}

TEST(Probe, PiecesSlideAlongEachOther) {
  // Three unit squares in an L: the right square swings down and the top one slides along.
  SelfTouchingLinkage l;
  auto add = [&](double x, double y, std::vector<int> shared) {
    Point2 c[4] = {{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}};
    std::vector<int> idx;
    for (Point2 p : c) {
      int v = -1;
      for (int s : shared)
        if (l.vertices[s] == p) v = s;
      idx.push_back(v >= 0 ? v : l.add_vertex(p));
    }
    for (int k = 0; k < 4; ++k) l.add_bar(idx[k], idx[(k + 1) % 4]);
    l.add_bar(idx[0], idx[2]);
    return idx;
  };
  std::vector<int> a = add(0, 0, {}), b = add(1, 0, {a[1]}), c = add(0, 1, {b[3]});
  ProbeOptions opts;
  opts.pieces = {a, b, c};
  opts.trials = 30;
  EXPECT_TRUE(probe_locked(l, 1e-3, opts).hit_cap);
  opts.pieces = {a, {b[0], b[1], b[2]}, {a[0], a[1], a[2]}};
  EXPECT_THROW(probe_locked(l, 1e-3, opts), GeometryError);
  opts.pieces = {{a[0], a[1]}};
  EXPECT_THROW(probe_locked(l, 1e-3, opts), GeometryError);
}
