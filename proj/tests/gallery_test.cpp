#include <gtest/gtest.h>

#include "adorn/area.hpp"
#include "adorn/gallery.hpp"
#include "adorn/unfold.hpp"

using namespace adorn;

namespace {

Configuration target(const Scene& s) { return s.chain_config(s.target); }

bool has_pair(const OverlapReport& r, int e1, int e2) {
  for (const OverlapPair& p : r.overlaps)
    if ((p.e1 == e1 && p.e2 == e2) || (p.e1 == e2 && p.e2 == e1)) return true;
  return false;
}

}  // namespace

TEST(Gallery, UnknownNameListsScenes) {
  try {
    gallery("nonexistent");
    FAIL();
  } catch (const GeometryError& e) {
    std::string msg = e.what();
    for (const std::string& n : gallery_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
  }
  EXPECT_THROW(gallery("area-down@45"), GeometryError);
  EXPECT_THROW(gallery("locked-9-simplified@abc"), GeometryError);
}

TEST(Gallery, EveryScenePassesChecksAndRoundTrips) {
  for (const std::string& n : gallery_names()) {
    GalleryEntry g = gallery(n);
    EXPECT_NO_THROW(g.scene.check()) << n;
    std::string text = to_text(g.scene);
    EXPECT_EQ(to_text(parse_scene(text)), text) << n;
    if (g.scene.has_chain()) {
      AdornedChain ch = g.scene.chain();
      if (n != "area-overlap") EXPECT_TRUE(validate(ch, g.scene.config()).clean) << n;
      for (size_t e = 0; e < ch.n_edges(); ++e)
        EXPECT_TRUE(is_slender(ch.adornment_at(static_cast<int>(e), g.scene.config())).is_slender) << n << " " << e;
    }
    if (g.scene.is_self_touching()) EXPECT_NO_THROW(g.scene.linkage().check()) << n;
  }
}

TEST(Gallery, NonSymmetricOverlap) {
  Scene s = gallery("non-symmetric-overlap").scene;
  AdornedChain ch = s.chain();
  EXPECT_TRUE(is_expansion(s.config(), target(s)).is_expansion);
  OverlapReport after = validate(ch, target(s));
  EXPECT_FALSE(after.clean);
  EXPECT_TRUE(has_pair(after, 0, 2));
  EXPECT_EQ(verify_symmetric_expansion(ch, s.config(), target(s)).status, ExpansionStatus::precondition_violated);
}

TEST(Gallery, AreaDown) {
  Scene s = gallery("area-down").scene;
  AdornedChain ch = s.chain();
  EXPECT_TRUE(is_expansion(s.config(), target(s)).is_expansion);
  AreaEstimate before = union_area(ch, s.config()), after = union_area(ch, target(s));
  EXPECT_LT(after.value + after.half_width, before.value - before.half_width);
  Trajectory t;
  t.times = {0, 1};
  t.frames = {s.config(), target(s)};
  EXPECT_FALSE(union_area_monotonicity(ch, t).preconditions_ok);
}

TEST(Gallery, NonExpansive) {
  Scene s = gallery("non-expansive").scene;
  AdornedChain ch = s.chain();
  Trajectory t = integrate(ch, s.config());
  ASSERT_EQ(t.termination, Termination::straight) << t.message;
  EXPECT_TRUE(guard_trajectory(ch, t).clean);
  ASSERT_EQ(s.marks.size(), 2u);
  double prev = 1e300;
  for (const Configuration& c : t.frames) {
    double d = dist(s.mark_at(0, c), s.mark_at(1, c));
    EXPECT_LE(d, prev + 1e-12);
    prev = d;
  }
  EXPECT_LT(dist(s.mark_at(0, t.frames.back()), s.mark_at(1, t.frames.back())),
            dist(s.mark_at(0, t.frames.front()), s.mark_at(1, t.frames.front())) - 0.05);
}

TEST(Gallery, TwoComponentsCollideWhenSheared) {
  Scene s = gallery("two-components-quadrilateral").scene;
  AdornedChain ch = s.chain();
  EXPECT_TRUE(s.closed);
  EXPECT_EQ(ch.n_edges(), 4u);
  EXPECT_TRUE(validate(ch, target(s)).clean);
  EXPECT_TRUE(is_convex(ch, s.config(), 1e-9));
  EXPECT_TRUE(is_convex(ch, target(s), 1e-9));
  GuardReport g = guard_trajectory(ch, sweep(ch, s.config(), target(s), 80));
  EXPECT_FALSE(g.clean);
  EXPECT_GT(g.first_bad_frame(), 0);
}

TEST(Gallery, AreaOverlapStraightensWithoutLosingArea) {
  Scene s = gallery("area-overlap").scene;
  AdornedChain ch = s.chain();
  OverlapReport r = validate(ch, s.config());
  EXPECT_FALSE(r.clean);
  EXPECT_TRUE(has_pair(r, 0, 2));
  Trajectory t = integrate(AdornedChain::from_positions(s.vertices, false), s.config());
  ASSERT_EQ(t.termination, Termination::straight) << t.message;
  MonotonicityOptions opts;
  opts.mc.grid = 300;
  opts.max_frames = 8;
  MonotonicityReport m = union_area_monotonicity(ch, t, opts);
  ASSERT_TRUE(m.preconditions_ok) << m.reason;
  EXPECT_TRUE(m.monotone);
}

TEST(Gallery, NineTriangleTightScenesFoldToCertifiedLinkage) {
  for (double deg : {45.0, 60.0, 75.0, 89.0}) {
    std::string name = deg == 60 ? "locked-9-equilateral-tight" : "locked-9-isosceles-tight@" + std::to_string(int(deg));
    GalleryEntry g = gallery(name);
    EXPECT_EQ(g.expected, Expected::certified_rigid);
    const Scene& s = g.scene;
    EXPECT_EQ(s.pieces.size(), 9u) << name;
    SelfTouchingLinkage l = s.linkage();
    for (const RuleStep& r : s.rules) {
      EXPECT_LE(dist(l.vertices[l.vertex(r.b.first)], l.vertices[l.vertex(r.b_prime.first)]), 1e-12);
      EXPECT_LE(dist(l.vertices[l.vertex(r.b.second)], l.vertices[l.vertex(r.b_prime.second)]), 1e-12);
    }
    SimplifyResult simple = simplify(l, s.rules);
    SelfTouchingLinkage ref = nine_simplified_linkage(deg);
    EXPECT_EQ(simple.linkage.n(), ref.n());
    EXPECT_EQ(simple.linkage.bars.size(), ref.bars.size());
    EXPECT_EQ(simple.log.size(), s.rules.size());
    RigidityCertificate c = certify_rigid(simple.linkage);
    EXPECT_EQ(c.conclusion, Conclusion::certified_rigid) << name;
    EXPECT_TRUE(verify_certificate(simple.linkage, c));
  }
  Scene right = gallery("locked-9-isosceles-tight@90").scene;
  EXPECT_THROW(simplify(right.linkage(), right.rules), GeometryError);
}

TEST(Gallery, SevenTriangleSceneFoldsToFlexibleLinkage) {
  Scene s = gallery("locked-7-equilateral").scene;
  EXPECT_EQ(s.pieces.size(), 7u);
  SimplifyResult simple = simplify(s.linkage(), s.rules);
  EXPECT_EQ(simple.linkage.n(), seven_simplified_linkage().n());
  EXPECT_GE(simple.linkage.vertex("A"), 0);
  EXPECT_GE(simple.linkage.vertex("B"), 0);
  EXPECT_EQ(certify_rigid(simple.linkage).conclusion, Conclusion::not_certified);
  EXPECT_TRUE(find_infinitesimal_motion(simple.linkage).found);
  EXPECT_TRUE(cauchy_arm_check(seven_cauchy_arm(), {0.1, 0.1}));
}

TEST(Gallery, LooseNineTriangleProbe) {
  Scene s = gallery("locked-9-equilateral-loose").scene;
  SelfTouchingLinkage l = s.linkage();
  EXPECT_NO_THROW(l.check());
  ProbeOptions opts;
  opts.trials = 10;
  ProbeReport r = probe_locked(l, 0.01, opts);
  EXPECT_FALSE(r.hit_cap);
  EXPECT_LE(r.max_displacement, 0.1);
}

TEST(Gallery, PieceScenesResistTheProbe) {
  for (const char* name : {"locked-3-triangles", "locked-squares-open", "locked-squares-closed"}) {
    GalleryEntry g = gallery(name);
    EXPECT_EQ(g.expected, Expected::conjectured_locked);
    SelfTouchingLinkage l = g.scene.linkage();
    ProbeOptions opts;
    opts.pieces = g.scene.pieces;
    ProbeReport r = probe_locked(l, 1e-3, opts);
    EXPECT_FALSE(r.hit_cap) << name;
    EXPECT_LE(r.max_displacement, 1e-2) << name;
    // Without the last piece's contacts the rest of the chain moves freely.
    opts.pieces.pop_back();
    opts.trials = 30;
    EXPECT_GT(probe_locked(l, 1e-3, opts).max_displacement, 0.1) << name;
  }
}

TEST(Gallery, TruncatedShearAlternatesCleanAndColliding) {
  Scene s = gallery("many-components-truncated").scene;
  AdornedChain ch = s.chain();
  EXPECT_TRUE(validate(ch, target(s)).clean);
  // Count maximal runs of clean and colliding frames while the left side turns from 110 to 55 degrees.
  int clean_runs = 0, bad_runs = 0, prev = -1;
  for (int k = 0; k <= 550; ++k) {
    double phi = (110 - 0.1 * k) * M_PI / 180;
    Point2 d = Point2{std::cos(phi), std::sin(phi)} * 1.2;
    int ok = validate(ch, s.chain_config({{0, 0}, {2, 0}, Point2{2, 0} + d, d})).clean ? 1 : 0;
    if (ok != prev) (ok ? clean_runs : bad_runs)++;
    prev = ok;
  }
  EXPECT_EQ(clean_runs, 5);
  EXPECT_EQ(bad_runs, 4);
  EXPECT_FALSE(guard_trajectory(ch, sweep(ch, s.config(), target(s), 120)).clean);
}
