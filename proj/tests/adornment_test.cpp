#include <gtest/gtest.h>

#include <random>

#include "adorn/adornment.hpp"

using namespace adorn;

namespace {

// Dense sampling: distance to x never drops, distance to y never rises.
bool sampled_slender(const Adornment& a, int per_side = 4000, double eps = 1e-9) {
  for (const ArcPath* side : {&a.upper, &a.lower}) {
    if (side->empty()) continue;
    double len = side->length();
    double prev_x = -1, prev_y = 1e300;
    for (int k = 0; k <= per_side; ++k) {
      Point2 p = side->point_at_arclength(len * k / per_side);
      double dx = dist(p, a.x()), dy = dist(p, a.y());
      if (dx < prev_x - eps || dy > prev_y + eps) return false;
      prev_x = std::max(prev_x, dx);
      prev_y = std::min(prev_y, dy);
    }
  }
  return true;
}

Adornment half_disk(Point2 x, Point2 y, bool upper) {
  Point2 c = (x + y) * 0.5;
  double r = dist(x, y) / 2;
  double a0 = std::atan2(x.y - c.y, x.x - c.x);
  Adornment a = Adornment::bare(x, y);
  if (upper) a.upper = ArcPath({Arc(c, r, a0, -kPi)});
  else a.lower = ArcPath({Arc(c, r, a0, kPi)});
  return a;
}

double deg(double d) { return d * kPi / 180.0; }

}  // namespace

TEST(Slender, IsoscelesThreshold) {
  for (double theta : {30.0, 60.0, 89.0, 90.0, 91.0, 120.0, 170.0}) {
    Adornment a = isosceles_adornment({0, 0}, {1, 0}, deg(theta), true);
    bool oracle = sampled_slender(a);
    EXPECT_EQ(is_slender(a).is_slender, oracle) << theta;
    EXPECT_EQ(oracle, theta >= 90.0) << theta;
  }
}

TEST(Slender, BasicShapes) {
  EXPECT_TRUE(is_slender(Adornment::bare({0, 0}, {2, 1})).is_slender);
  Adornment hd = half_disk({0, 0}, {2, 0}, true);
  EXPECT_TRUE(sampled_slender(hd));
  EXPECT_TRUE(is_slender(hd).is_slender);
  EXPECT_FALSE(is_slender(hd).is_symmetric);
  Adornment eq = isosceles_adornment({0, 0}, {1, 0}, deg(60), false);
  SlenderVerdict v = is_slender(eq);
  EXPECT_FALSE(v.is_slender);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_TRUE(witness_violates(v.witness_upper ? eq.upper : eq.lower, eq.x(), eq.y(), *v.witness, 1e-9));
}

TEST(Slender, WitnessSoundnessAndEquivariance) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  int non_slender = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> pts;
    double t = 0;
    int n = 1 + static_cast<int>(U(rng) * 4);
    for (int i = 0; i < n; ++i) {
      t += U(rng);
      pts.push_back({t, 0.1 + 0.6 * U(rng)});
    }
    for (auto& p : pts) p.x /= t + U(rng) + 0.01;
    Adornment a = Adornment::polygon_side({0, 0}, {1, 0}, pts, true);
    SlenderVerdict v = is_slender(a);
    EXPECT_EQ(v.is_slender, sampled_slender(a)) << trial;
    if (!v.is_slender) {
      ++non_slender;
      EXPECT_TRUE(witness_violates(a.upper, a.x(), a.y(), *v.witness, 1e-9));
    }
    Similarity s = Similarity::frame({0.3, -2}, {0.3 + 3 * std::cos(1.1), -2 + 3 * std::sin(1.1)}, 1.0);
    EXPECT_EQ(is_slender(a.transformed(s)).is_slender, v.is_slender) << trial;
  }
  EXPECT_GT(non_slender, 10);
}

TEST(Lens, Examples) {
  Lens L = lens_of({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
  Lens M = max_slender({0, 0}, {1, 0});
  EXPECT_NEAR(dist(L.z, M.z), 0.0, 1e-12);
  // Two unit disks at distance 1 intersect in 2*pi/3 - sqrt(3)/2.
  EXPECT_NEAR(L.region().signed_area(), 2 * kPi / 3 - std::sqrt(3.0) / 2, 1e-12);
  Lens big = max_slender({0, 0}, {2, 0});
  EXPECT_NEAR(big.region().signed_area(), 4 * L.region().signed_area(), 1e-12);
  EXPECT_NEAR(L.region().distance_to_boundary(L.z), 0.0, 1e-12);
  EXPECT_NEAR(lens_of({0, 0}, {1, 0}, {0.5, 0}).region().signed_area(), 0.0, 1e-15);
  EXPECT_NEAR(lens_of({0, 0}, {1, 0}, {0, 0}).region().signed_area(), 0.0, 1e-15);
  EXPECT_THROW(lens_of({0, 0}, {1, 0}, {1.2, 0.5}), GeometryError);
  EXPECT_THROW(max_slender({1, 1}, {1, 1}), GeometryError);
  EXPECT_TRUE(is_slender(L.as_adornment()).is_slender);
  EXPECT_TRUE(is_slender(L.as_adornment()).is_symmetric);
}

TEST(Lens, MaxSlenderContainsSlenderShapes) {
  Lens M = max_slender({0, 0}, {1, 0});
  Region m = M.region();
  std::vector<Adornment> shapes = {half_disk({0, 0}, {1, 0}, true), half_disk({0, 0}, {1, 0}, false),
                                   isosceles_adornment({0, 0}, {1, 0}, deg(90), true),
                                   isosceles_adornment({0, 0}, {1, 0}, deg(120), false),
                                   lens_of({0, 0}, {1, 0}, {0.3, 0.4}).as_adornment()};
  for (const auto& a : shapes) {
    ASSERT_TRUE(is_slender(a).is_slender);
    Region r = a.region();
    for (const auto& p : r.boundary())
      for (int k = 0; k <= 200; ++k) EXPECT_LT(m.outside_distance(prim_at(p, k / 200.0)), 1e-9);
  }
}

TEST(Lens, CoveringLens) {
  Lens M = max_slender({0, 0}, {1, 0});
  CoveringLens c = covering_lens(M.as_adornment(), {0.5, 0.1});
  EXPECT_NEAR(c.z_shifted.y, 0.1 + c.delta, 1e-15);
  EXPECT_GT(c.delta, 0.0);
  EXPECT_TRUE(c.half.region().interior({0.5, 0.1}, 0.0));
  Adornment tri = isosceles_adornment({0, 0}, {2, 0}, deg(90), true);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    double px = 2 * U(rng);
    double h = std::min(px, 2 - px) * U(rng) * 0.98 + 1e-3;
    Point2 z{px, h};
    if (!tri.region().interior(z, 1e-6)) continue;
    CoveringLens cl = covering_lens(tri, z);
    // Containment oracle: dense boundary samples of the half-lens inside tri.
    Region hr = cl.half.region();
    for (const auto& p : hr.boundary())
      for (int k = 0; k <= 100; ++k) EXPECT_LT(tri.region().outside_distance(prim_at(p, k / 100.0)), 1e-7);
  }
  EXPECT_THROW(covering_lens(tri, {1, 1}), GeometryError);
  EXPECT_THROW(covering_lens(isosceles_adornment({0, 0}, {1, 0}, deg(60), true), {0.5, 0.1}), GeometryError);
}

TEST(Lens, HalfLensesStayInsideSlenderShapes) {
  std::vector<Adornment> shapes = {half_disk({0, 0}, {1, 0}, true),
                                   isosceles_adornment({0, 0}, {1.5, 0.5}, deg(100), true),
                                   max_slender({0, 0}, {1, 0}).as_adornment()};
  for (const auto& a : shapes) {
    Region r = a.region();
    for (bool up : {true, false}) {
      const ArcPath& side = up ? a.upper : a.lower;
      if (side.empty()) continue;
      for (int k = 1; k < 40; ++k) {
        Point2 z = side.point_at_arclength(side.length() * k / 40);
        HalfLens h{lens_of(a.x(), a.y(), z), up};
        EXPECT_TRUE(region_contains(r, h.region(), 1e-7));
      }
    }
  }
}

TEST(Lens, UnionOfLenses) {
  Lens M = max_slender({0, 0}, {1, 0});
  Adornment single = union_of_lenses({0, 0}, {1, 0}, {M.z});
  EXPECT_NEAR(single.region().signed_area(), M.region().signed_area(), 1e-12);
  Adornment nested = union_of_lenses({0, 0}, {1, 0}, {M.z, {0.5, 0.2}});
  EXPECT_NEAR(nested.region().signed_area(), M.region().signed_area(), 1e-12);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> zs;
    std::vector<Lens> lenses;
    for (int i = 0; i < 5; ++i) {
      Point2 z;
      do z = {U(rng), (U(rng) - 0.5) * 1.8};
      while (norm(z) > 1 || dist(z, {1, 0}) > 1);
      zs.push_back(z);
      lenses.push_back(lens_of({0, 0}, {1, 0}, z));
    }
    Adornment u = union_of_lenses({0, 0}, {1, 0}, zs);
    ASSERT_NO_THROW(u.validate());
    EXPECT_TRUE(is_slender(u).is_slender) << trial;
    EXPECT_TRUE(is_symmetric(u)) << trial;
    if (trial < 20) {
      EXPECT_TRUE(sampled_slender(u, 2000)) << trial;
      Region r = u.region();
      for (int k = 0; k < 400; ++k) {
        Point2 q{U(rng), (U(rng) - 0.5) * 1.8};
        bool in_any = false;
        double margin = 1e300;
        for (const auto& L : lenses) {
          Region lr = L.region();
          in_any = in_any || lr.contains(q);
          margin = std::min(margin, lr.distance_to_boundary(q));
        }
        if (margin < 1e-9) continue;
        EXPECT_EQ(r.contains(q), in_any) << trial << " " << q.x << "," << q.y;
      }
    }
  }
}

TEST(Lens, LensUnionCoversSymmetricShape) {
  Lens M = max_slender({0, 0}, {1, 0});
  Adornment a = union_of_lenses({0, 0}, {1, 0}, {M.z, {0.2, 0.1}, {0.7, 0.5}});
  double area = a.region().signed_area();
  double prev = 0;
  for (int n : {16, 64, 256}) {
    std::vector<Point2> zs;
    for (int k = 0; k <= n; ++k) zs.push_back(a.upper.point_at_arclength(a.upper.length() * k / n));
    Region r = union_of_lenses({0, 0}, {1, 0}, zs).region();
    double cover = r.signed_area() / area;
    EXPECT_GE(cover, prev - 1e-12);
    prev = cover;
    if (n == 256) {
      EXPECT_GE(cover, 1 - 1e-3);
      std::mt19937 rng(2);
      std::uniform_real_distribution<double> U(0, 1);
      int inside = 0, hit = 0;
      while (inside < 20000) {
        Point2 q{U(rng), (U(rng) - 0.5) * 1.8};
        if (!a.region().contains(q)) continue;
        ++inside;
        hit += r.contains(q);
      }
      EXPECT_GE(static_cast<double>(hit) / inside, 1 - 1e-3);
    }
  }
}

TEST(Lens, SlenderUnion) {
  Adornment hd = half_disk({0, 0}, {1, 0}, true);
  Adornment u = slender_union(hd, hd);
  EXPECT_NEAR(u.region().signed_area(), hd.region().signed_area(), 1e-12);
  Adornment tri = isosceles_adornment({0, 0}, {1, 0}, deg(90), false);
  Adornment ht = slender_union(hd, tri);
  EXPECT_TRUE(sampled_slender(ht));
  EXPECT_TRUE(is_slender(ht).is_slender);
  EXPECT_NEAR(ht.region().signed_area(), kPi / 8 + 0.25, 1e-12);
  Adornment M = max_slender({0, 0}, {1, 0}).as_adornment();
  EXPECT_NEAR(slender_union(hd, M).region().signed_area(), M.region().signed_area(), 1e-12);
  EXPECT_THROW(slender_union(hd, Adornment::bare({0, 0}, {2, 0})), GeometryError);
  // Crossing sides: union of two lenses, each bulging more at a different end.
  Adornment l1 = lens_of({0, 0}, {1, 0}, {0.2, 0.5}).as_adornment();
  Adornment l2 = lens_of({0, 0}, {1, 0}, {0.8, 0.5}).as_adornment();
  Adornment l12 = slender_union(l1, l2);
  Adornment ref = union_of_lenses({0, 0}, {1, 0}, {{0.2, 0.5}, {0.8, 0.5}});
  EXPECT_NEAR(l12.region().signed_area(), ref.region().signed_area(), 1e-12);
  EXPECT_GT(l12.region().signed_area(), l1.region().signed_area() + 1e-3);
}
