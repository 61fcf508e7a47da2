#include <gtest/gtest.h>

#include <random>

#include "qample/regularity.hpp"

using namespace qample;

namespace {

GeometryPtr geo(const std::string& name) {
  static std::map<std::string, GeometryPtr> cache;
  auto& g = cache[name];
  if (!g) g = make_geometry(name);
  return g;
}

// Least m with h^1(O(a+m-1, b+m-1)) = h^2(O(a+m-2, b+m-2)) = 0, scanning a
// wide range with Kunneth products of P^1 values.
Int quadric_regularity_oracle(Int a, Int b) {
  auto cond = [&](Int m) {
    auto h1 = kunneth(projective_space_cohomology(1, a + m - 1), projective_space_cohomology(1, b + m - 1));
    auto h2 = kunneth(projective_space_cohomology(1, a + m - 2), projective_space_cohomology(1, b + m - 2));
    return h1[1] == 0 && h2[2] == 0;
  };
  for (Int m = -100; m <= 100; ++m)
    if (cond(m)) return m;
  return 1000;
}

}  // namespace

TEST(Regularity, ProjectiveLine) {
  EXPECT_EQ(regularity(*geo("p1"), {0}, {1}), 0);
  EXPECT_EQ(regularity(*geo("p1"), {-3}, {1}), 3);
  for (Int d = -6; d <= 6; ++d) EXPECT_EQ(regularity(*geo("p1"), {d}, {1}), -d);
}

TEST(Regularity, ProjectivePlane) {
  for (Int d = -6; d <= 6; ++d) EXPECT_EQ(regularity(*geo("p2"), {d}, {1}), -d);
}

TEST(Regularity, QuadricAgainstKunnethScan) {
  EXPECT_EQ(regularity(*geo("p1xp1"), {0, 0}, {1, 1}), 1);
  for (Int a = -4; a <= 4; ++a)
    for (Int b = -4; b <= 4; ++b) EXPECT_EQ(regularity(*geo("p1xp1"), {a, b}, {1, 1}), quadric_regularity_oracle(a, b));
}

TEST(Regularity, TwistShiftsByOne) {
  auto g = geo("hirzebruch1");
  IntVec h = g->polarization();
  for (IntVec d : std::vector<IntVec>{{0, 0}, {2, -1}, {-3, 1}, {1, 3}}) {
    Int r = regularity(*g, d, h);
    for (Int j = -2; j <= 2; ++j) EXPECT_EQ(regularity(*g, added(d, scaled(h, j)), h), r - j);
  }
}

TEST(Regularity, Subadditive) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<Int> coef(-4, 4);
  for (const char* name : {"p1xp1", "p2", "hirzebruch1"}) {
    auto g = geo(name);
    IntVec h = g->polarization();
    for (int t = 0; t < 30; ++t) {
      IntVec d1, d2;
      for (int k = 0; k < g->picard_rank(); ++k) {
        d1.push_back(coef(rng));
        d2.push_back(coef(rng));
      }
      EXPECT_LE(regularity(*g, added(d1, d2), h), regularity(*g, d1, h) + regularity(*g, d2, h))
          << name << " (" << join(d1) << ") (" << join(d2) << ")";
    }
  }
}

TEST(Regularity, ShiftPropertyOnGrid) {
  // If h^{q+j}(F - jH) = 0 for 1 <= j <= 2n then the same holds for F + H.
  auto cq = [](const Geometry& g, const IntVec& f, const IntVec& h, int q) {
    for (int j = 1; j <= 2 * g.dim(); ++j)
      if (q + j <= g.dim() && g.h(added(f, scaled(h, -j)), q + j) != 0) return false;
    return true;
  };
  int hits = 0;
  for (const char* name : {"p1xp1", "hirzebruch1", "totaro3fold"}) {
    auto g = geo(name);
    IntVec h = g->polarization();
    const Int r = g->picard_rank() == 3 ? 2 : 4;
    IntVec f(static_cast<std::size_t>(g->picard_rank()), -r);
    while (true) {
      for (int q = 0; q < g->dim(); ++q)
        if (cq(*g, f, h, q)) {
          ++hits;
          EXPECT_TRUE(cq(*g, added(f, h), h, q)) << name << " q=" << q << " (" << join(f) << ")";
        }
      std::size_t k = 0;
      while (k < f.size() && f[k] == r) f[k++] = -r;
      if (k == f.size()) break;
      ++f[k];
    }
  }
  EXPECT_GT(hits, 100);
}

TEST(Regularity, FlagVariety) {
  // Twisting by H lowers the regularity by one.
  EXPECT_EQ(regularity(*geo("sl3b"), {0, 0}, {1, 1}), regularity(*geo("sl3b"), {1, 1}, {1, 1}) + 1);
}

TEST(Regularity, WindowTooNarrow) {
  EXPECT_THROW(regularity(*geo("p1"), {-5}, {1}, std::pair<Int, Int>{-1, 2}), SearchBoundExceeded);
  EXPECT_THROW(regularity(*geo("p1"), {5}, {1}, std::pair<Int, Int>{-1, 2}), SearchBoundExceeded);
}

TEST(Asymptotic, QuadricExamples) {
  auto g = geo("p1xp1");
  auto h0 = asymptotic_h(*g, {1, 1}, 0, 32);
  ASSERT_TRUE(h0.limit.has_value());
  EXPECT_EQ(*h0.limit, Rational(2));
  EXPECT_EQ(h0.sequence[31], 33 * 33);
  // The raw top-half maximum sits at m = 16: (17^2) 2 / 16^2.
  EXPECT_EQ(h0.estimate, Rational(289, 128));

  auto h1 = asymptotic_h(*g, {1, -1}, 1, 32);
  for (int m = 1; m <= 32; ++m) EXPECT_EQ(h1.sequence[static_cast<std::size_t>(m - 1)], m * m - 1);
  EXPECT_EQ(h1.estimate, Rational(1023, 512));
  EXPECT_EQ(*h1.limit, Rational(2));

  auto h2 = asymptotic_h(*g, {1, 1}, 2, 32);
  EXPECT_EQ(h2.estimate, Rational(0));
  EXPECT_EQ(*h2.limit, Rational(0));
}

TEST(Asymptotic, HirzebruchVolume) {
  // D_0 + 2 D_2 cuts out a trapezoid with rows of length 1, 2, 3; mP_D has
  // (2m+1)^2 points and D^2 = 2 area = 8.
  auto g = geo("hirzebruch1");
  auto est = asymptotic_h(*g, {1, 2}, 0, 16);
  for (int m = 1; m <= 16; ++m) EXPECT_EQ(est.sequence[static_cast<std::size_t>(m - 1)], (2 * m + 1) * (2 * m + 1));
  ASSERT_TRUE(est.limit.has_value());
  EXPECT_EQ(*est.limit, Rational(8));
  EXPECT_THROW(asymptotic_h(*g, {1, 1}, 0, 3), std::invalid_argument);
}
