#include <gtest/gtest.h>

#include <cstdio>
#include <random>

#include "qample/geometry.hpp"

using namespace qample;

namespace {

FanPtr ptr(Fan f) { return std::make_shared<const Fan>(std::move(f)); }

IntVec random_coeffs(std::mt19937& rng, int n, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntVec v(static_cast<std::size_t>(n));
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST(LatticeCount, FloorSumMatchesLoop) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> d(-50, 50), m(1, 30), len(0, 40);
  for (int t = 0; t < 500; ++t) {
    Int n = len(rng), mm = m(rng), a = d(rng), b = d(rng);
    i128 expect = 0;
    for (Int i = 0; i < n; ++i) expect += floor_div(a * i + b, mm);
    EXPECT_TRUE(floor_sum(n, mm, a, b) == expect);
  }
}

TEST(LatticeCount, PolygonMatchesNaive) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> coef(-3, 3), rhs(-12, 12), np(0, 6), box(-8, 8);
  for (int t = 0; t < 3000; ++t) {
    std::vector<HalfPlane> planes;
    int k = np(rng);
    for (int i = 0; i < k; ++i) planes.push_back({coef(rng), coef(rng), rhs(rng)});
    Int x0 = box(rng), x1 = box(rng), y0 = box(rng), y1 = box(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    ASSERT_TRUE(count_polygon(planes, x0, x1, y0, y1) == count_polygon_naive(planes, x0, x1, y0, y1)) << t;
  }
}

TEST(Cohomology, ProjectiveLine) {
  CohomologyEngine e(ptr(p1_fan()));
  for (Int d = 0; d <= 6; ++d) EXPECT_EQ(e.compute(IntVec{d, 0}).dims, (IntVec{d + 1, 0}));
  EXPECT_EQ(e.compute(IntVec{-2, 0}).dims, (IntVec{0, 1}));
  EXPECT_EQ(e.compute(IntVec{0, -5}).dims, (IntVec{0, 4}));
}

TEST(Cohomology, P1xP1MinusTwoZero) {
  CohomologyEngine e(ptr(p1xp1_fan()));
  EXPECT_EQ(e.compute(IntVec{-2, 0, 0, 0}).dims, (IntVec{0, 1, 0}));
}

TEST(Cohomology, ProjectivePlaneClosedForm) {
  CohomologyEngine e(ptr(p2_fan()));
  for (Int d = -8; d <= 8; ++d) EXPECT_EQ(e.compute(IntVec{d, 0, 0}).dims, projective_space_cohomology(2, d)) << d;
}

TEST(Cohomology, P3ClosedForm) {
  auto f = ptr(build_fan(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
                         {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, "p3"));
  CohomologyEngine e(f);
  for (Int d = -9; d <= 6; ++d) EXPECT_EQ(e.compute(IntVec{0, d, 0, 0}).dims, projective_space_cohomology(3, d)) << d;
}

TEST(Kunneth, ClosedFormExamples) {
  auto p1 = projective_space_cohomology(1, 1);
  EXPECT_EQ(kunneth(p1, p1), (IntVec{4, 0, 0}));
  auto m2 = projective_space_cohomology(1, -2);
  EXPECT_EQ(kunneth(m2, m2), (IntVec{0, 0, 1}));
  EXPECT_EQ(kunneth(projective_space_cohomology(1, 3), projective_space_cohomology(1, -5)), (IntVec{0, 16, 0}));
}

TEST(Kunneth, EngineOnP1xP1Exhaustive) {
  auto f1 = ptr(p1_fan());
  auto prod = ptr(product_fan(p1_fan(), p1_fan()));
  CohomologyEngine e(prod);
  for (Int a = -3; a <= 3; ++a)
    for (Int b = -3; b <= 3; ++b)
      for (Int c = -3; c <= 3; ++c)
        for (Int d = -3; d <= 3; ++d) {
          IntVec coeffs{a, b, c, d};
          auto expect = kunneth(projective_space_cohomology(1, a + b), projective_space_cohomology(1, c + d));
          ASSERT_EQ(e.compute(coeffs).dims, expect) << join(coeffs);
          ASSERT_EQ(kunneth_oracle(ToricDivisor(f1, {a, b}), ToricDivisor(f1, {c, d})).dims, expect);
        }
}

TEST(Kunneth, EngineOnP1xP2Exhaustive) {
  auto prod = ptr(product_fan(p1_fan(), p2_fan()));
  CohomologyEngine e(prod);
  for (Int a = -3; a <= 3; ++a)
    for (Int b = -3; b <= 3; ++b)
      for (Int c = -3; c <= 3; ++c)
        for (Int d = -3; d <= 3; ++d)
          for (Int g = -3; g <= 3; ++g) {
            IntVec coeffs{a, b, c, d, g};
            auto expect = kunneth(projective_space_cohomology(1, a + b), projective_space_cohomology(2, c + d + g));
            ASSERT_EQ(e.compute(coeffs).dims, expect) << join(coeffs);
          }
}

TEST(SplitBundle, OracleExamples) {
  EXPECT_EQ(split_bundle_oracle(0, 0, 1)[0], 1);
  auto t = split_bundle_oracle(-2, 1, 3);
  EXPECT_EQ(t[2], 0);
  EXPECT_GT(t[1], 0);
  EXPECT_THROW(split_bundle_oracle(0, 0, 0), UnsupportedTwist);
}

TEST(SplitBundle, EngineMatchesOracleSample) {
  auto g = make_geometry("totaro3fold");
  for (Int a : {-5, -2, 0, 3})
    for (Int b : {-4, 1, 5})
      for (Int c : {1, 3, 5}) EXPECT_EQ(g->cohomology({a, b, c}), split_bundle_oracle(a, b, c)) << a << b << c;
  EXPECT_EQ(g->cohomology({0, 5, 1})[0], 16);
}

TEST(Cohomology, SweepMatchesCount) {
  std::mt19937 rng(3);
  for (auto fan : {p2_fan(), hirzebruch1_fan(), totaro_fan(), product_fan(p1_fan(), p2_fan())}) {
    CohomologyEngine e(ptr(fan));
    for (int t = 0; t < 25; ++t) {
      auto a = random_coeffs(rng, fan.num_rays(), -4, 4);
      auto sweep = e.compute_per_weight(ToricDivisor(e.fan(), a));
      EXPECT_EQ(sweep.dims, e.compute(a).dims) << fan.name() << " " << join(a);
      Int total = 0;
      for (const auto& w : sweep.per_weight) total += w.mult;
      Int expect = 0;
      for (Int x : sweep.dims) expect += x;
      EXPECT_EQ(total, expect);
    }
  }
}

TEST(Cohomology, SerreDuality) {
  std::mt19937 rng(4);
  for (auto fan : {p2_fan(), hirzebruch1_fan(), totaro_fan(), p1xp1_fan()}) {
    CohomologyEngine e(ptr(fan));
    for (int t = 0; t < 40; ++t) {
      auto table = e.compute(random_coeffs(rng, fan.num_rays(), -6, 6));
      EXPECT_TRUE(serre_duality_holds(e, table)) << fan.name() << " " << join(table.coeffs);
    }
  }
}

TEST(Cohomology, EulerCharacteristicIsPolynomial) {
  // Degree <= n polynomial in m: the (n+1)-th finite difference vanishes.
  for (auto [fan, a] : std::vector<std::pair<Fan, IntVec>>{{totaro_fan(), {1, -2, 0, 1, 3, -1}},
                                                          {hirzebruch1_fan(), {2, -1, 1, -3}},
                                                          {p2_fan(), {-1, 2, 0}}}) {
    CohomologyEngine e(ptr(fan));
    std::vector<Int> chi;
    for (Int m = 1; m <= 8; ++m) {
      auto t = e.compute(scaled(a, m));
      Int x = 0;
      for (std::size_t i = 0; i < t.dims.size(); ++i) x += (i % 2 ? -1 : 1) * t.dims[i];
      chi.push_back(x);
    }
    for (int k = 0; k <= fan.rank(); ++k) {
      std::vector<Int> next;
      for (std::size_t i = 0; i + 1 < chi.size(); ++i) next.push_back(chi[i + 1] - chi[i]);
      chi = next;
    }
    for (Int x : chi) EXPECT_EQ(x, 0) << fan.name();
  }
}

TEST(Cohomology, CharacteristicIndependent) {
  std::mt19937 rng(5);
  CohomologyEngine e(ptr(totaro_fan()));
  for (int t = 0; t < 20; ++t) {
    auto a = random_coeffs(rng, 6, -3, 3);
    auto base = e.compute(a, 0);
    for (Int p : {2, 3, 5}) {
      auto tp = e.compute(a, p);
      EXPECT_EQ(tp.dims, base.dims);
      EXPECT_FALSE(tp.torsion);
    }
  }
  EXPECT_THROW(e.compute(IntVec{0, 0, 0, 0, 0, 0}, 4), UnsupportedCharacteristic);
}

TEST(Cohomology, RegionOverflow) {
  EngineOptions opts;
  opts.region_bound = 10;
  CohomologyEngine e(ptr(p2_fan()), opts);
  EXPECT_THROW(e.compute_per_weight(ToricDivisor(e.fan(), {20, 0, 0})), RegionOverflow);
}

TEST(Cache, DiskRoundTripAndAudit) {
  std::string path = ::testing::TempDir() + "qample_cache_test.jsonl";
  std::remove(path.c_str());
  auto fan = ptr(totaro_fan());
  IntVec a{2, -1, 0, 1, 0, 3};
  IntVec dims;
  {
    auto cache = std::make_shared<CohomologyCache>(path);
    CohomologyEngine e(fan, {}, cache);
    dims = e.compute(a).dims;
    EXPECT_EQ(cache->size(), 1u);
  }
  auto cache = std::make_shared<CohomologyCache>(path);
  EXPECT_EQ(cache->size(), 1u);
  EngineOptions opts;
  opts.audit_period = 1;
  CohomologyEngine e(fan, opts, cache);
  EXPECT_EQ(e.compute(a).dims, dims);
  EXPECT_EQ(e.cache_hits(), 1);
  EXPECT_EQ(e.audits(), 1);
  std::remove(path.c_str());
}

TEST(Cache, CorruptEntryIsCaught) {
  auto fan = ptr(p1xp1_fan());
  auto cache = std::make_shared<CohomologyCache>();
  IntVec a{1, 1, 0, 0};
  cache->insert(CohomologyCache::key(fan->hash(), a, 0), {a, 0, {5, 0, 0}, false, {}}, fan->hash());
  EngineOptions opts;
  opts.audit_period = 1;
  CohomologyEngine e(fan, opts, cache);
  EXPECT_THROW(e.compute(a), CacheMismatch);
}

TEST(Flag3, BorelWeilBott) {
  EXPECT_EQ(flag3_cohomology(1, 1), (IntVec{8, 0, 0, 0}));
  EXPECT_EQ(flag3_cohomology(-1, 5), (IntVec{0, 0, 0, 0}));
  EXPECT_EQ(flag3_cohomology(-2, 1), (IntVec{0, 1, 0, 0}));
  EXPECT_EQ(flag3_cohomology(0, 0), (IntVec{1, 0, 0, 0}));
  // K = L(-2,-2): h^3 = 1.
  EXPECT_EQ(flag3_cohomology(-2, -2), (IntVec{0, 0, 0, 1}));
  EXPECT_THROW(flag3_cohomology(1, 1, 3), UnsupportedCharacteristic);
}

TEST(Flag3, SerreDualityAndDimensions) {
  for (Int a = -8; a <= 8; ++a)
    for (Int b = -8; b <= 8; ++b) {
      auto h = flag3_cohomology(a, b);
      auto d = flag3_cohomology(-2 - a, -2 - b);
      for (int i = 0; i <= 3; ++i) EXPECT_EQ(h[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(3 - i)]);
      int nonzero = 0;
      for (Int x : h) nonzero += x != 0;
      EXPECT_LE(nonzero, 1);
      if (a >= 0 && b >= 0) EXPECT_EQ(h[0], (a + 1) * (b + 1) * (a + b + 2) / 2);
    }
}
