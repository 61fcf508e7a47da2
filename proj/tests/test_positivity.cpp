#include <gtest/gtest.h>

#include "qample/positivity.hpp"

using namespace qample;

namespace {

GeometryPtr geo(const std::string& name) {
  static std::map<std::string, GeometryPtr> cache;
  auto& g = cache[name];
  if (!g) g = make_geometry(name);
  return g;
}

bool totaro_one_ample(Int a, Int b, Int c) { return a > 0 || b > c || a + b > 0; }
bool totaro_one_nef(Int a, Int b, Int c) { return (a >= 0 || b >= 0) && (a + c >= 0 || b - c >= 0); }

ClassVec half_step(const IntVec& p, std::size_t axis, int sign) {
  ClassVec c = to_class(p);
  c[axis] += Rational(sign, 2);
  return c;
}

}  // namespace

TEST(Certificate, QuadricExamples) {
  auto g = geo("p1xp1");
  auto r = qtample_certificate(*g, IntVec{1, 0}, {1, 1}, 1);
  ASSERT_EQ(r.verdict, Verdict::CertifiedQTample);
  EXPECT_EQ(r.N, 2);
  ASSERT_EQ(r.witnesses.size(), 1u);
  EXPECT_EQ(r.witnesses[0].twist, (IntVec{-1, -3}));
  EXPECT_EQ(r.witnesses[0].i, 2);
  // N = 1 fails: h^1(O(-2)) h^1(O(-3)) = 2.
  EXPECT_EQ(g->h({-2, -3}, 2), 2);

  auto amp = qtample_certificate(*g, IntVec{1, 1}, {1, 1}, 0);
  EXPECT_EQ(amp.verdict, Verdict::CertifiedQTample);
  EXPECT_EQ(qtample_certificate(*g, IntVec{-1, -1}, {1, 1}, 2).verdict, Verdict::ExactTrue);
  ASSERT_FALSE(amp.assumptions.empty());
  EXPECT_NE(amp.assumptions[0].find("CERTIFIED_IN_WINDOW"), std::string::npos);
}

TEST(Certificate, TotaroWitnessHasNone) {
  auto g = geo("totaro3fold");
  auto r = qtample_certificate(*g, IntVec{-2, 1, 3}, g->polarization(), 1);
  EXPECT_EQ(r.verdict, Verdict::NoCertificateUpTo);
  EXPECT_EQ(r.N, 64);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_GT(r.witnesses[0].h, 0);
  EXPECT_NE(r.assumptions[0].find("asserted"), std::string::npos);
}

TEST(Certificate, RationalClassesScale) {
  auto g = geo("p1xp1");
  auto r = qtample_certificate(*g, ClassVec{Rational(1, 2), Rational(-3, 4)}, {1, 1}, 1);
  EXPECT_EQ(r.params, (IntVec{2, -3}));
  EXPECT_TRUE(r.positive());
}

TEST(Certificate, TotaroGridSample) {
  auto g = geo("totaro3fold");
  for (Int a = -3; a <= 3; ++a)
    for (Int b = -3; b <= 3; ++b)
      for (Int c : {1, 3}) {
        auto r = qtample_certificate(*g, IntVec{a, b, c}, g->polarization(), 1);
        EXPECT_EQ(r.positive(), totaro_one_ample(a, b, c)) << a << " " << b << " " << c;
      }
}

TEST(NaiveProbe, QuadricClosedForms) {
  auto g = geo("p1xp1");
  std::vector<IntVec> twists;
  for (Int j = 0; j <= 5; ++j) twists.push_back({-j, -j});
  // h^2(O(m-j, -j)) = h^1(O(m-j)) h^1(O(-j)) dies once m >= j - 1.
  auto r = naive_probe(*g, {1, 0}, 1, twists);
  ASSERT_TRUE(r.all_reached());
  for (Int j = 0; j <= 5; ++j) EXPECT_EQ(*r.entries[static_cast<std::size_t>(j)].m, std::max<Int>(1, j - 1)) << j;
  auto amp = naive_probe(*g, {1, 1}, 0, twists);
  EXPECT_TRUE(amp.all_reached());
  auto neg = naive_probe(*g, {-1, -1}, 1, {{0, 0}});
  EXPECT_FALSE(neg.all_reached());
  EXPECT_EQ(neg.entries[0].last_failure.i, 2);
}

TEST(UniformProbe, Examples) {
  auto g = geo("p1xp1");
  auto r = uniform_probe(*g, {1, 0}, {1, 1}, 1, 8);
  ASSERT_TRUE(r.lambda_estimate.has_value());
  EXPECT_EQ(r.N_reference, 2);
  EXPECT_TRUE(r.consistent);
  EXPECT_FALSE(r.speculative);
  // m_j = max(1, j - 1): the largest ratio is at j = 1.
  EXPECT_EQ(*r.lambda_estimate, Rational(1));

  auto amp = uniform_probe(*g, {1, 1}, {1, 1}, 0, 8);
  EXPECT_TRUE(amp.lambda_estimate.has_value());
  EXPECT_TRUE(amp.consistent);

  auto bad = uniform_probe(*g, {-1, -1}, {1, 1}, 1, 4, 16, 16);
  EXPECT_TRUE(bad.speculative);
  EXPECT_FALSE(bad.lambda_estimate.has_value());
}

TEST(QNef, QuadricNefCone) {
  auto g = geo("p1xp1");
  for (Int a = -3; a <= 3; ++a)
    for (Int b = -3; b <= 3; ++b) {
      EXPECT_EQ(q_nef(*g, to_class({a, b}), 0).nef, a >= 0 && b >= 0) << a << " " << b;
      EXPECT_EQ(q_nef(*g, to_class({a, b}), 1).nef, a >= 0 || b >= 0) << a << " " << b;
    }
}

TEST(QNef, TotaroGrid) {
  auto g = geo("totaro3fold");
  for (Int a = -5; a <= 5; ++a)
    for (Int b = -5; b <= 5; ++b)
      for (Int c = 1; c <= 5; ++c)
        EXPECT_EQ(q_nef(*g, to_class({a, b, c}), 1).nef, totaro_one_nef(a, b, c)) << a << " " << b << " " << c;
}

TEST(QNef, SeparationWitnessIsInterior) {
  auto g = geo("totaro3fold");
  IntVec w{-2, 1, 3};
  EXPECT_TRUE(q_nef(*g, to_class(w), 1).nef);
  for (std::size_t k = 0; k < 3; ++k)
    for (int s : {-1, 1}) {
      IntVec v = w;
      v[k] += s;
      EXPECT_TRUE(q_nef(*g, to_class(v), 1).nef);
    }
  auto bad = q_nef(*g, to_class({-1, -1, 1}), 1);
  EXPECT_FALSE(bad.nef);
  EXPECT_TRUE(bad.witness.has_value());
}

TEST(QNef, CertifiedImpliesInterior) {
  auto g = geo("totaro3fold");
  int certified = 0;
  for (Int a = -3; a <= 3; ++a)
    for (Int b = -3; b <= 3; ++b)
      for (Int c : {1, 2, 4}) {
        IntVec p{a, b, c};
        if (!qtample_certificate(*g, p, g->polarization(), 1, 32).positive()) continue;
        ++certified;
        EXPECT_TRUE(q_nef(*g, to_class(p), 1).nef);
        for (std::size_t k = 0; k < 3; ++k)
          for (int s : {-1, 1}) EXPECT_TRUE(q_nef(*g, half_step(p, k, s), 1).nef) << a << " " << b << " " << c;
      }
  EXPECT_GT(certified, 50);
}

TEST(QNef, FlagVariety) {
  auto g = geo("sl3b");
  EXPECT_TRUE(q_nef(*g, to_class({0, 2}), 0).nef);
  EXPECT_FALSE(q_nef(*g, to_class({-1, 2}), 0).nef);
  EXPECT_TRUE(q_nef(*g, to_class({-1, 2}), 2).nef);
  EXPECT_FALSE(q_nef(*g, to_class({-1, -2}), 2).nef);
  EXPECT_THROW(q_nef(*g, to_class({1, 1}), 1), UnsupportedGeometry);
}

TEST(NMinusOneAmple, Examples) {
  auto g = geo("p1xp1");
  EXPECT_TRUE(n_minus_1_ample(*g, to_class({1, -5})));
  EXPECT_FALSE(n_minus_1_ample(*g, to_class({0, 0})));
  EXPECT_FALSE(n_minus_1_ample(*g, to_class({-1, -1})));
  auto f1 = geo("hirzebruch1");
  // -Eff(F_1) is spanned by -(1,0) and -(-1,1).
  for (Int a = -4; a <= 4; ++a)
    for (Int b = -4; b <= 4; ++b) EXPECT_EQ(n_minus_1_ample(*f1, to_class({a, b})), b > 0 || a + b > 0) << a << " " << b;
}

TEST(Ladder, CertificateMatchesExactCriterion) {
  for (const char* name : {"p1xp1", "hirzebruch1"}) {
    auto g = geo(name);
    for (Int a = -5; a <= 5; ++a)
      for (Int b = -5; b <= 5; ++b) {
        ClassVec c = to_class({a, b});
        bool zero = qtample_certificate(*g, c, g->polarization(), 0).positive();
        bool one = qtample_certificate(*g, c, g->polarization(), 1).positive();
        EXPECT_TRUE(!zero || one) << name << " " << a << " " << b;
        EXPECT_EQ(one, n_minus_1_ample(*g, c)) << name << " " << a << " " << b;
      }
  }
}

TEST(Scaling, ExactPredicatesAreHomogeneous) {
  for (const char* name : {"p1xp1", "hirzebruch1", "totaro3fold"}) {
    auto g = geo(name);
    const std::size_t r = static_cast<std::size_t>(g->picard_rank());
    IntVec p(r, -2);
    while (true) {
      ClassVec c = to_class(p), c2 = to_class(scaled(p, 2));
      EXPECT_EQ(g->is_big(c), g->is_big(c2));
      EXPECT_EQ(g->is_pseudoeffective(c), g->is_pseudoeffective(c2));
      EXPECT_EQ(n_minus_1_ample(*g, c), n_minus_1_ample(*g, c2));
      for (int q = 0; q < g->dim(); ++q) EXPECT_EQ(q_nef(*g, c, q).nef, q_nef(*g, c2, q).nef);
      std::size_t k = 0;
      while (k < r && p[k] == 2) p[k++] = -2;
      if (k == r) break;
      ++p[k];
    }
  }
}

TEST(ConeScan, QuadricChambers) {
  auto g = geo("p1xp1");
  auto c0 = cone_scan_rank2(*g, 0, 24);
  auto c1 = cone_scan_rank2(*g, 1, 24);
  EXPECT_TRUE(c0.consistent);
  EXPECT_TRUE(c1.consistent);
  EXPECT_EQ(c0.boundary_rays, (std::vector<Ray2>{{1, 0}, {0, 1}}));
  EXPECT_EQ(c1.boundary_rays, (std::vector<Ray2>{{-1, 0}, {0, -1}}));
  for (const auto& s : c0.sectors) EXPECT_EQ(s.verdict, (s.from == Ray2{1, 0}));
  for (const auto& s : c1.sectors) EXPECT_EQ(s.verdict, !(s.from == Ray2{-1, 0}));
  EXPECT_TRUE(same_structure(c1, cone_scan_rank2(*g, 1, 48)));
}

TEST(ConeScan, HirzebruchWalls) {
  auto g = geo("hirzebruch1");
  auto c1 = cone_scan_rank2(*g, 1, 24);
  EXPECT_TRUE(c1.consistent);
  EXPECT_EQ(c1.boundary_rays, (std::vector<Ray2>{{-1, 0}, {1, -1}}));
  auto c0 = cone_scan_rank2(*g, 0, 24);
  EXPECT_EQ(c0.boundary_rays, (std::vector<Ray2>{{1, 0}, {0, 1}}));
  EXPECT_TRUE(same_structure(c1, cone_scan_rank2(*g, 1, 48)));
}

TEST(ConeScan, FlagChambers) {
  auto g = geo("sl3b");
  auto c0 = cone_scan_rank2(*g, 0, 16);
  EXPECT_EQ(c0.boundary_rays, (std::vector<Ray2>{{1, 0}, {0, 1}}));
  auto c1 = cone_scan_rank2(*g, 1, 16);
  EXPECT_EQ(c1.boundary_rays, (std::vector<Ray2>{{-1, 1}, {1, -1}}));
  auto c2 = cone_scan_rank2(*g, 2, 16);
  EXPECT_EQ(c2.boundary_rays, (std::vector<Ray2>{{-1, 0}, {0, -1}}));
  for (const auto* c : {&c0, &c1, &c2}) EXPECT_TRUE(c->consistent);
}

TEST(ConeScan, RejectsOtherRanks) {
  EXPECT_THROW(cone_scan_rank2(*geo("totaro3fold"), 1, 8), UnsupportedRank);
  EXPECT_THROW(cone_scan_rank2(*geo("p2"), 0, 8), UnsupportedRank);
}

TEST(Additivity, Examples) {
  auto t = geo("totaro3fold");
  auto r = additivity_check(*t, to_class({1, 0, 1}), 1, to_class({0, 3, 1}), 1);
  EXPECT_EQ(r.outcome, AdditivityOutcome::Consistent);
  auto q = geo("p1xp1");
  EXPECT_EQ(additivity_check(*q, to_class({1, 1}), 0, to_class({2, 1}), 0).outcome, AdditivityOutcome::Consistent);
  EXPECT_EQ(additivity_check(*q, to_class({1, 1}), 0, to_class({1, -4}), 1).outcome, AdditivityOutcome::Consistent);
  EXPECT_EQ(additivity_check(*q, to_class({-1, -1}), 0, to_class({1, 1}), 0).outcome,
            AdditivityOutcome::PreconditionUnmet);
}
