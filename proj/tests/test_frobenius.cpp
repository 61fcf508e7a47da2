#include <gtest/gtest.h>

#include "qample/frobenius.hpp"

using namespace qample;

namespace {

const FinAlgebra& preset(Int p, const std::string& name) {
  static std::map<std::pair<Int, std::string>, FinAlgebra> cache;
  auto key = std::make_pair(p, name);
  auto it = cache.find(key);
  if (it == cache.end()) {
    for (auto& a : preset_algebras(p)) cache.emplace(std::make_pair(p, a.name()), a);
    it = cache.find(key);
  }
  if (it == cache.end()) throw std::out_of_range(name);
  return it->second;
}

// Poincare series of Tor^A(k, k) for A = k + V with V^2 = 0 is 1/(1 - dim V t).
std::vector<Int> square_zero_betti(Int v, int i_max) {
  std::vector<Int> out{1};
  for (int i = 1; i <= i_max; ++i) out.push_back(out.back() * v);
  return out;
}

std::vector<Int> times(std::vector<Int> v, Int k) {
  for (auto& x : v) x *= k;
  return v;
}

}  // namespace

TEST(FinAlgebra, CatalogLoadsForSmallPrimes) {
  for (Int p : {2, 3, 5}) {
    auto all = preset_algebras(p);
    EXPECT_EQ(all.size(), 7u);
    for (const auto& a : all) EXPECT_EQ(a.p(), p);
  }
  EXPECT_THROW(preset_algebras(4), InvalidAlgebra);
  EXPECT_THROW(preset_algebras(2, "/nonexistent/algebras.json"), std::runtime_error);
}

TEST(FinAlgebra, RejectsBadTables) {
  // x * x = 1 + x with augmentation [1, 1] is not multiplicative: 1 != 2 mod 3
  std::vector<std::vector<std::vector<Int>>> t{{{1, 0}, {0, 1}}, {{0, 1}, {1, 1}}};
  EXPECT_THROW(FinAlgebra("bad", 3, {"1", "x"}, 0, t, {1, 1}), InvalidAlgebra);
  // non-commutative table
  std::vector<std::vector<std::vector<Int>>> nc{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                                {{0, 1, 0}, {0, 0, 0}, {0, 0, 1}},
                                                {{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}};
  EXPECT_THROW(FinAlgebra("nc", 2, {"1", "a", "b"}, 0, nc, {1, 0, 0}), InvalidAlgebra);
}

TEST(FinAlgebra, RegularityMatchesReducedness) {
  for (Int p : {2, 3, 5}) {
    EXPECT_TRUE(preset(p, "k").regular());
    EXPECT_TRUE(preset(p, "k x k").regular());
    EXPECT_FALSE(preset(p, "k[x]/(x^2)").regular());
    EXPECT_FALSE(preset(p, "k[x]/(x^3)").regular());
    EXPECT_FALSE(preset(p, "k[x,y]/(x^2,xy,y^2)").regular());
    EXPECT_FALSE(preset(p, "k[x]/(x^2) x k").regular());
    // x^2 - 1 = (x + 1)^2 only in characteristic 2
    EXPECT_EQ(preset(p, "k[x]/(x^2-1)").regular(), p != 2);
  }
}

TEST(FinAlgebra, FrobeniusPowers) {
  const auto& a = preset(2, "k[x]/(x^3)");
  auto f1 = a.frobenius(1);
  EXPECT_EQ(f1[1], (FinAlgebra::Vec{0, 0, 1}));
  EXPECT_EQ(f1[2], (FinAlgebra::Vec{0, 0, 0}));
  auto f2 = a.frobenius(2);
  EXPECT_EQ(f2[1], (FinAlgebra::Vec{0, 0, 0}));
  EXPECT_EQ(f2[0], (FinAlgebra::Vec{1, 0, 0}));
}

TEST(FrobeniusTor, RelativeFrobeniusIsFlatOnPresets) {
  // A (x) A_phi is induced from A_phi along the free inclusion of the second
  // factor, so Tor_i = Tor^A_i(A_phi, A) which is A_phi in degree 0 only.
  for (Int p : {2, 3, 5})
    for (const auto& a : preset_algebras(p))
      for (int N : {1, 2}) {
        auto t = frobenius_tor(a, N, 3);
        std::vector<Int> want{static_cast<Int>(a.dim()), 0, 0, 0};
        EXPECT_EQ(t.dims, want) << a.name() << " p=" << p << " N=" << N;
      }
}

TEST(FrobeniusTor, DualNumbersAndTruncatedLine) {
  EXPECT_EQ(frobenius_tor(preset(2, "k[x]/(x^2)"), 1, 3).dims, (std::vector<Int>{2, 0, 0, 0}));
  EXPECT_EQ(frobenius_tor(preset(3, "k[x]/(x^3)"), 1, 2).dims, (std::vector<Int>{3, 0, 0}));
  EXPECT_EQ(frobenius_tor(preset(5, "k"), 2, 3).dims, (std::vector<Int>{1, 0, 0, 0}));
}

TEST(FrobeniusTor, SizeCap) {
  EXPECT_THROW(frobenius_tor(preset(2, "k[x]/(x^3)"), 1, 3, 1000), SizeCapExceeded);
  // 3^2 * 3^5 by 3^2 * 3^4 exceeds the default cap
  EXPECT_THROW(frobenius_tor(preset(2, "k[x]/(x^3)"), 1, 4), SizeCapExceeded);
}

TEST(OrdinaryFrobeniusTor, KunzContrast) {
  for (Int p : {2, 3, 5}) {
    // phi kills the maximal ideal: A_phi is a sum of dim A copies of k.
    EXPECT_EQ(ordinary_frobenius_tor(preset(p, "k[x]/(x^2)"), 3).dims, times(square_zero_betti(1, 3), 2));
    EXPECT_EQ(ordinary_frobenius_tor(preset(p, "k[x,y]/(x^2,xy,y^2)"), 3).dims, times(square_zero_betti(2, 3), 3));
    EXPECT_EQ(ordinary_frobenius_tor(preset(p, "k[x]/(x^2) x k"), 3).dims, times(square_zero_betti(1, 3), 2));
    EXPECT_EQ(ordinary_frobenius_tor(preset(p, "k"), 3).dims, (std::vector<Int>{1, 0, 0, 0}));
    EXPECT_EQ(ordinary_frobenius_tor(preset(p, "k x k"), 3).dims, (std::vector<Int>{1, 0, 0, 0}));
  }
  // over F_2, x -> x^2 on k[x]/(x^3) makes A_phi = A/(x^2) + k, each with
  // periodic resolutions of rank one.
  EXPECT_EQ(ordinary_frobenius_tor(preset(2, "k[x]/(x^3)"), 3).dims, (std::vector<Int>{2, 2, 2, 2}));
  EXPECT_EQ(ordinary_frobenius_tor(preset(3, "k[x]/(x^3)"), 3).dims, (std::vector<Int>{3, 3, 3, 3}));
  EXPECT_EQ(ordinary_frobenius_tor(preset(2, "k[x]/(x^2-1)"), 3).dims, (std::vector<Int>{2, 2, 2, 2}));
  EXPECT_EQ(ordinary_frobenius_tor(preset(3, "k[x]/(x^2-1)"), 3).dims, (std::vector<Int>{1, 0, 0, 0}));
}

TEST(OrdinaryFrobeniusTor, HigherVanishingIffRegular) {
  for (Int p : {2, 3, 5})
    for (const auto& a : preset_algebras(p)) {
      auto t = ordinary_frobenius_tor(a, 2);
      EXPECT_EQ(t.dims[1] == 0 && t.dims[2] == 0, a.regular()) << a.name() << " p=" << p;
    }
}

TEST(CharpProbe, QuadricRuling) {
  auto g = make_geometry("p1xp1");
  auto rep = charp_vanishing_probe(*g, {1, 0}, 1, {-2, -2}, {2, 3, 5}, 3);
  EXPECT_EQ(rep.status, ProbeStatus::Pass);
  EXPECT_EQ(rep.certificate_N, 2);
  EXPECT_EQ(rep.reg_M, 3);
  ASSERT_EQ(rep.rows.size(), 12u);
  for (const auto& r : rep.rows) {
    Int pb = ipow(r.p, r.b);
    EXPECT_EQ(r.multiple, 2 * pb);
    EXPECT_EQ(r.required, pb >= 3);
    // Kunneth: h^i(O(2 p^b - 2, -2)) has h^1 = 2 p^b - 1 and nothing else
    EXPECT_EQ(r.dims, (IntVec{0, 2 * pb - 1, 0}));
    EXPECT_TRUE(r.vanishes);
  }
}

TEST(CharpProbe, HypothesisFailure) {
  auto g = make_geometry("p1xp1");
  auto rep = charp_vanishing_probe(*g, {-1, 0}, 1, {-2, -2}, {2, 3}, 2);
  EXPECT_EQ(rep.status, ProbeStatus::HypothesisFails);
  EXPECT_TRUE(rep.rows.empty());
  EXPECT_STREQ(probe_status_name(rep.status), "HYPOTHESIS_FAILS");
}

TEST(CharpProbe, RejectsNonPrimesAndFlags) {
  auto g = make_geometry("p1xp1");
  EXPECT_THROW(charp_vanishing_probe(*g, {1, 0}, 1, {0, 0}, {4}, 1), UnsupportedCharacteristic);
  EXPECT_THROW(charp_vanishing_probe(*make_geometry("sl3b"), {1, 0}, 1, {0, 0}, {2}, 1), UnsupportedGeometry);
}
