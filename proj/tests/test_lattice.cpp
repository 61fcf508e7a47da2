#include <gtest/gtest.h>

#include "qample/geometry.hpp"
#include "qample/json_io.hpp"

using namespace qample;

namespace {

FanError::Kind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const FanError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no FanError thrown";
  return FanError::Kind::InvalidInput;
}

}  // namespace

TEST(BuildFan, ProjectiveLine) {
  auto f = p1_fan();
  EXPECT_EQ(f.rank(), 1);
  EXPECT_EQ(f.num_rays(), 2);
  EXPECT_EQ(f.f_vector(), (std::vector<std::size_t>{1, 2}));
}

TEST(BuildFan, QuadrantFan) {
  auto f = p1xp1_fan();
  EXPECT_EQ(f.f_vector(), (std::vector<std::size_t>{1, 4, 4}));
}

TEST(BuildFan, Rejections) {
  EXPECT_EQ(kind_of([] { build_fan(1, {{2}, {-1}}, {{0}, {1}}); }), FanError::Kind::NonPrimitiveRay);
  EXPECT_EQ(kind_of([] { build_fan(2, {{1, 0}, {1, 2}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }),
            FanError::Kind::NotSmooth);
  // P^2 with one cone missing.
  EXPECT_EQ(kind_of([] { build_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}}); }),
            FanError::Kind::NotComplete);
  // A fourth cone overlapping an existing one.
  EXPECT_EQ(kind_of([] {
              build_fan(2, {{1, 0}, {0, 1}, {-1, -1}, {1, 1}}, {{0, 1}, {1, 2}, {0, 2}, {0, 3}});
            }),
            FanError::Kind::BadFaceStructure);
  EXPECT_EQ(kind_of([] { build_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}, {1, 0}}); }),
            FanError::Kind::BadFaceStructure);
  EXPECT_EQ(kind_of([] { build_fan(2, {{1, 0}, {0, 1}}, {{0, 5}}); }), FanError::Kind::InvalidInput);
  // Lower-dimensional maximal cones cannot cover the plane.
  EXPECT_EQ(kind_of([] { build_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0}, {1}, {2}}); }),
            FanError::Kind::NotComplete);
}

TEST(ProductFan, P1TimesP1) {
  auto f = product_fan(p1_fan(), p1_fan());
  EXPECT_EQ(f.rank(), 2);
  EXPECT_EQ(f.num_rays(), 4);
  EXPECT_EQ(f.max_cones().size(), 4u);
}

TEST(ProductFan, P1TimesP2) {
  auto f = product_fan(p1_fan(), p2_fan());
  EXPECT_EQ(f.rank(), 3);
  EXPECT_EQ(f.num_rays(), 5);
  EXPECT_EQ(f.max_cones().size(), 6u);
}

TEST(ProductFan, PointIsIdentity) {
  auto f = product_fan(p1_fan(), point_fan());
  EXPECT_TRUE(f.same_structure(p1_fan()));
}

TEST(ProductFan, FVectorMultiplicative) {
  std::vector<Fan> fans{p1_fan(), p2_fan(), p1xp1_fan(), hirzebruch1_fan()};
  for (const auto& a : fans)
    for (const auto& b : fans) {
      if (a.rank() + b.rank() > 4) continue;
      auto p = product_fan(a, b);
      auto fa = a.f_vector(), fb = b.f_vector(), fp = p.f_vector();
      for (std::size_t d = 0; d < fp.size(); ++d) {
        std::size_t expect = 0;
        for (std::size_t i = 0; i <= d; ++i)
          if (i < fa.size() && d - i < fb.size()) expect += fa[i] * fb[d - i];
        EXPECT_EQ(fp[d], expect) << a.name() << " x " << b.name() << " dim " << d;
      }
    }
}

TEST(SplitBundle, TrivialTwistGivesProduct) {
  auto f = projectivized_split_bundle_fan(p1_fan(), {0, 0});
  EXPECT_EQ(f.num_rays(), 4);
  // Same rays as P^1 x P^1 up to order.
  auto rays = f.rays();
  std::sort(rays.begin(), rays.end());
  auto expect = p1xp1_fan().rays();
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(rays, expect);
}

TEST(SplitBundle, Hirzebruch) {
  auto f = hirzebruch1_fan();
  EXPECT_EQ(f.rank(), 2);
  EXPECT_EQ(f.num_rays(), 4);
  // The lifted base rays sum to the negative fibre direction: F_1.
  EXPECT_EQ(added(f.ray(0), f.ray(1)), (IntVec{0, -1}));
}

TEST(SplitBundle, TotaroFan) {
  auto f = totaro_fan();
  EXPECT_EQ(f.rank(), 3);
  EXPECT_EQ(f.num_rays(), 6);
  EXPECT_EQ(f.max_cones().size(), 8u);
  EXPECT_EQ(f.ray(0), (IntVec{1, 0, 1}));
  EXPECT_EQ(f.ray(1), (IntVec{0, 1, -1}));
  EXPECT_EQ(f.ray(4), (IntVec{0, 0, 1}));
  EXPECT_EQ(f.ray(5), (IntVec{0, 0, -1}));
}

TEST(OrbitClosures, TotaroSurfaces) {
  auto f = std::make_shared<const Fan>(totaro_fan());
  auto surfaces = orbit_closures(f, 2);
  ASSERT_EQ(surfaces.size(), 6u);
  for (const auto& s : surfaces) {
    EXPECT_EQ(s.quotient.rank(), 2);
    // Sections are P^1 x P^1 (4 rays); the vertical surfaces are Hirzebruch
    // surfaces (4 rays) too.
    EXPECT_EQ(s.quotient.num_rays(), 4);
  }
}

TEST(OrbitClosures, Curves) {
  auto f = std::make_shared<const Fan>(p1xp1_fan());
  auto curves = orbit_closures(f, 1);
  EXPECT_EQ(curves.size(), 4u);
  for (const auto& c : curves) EXPECT_EQ(c.quotient.num_rays(), 2);
}

TEST(OrbitClosures, WholeVariety) {
  for (auto fan : {p1xp1_fan(), totaro_fan(), p2_fan()}) {
    auto f = std::make_shared<const Fan>(fan);
    auto top = orbit_closures(f, f->rank());
    ASSERT_EQ(top.size(), 1u);
    EXPECT_TRUE(top[0].cone.empty());
    EXPECT_TRUE(top[0].quotient.same_structure(*f));
  }
}

TEST(OrbitClosures, AllQuotientsValid) {
  for (auto fan : {p1xp1_fan(), totaro_fan(), p2_fan(), product_fan(p1_fan(), p2_fan())}) {
    auto f = std::make_shared<const Fan>(fan);
    for (int d = 1; d <= f->rank(); ++d) {
      auto list = orbit_closures(f, d);
      EXPECT_EQ(list.size(), f->cones(f->rank() - d).size());
      for (const auto& oc : list) {
        EXPECT_EQ(oc.quotient.rank(), d);
        EXPECT_NO_THROW(build_fan(oc.quotient.rank(), oc.quotient.rays(), oc.quotient.max_cones()));
      }
    }
  }
}

TEST(FanJson, RoundTrip) {
  auto f = totaro_fan();
  auto j = fan_to_json(f);
  auto g = fan_from_json(j);
  EXPECT_TRUE(f.same_structure(g));
  EXPECT_EQ(f.hash(), g.hash());
}

TEST(FanJson, DecimalStrings) {
  auto j = nlohmann::json::parse(R"({"rank": "1", "rays": [["1"], [-1]], "max_cones": [[0], ["1"]], "name": "p1"})");
  EXPECT_TRUE(fan_from_json(j).same_structure(p1_fan()));
  auto big = nlohmann::json::parse(R"({"rank": 1, "rays": [["99999999999999999999999"], [-1]], "max_cones": [[0], [1]]})");
  EXPECT_THROW(fan_from_json(big), ArithmeticOverflow);
}
