#pragma once

// Geometries the positivity layer works on. Line bundles are integer
// parameter vectors in a fixed basis of N^1; classes are rational ones.
// Toric geometries map parameters to ray coefficients through a list of
// basis divisors; the flag 3-fold SL(3)/B is handled by Borel-Weil-Bott.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qample/cohomology.hpp"

namespace qample {

using ClassVec = std::vector<Rational>;

inline ClassVec to_class(const IntVec& v) {
  ClassVec c;
  for (Int x : v) c.emplace_back(x);
  return c;
}

struct UnsupportedGeometry : std::invalid_argument {
  explicit UnsupportedGeometry(const std::string& w) : std::invalid_argument("unsupported geometry: " + w) {}
};

class Geometry {
 public:
  virtual ~Geometry() = default;
  virtual const std::string& name() const = 0;
  virtual int dim() const = 0;
  virtual int picard_rank() const = 0;
  virtual IntVec cohomology(const IntVec& params, Int char_label = 0) const = 0;
  virtual bool is_big(const ClassVec& c) const = 0;
  virtual bool is_pseudoeffective(const ClassVec& c) const = 0;
  virtual IntVec polarization() const = 0;
  // Size of the coefficients, for search windows.
  virtual Int coefficient_size(const IntVec& params) const { return max_abs(params); }
  virtual bool toric() const { return false; }

  Int h(const IntVec& params, int i, Int char_label = 0) const {
    return cohomology(params, char_label).at(static_cast<std::size_t>(i));
  }
};

using GeometryPtr = std::shared_ptr<const Geometry>;

class ToricGeometry : public Geometry {
 public:
  ToricGeometry(FanPtr fan, std::string name, std::vector<IntVec> basis, IntVec polarization,
                std::shared_ptr<CohomologyCache> cache = nullptr, EngineOptions opts = {})
      : fan_(fan), name_(std::move(name)), basis_(std::move(basis)), polarization_(std::move(polarization)),
        engine_(std::make_shared<CohomologyEngine>(fan, opts, std::move(cache))) {
    if (static_cast<int>(basis_.size()) != qample::picard_rank(*fan_))
      throw std::invalid_argument("parameter basis must have Picard-rank many divisors");
  }

  // Basis = prime divisors of the rays outside the chart cone.
  static std::vector<IntVec> default_basis(const Fan& f) {
    std::vector<IntVec> b;
    for (int r : neron_severi_basis(f).basis_rays) {
      IntVec v(static_cast<std::size_t>(f.num_rays()), 0);
      v[static_cast<std::size_t>(r)] = 1;
      b.push_back(v);
    }
    return b;
  }

  const std::string& name() const override { return name_; }
  int dim() const override { return fan_->rank(); }
  int picard_rank() const override { return static_cast<int>(basis_.size()); }
  bool toric() const override { return true; }
  IntVec polarization() const override { return polarization_; }
  const FanPtr& fan() const { return fan_; }
  const CohomologyEngine& engine() const { return *engine_; }
  const std::vector<IntVec>& basis() const { return basis_; }

  IntVec coeffs(const IntVec& params) const {
    if (params.size() != basis_.size()) throw std::invalid_argument("wrong number of divisor parameters");
    IntVec a(static_cast<std::size_t>(fan_->num_rays()), 0);
    for (std::size_t i = 0; i < basis_.size(); ++i) a = added(a, scaled(basis_[i], params[i]));
    return a;
  }

  std::vector<Rational> rational_coeffs(const ClassVec& c) const {
    std::vector<Rational> a(static_cast<std::size_t>(fan_->num_rays()), Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t r = 0; r < a.size(); ++r) a[r] += c.at(i) * basis_[i][r];
    return a;
  }

  ToricDivisor divisor(const IntVec& params) const { return {fan_, coeffs(params)}; }

  IntVec cohomology(const IntVec& params, Int char_label = 0) const override {
    return engine_->compute(coeffs(params), char_label).dims;
  }

  bool is_big(const ClassVec& c) const override {
    return detail::section_polytope_test(*fan_, rational_coeffs(c), true);
  }
  bool is_pseudoeffective(const ClassVec& c) const override {
    return detail::section_polytope_test(*fan_, rational_coeffs(c), false);
  }
  Int coefficient_size(const IntVec& params) const override { return max_abs(coeffs(params)); }

 private:
  FanPtr fan_;
  std::string name_;
  std::vector<IntVec> basis_;
  IntVec polarization_;
  std::shared_ptr<CohomologyEngine> engine_;
};

// Line bundle L(a,b) on SL(3)/B with (a,b) the fundamental-weight
// coordinates. lambda+rho = (a+1, b+1); the positive roots pair to x, y, x+y.
inline IntVec flag3_cohomology(Int a, Int b, Int char_label = 0) {
  if (char_label != 0) throw UnsupportedCharacteristic(char_label);
  IntVec h(4, 0);
  Int x = checked_add(a, 1), y = checked_add(b, 1);
  if (x == 0 || y == 0 || x + y == 0) return h;
  int len = (x < 0) + (y < 0) + (x + y < 0);
  while (x < 0 || y < 0) {
    if (x < 0) {
      y = x + y;
      x = -x;
    } else {
      x = x + y;
      y = -y;
    }
  }
  h[static_cast<std::size_t>(len)] = checked_mul(checked_mul(x, y), x + y) / 2;
  return h;
}

class Flag3Geometry : public Geometry {
 public:
  const std::string& name() const override { return name_; }
  int dim() const override { return 3; }
  int picard_rank() const override { return 2; }
  IntVec cohomology(const IntVec& p, Int char_label = 0) const override {
    if (p.size() != 2) throw std::invalid_argument("SL(3)/B line bundles take two parameters");
    return flag3_cohomology(p[0], p[1], char_label);
  }
  // Effective cone = nef cone = closed positive quadrant.
  bool is_big(const ClassVec& c) const override { return sgn(c.at(0)) > 0 && sgn(c.at(1)) > 0; }
  bool is_pseudoeffective(const ClassVec& c) const override { return sgn(c.at(0)) >= 0 && sgn(c.at(1)) >= 0; }
  IntVec polarization() const override { return {1, 1}; }

 private:
  std::string name_ = "sl3b";
};

// Preset fans.

inline Fan p1_fan() { return build_fan(1, {{1}, {-1}}, {{0}, {1}}, "p1"); }

inline Fan p2_fan() { return build_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}, "p2"); }

inline Fan p1xp1_fan() {
  return build_fan(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, "p1xp1");
}

// F_1 as P(O + O(-1)) over P^1.
inline Fan hirzebruch1_fan() { return projectivized_split_bundle_fan(p1_fan(), {-1, 0}, "hirzebruch1"); }

// P(O + O(1,-1)) over P^1 x P^1. Rays 0..3 lie over the base rays, ray 4 is
// (0,0,1) and ray 5 is (0,0,-1).
inline Fan totaro_fan() { return projectivized_split_bundle_fan(p1xp1_fan(), {1, -1, 0, 0}, "totaro3fold"); }

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"p1", "p2", "p1xp1", "hirzebruch1", "totaro3fold", "sl3b"};
  return names;
}

inline IntVec unit(std::size_t n, std::size_t i) {
  IntVec v(n, 0);
  v[i] = 1;
  return v;
}

// Parameters: p1, p2: O(d); p1xp1: O(a,b); hirzebruch1: a D_0 + b D_2;
// totaro3fold: pi^*O(a,b) (x) O(c) = a D_0 + b D_1 + c D_5; sl3b: L(a,b).
inline GeometryPtr make_geometry(const std::string& name, std::shared_ptr<CohomologyCache> cache = nullptr,
                                 EngineOptions opts = {}) {
  auto fan_ptr = [](Fan f) { return std::make_shared<const Fan>(std::move(f)); };
  if (name == "p1") return std::make_shared<ToricGeometry>(fan_ptr(p1_fan()), name, std::vector<IntVec>{{1, 0}}, IntVec{1}, cache, opts);
  if (name == "p2")
    return std::make_shared<ToricGeometry>(fan_ptr(p2_fan()), name, std::vector<IntVec>{{1, 0, 0}}, IntVec{1}, cache, opts);
  if (name == "p1xp1")
    return std::make_shared<ToricGeometry>(fan_ptr(p1xp1_fan()), name, std::vector<IntVec>{unit(4, 0), unit(4, 1)},
                                           IntVec{1, 1}, cache, opts);
  if (name == "hirzebruch1")
    return std::make_shared<ToricGeometry>(fan_ptr(hirzebruch1_fan()), name,
                                           std::vector<IntVec>{unit(4, 0), unit(4, 2)}, IntVec{1, 1}, cache, opts);
  if (name == "totaro3fold")
    return std::make_shared<ToricGeometry>(fan_ptr(totaro_fan()), name,
                                           std::vector<IntVec>{unit(6, 0), unit(6, 1), unit(6, 5)}, IntVec{1, 2, 1},
                                           cache, opts);
  if (name == "sl3b") return std::make_shared<Flag3Geometry>();
  throw UnsupportedGeometry(name);
}

}  // namespace qample
