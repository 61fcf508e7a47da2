#pragma once

// Torus-invariant divisors, Cartier data, classes in N^1(X), restriction to
// orbit closures and the polyhedral bigness / pseudoeffectivity tests.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "qample/arith.hpp"
#include "qample/lattice.hpp"
#include "qample/polyhedron.hpp"

namespace qample {

// D = sum_rho a_rho D_rho with one integer coefficient per ray.
struct ToricDivisor {
  FanPtr fan;
  IntVec coeffs;

  ToricDivisor() = default;
  ToricDivisor(FanPtr f, IntVec a) : fan(std::move(f)), coeffs(std::move(a)) {
    if (static_cast<int>(coeffs.size()) != fan->num_rays())
      throw std::invalid_argument("divisor needs one coefficient per ray");
  }

  ToricDivisor operator+(const ToricDivisor& o) const { return {fan, added(coeffs, o.coeffs)}; }
  ToricDivisor operator-(const ToricDivisor& o) const { return {fan, added(coeffs, negated(o.coeffs))}; }
  ToricDivisor operator-() const { return {fan, negated(coeffs)}; }
  ToricDivisor operator*(Int k) const { return {fan, scaled(coeffs, k)}; }
  bool operator==(const ToricDivisor& o) const { return coeffs == o.coeffs && fan->same_structure(*o.fan); }
};

// Per maximal cone sigma: the weight m_sigma with <m_sigma, u_rho> = -a_rho
// for rho in sigma.
struct CartierData {
  std::vector<IntVec> weights;
};

inline CartierData cartier_data(const ToricDivisor& d) {
  const Fan& f = *d.fan;
  CartierData cd;
  for (std::size_t s = 0; s < f.max_cones().size(); ++s) {
    const auto& cone = f.max_cones()[s];
    const auto& inv = f.cone_inverse(s);
    IntVec m(static_cast<std::size_t>(f.rank()), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      Int acc = 0;
      for (std::size_t j = 0; j < cone.size(); ++j)
        acc = checked_sub(acc, checked_mul(inv[i][j], d.coeffs[static_cast<std::size_t>(cone[j])]));
      m[i] = acc;
    }
    cd.weights.push_back(std::move(m));
  }
  return cd;
}

inline ToricDivisor principal_divisor(const FanPtr& fan, const IntVec& m) {
  IntVec a;
  for (const auto& u : fan->rays()) a.push_back(dot(m, u));
  return {fan, a};
}

inline ToricDivisor canonical_divisor(const FanPtr& fan) {
  return {fan, IntVec(static_cast<std::size_t>(fan->num_rays()), -1)};
}

inline ToricDivisor prime_divisor(const FanPtr& fan, int ray) {
  IntVec a(static_cast<std::size_t>(fan->num_rays()), 0);
  a.at(static_cast<std::size_t>(ray)) = 1;
  return {fan, a};
}

// Basis of N^1(X) for a smooth complete fan: the prime divisors of the rays
// outside one maximal cone sigma0 (the one whose complement is
// lexicographically smallest). The class of D is read off from
// D + div(chi^{m_sigma0}), which vanishes on sigma0.
struct NeronSeveriBasis {
  std::size_t chart;            // index of sigma0
  std::vector<int> basis_rays;  // rays outside sigma0, ascending

  std::string tag() const { return "rays:" + join(IntVec(basis_rays.begin(), basis_rays.end())); }
};

inline NeronSeveriBasis neron_severi_basis(const Fan& f) {
  NeronSeveriBasis best{0, {}};
  bool have = false;
  for (std::size_t s = 0; s < f.max_cones().size(); ++s) {
    std::vector<int> comp;
    for (int r = 0; r < f.num_rays(); ++r)
      if (!std::binary_search(f.max_cones()[s].begin(), f.max_cones()[s].end(), r)) comp.push_back(r);
    if (!have || comp < best.basis_rays) {
      best = {s, comp};
      have = true;
    }
  }
  return best;
}

inline int picard_rank(const Fan& f) { return f.num_rays() - f.rank(); }

struct NumericalClass {
  FanPtr fan;
  std::vector<Rational> coords;
  std::string basis_tag;

  bool operator==(const NumericalClass& o) const { return coords == o.coords && basis_tag == o.basis_tag; }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Rational& q) { return sgn(q) == 0; });
  }
  NumericalClass operator+(const NumericalClass& o) const {
    NumericalClass r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
  }
  NumericalClass operator-() const {
    NumericalClass r = *this;
    for (auto& c : r.coords) c = -c;
    return r;
  }
  NumericalClass scaled_by(const Rational& k) const {
    NumericalClass r = *this;
    for (auto& c : r.coords) c *= k;
    return r;
  }
};

inline NumericalClass class_of(const ToricDivisor& d) {
  const Fan& f = *d.fan;
  auto basis = neron_severi_basis(f);
  auto cd = cartier_data(d);
  const auto& m = cd.weights[basis.chart];
  NumericalClass c{d.fan, {}, basis.tag()};
  for (int r : basis.basis_rays)
    c.coords.emplace_back(checked_add(d.coeffs[static_cast<std::size_t>(r)], dot(m, f.ray(r))));
  return c;
}

// Rational divisor representing a class: supported on the basis rays.
inline std::vector<Rational> representative_coeffs(const NumericalClass& c) {
  auto basis = neron_severi_basis(*c.fan);
  std::vector<Rational> a(static_cast<std::size_t>(c.fan->num_rays()), Rational(0));
  for (std::size_t i = 0; i < basis.basis_rays.size(); ++i)
    a[static_cast<std::size_t>(basis.basis_rays[i])] = c.coords.at(i);
  return a;
}

// Integral divisor for an integral class.
inline ToricDivisor divisor_of_class(const NumericalClass& c) {
  auto a = representative_coeffs(c);
  IntVec out;
  for (const auto& q : a) {
    if (q.get_den() != 1) throw std::invalid_argument("class is not integral");
    out.push_back(q.get_num().get_si());
  }
  return {c.fan, out};
}

inline NumericalClass make_class(const FanPtr& fan, std::vector<Rational> coords) {
  auto basis = neron_severi_basis(*fan);
  if (coords.size() != basis.basis_rays.size()) throw std::invalid_argument("class has wrong dimension");
  return {fan, std::move(coords), basis.tag()};
}

// Restriction of O(D) to the orbit closure V(tau): shift D by the Cartier
// datum of the chart cone (so it vanishes near tau) and push the remaining
// coefficients of the rays adjacent to tau to the quotient fan.
inline ToricDivisor restrict_to(const ToricDivisor& d, const OrbitClosure& v, const FanPtr& quotient) {
  auto cd = cartier_data(d);
  const auto& m = cd.weights[v.chart];
  IntVec a(static_cast<std::size_t>(quotient->num_rays()), 0);
  for (const auto& [parent, q] : v.ray_map)
    a[static_cast<std::size_t>(q)] = checked_add(d.coeffs[static_cast<std::size_t>(parent)], dot(m, d.fan->ray(parent)));
  return {quotient, a};
}

inline ToricDivisor restrict_to(const ToricDivisor& d, const OrbitClosure& v) {
  if (v.cone.empty()) return d;
  return restrict_to(d, v, std::make_shared<const Fan>(v.quotient));
}

namespace detail {

// P_a = {m : <m, u_rho> >= -a_rho}; nonempty or (strict) full-dimensional.
inline bool section_polytope_test(const Fan& f, const std::vector<Rational>& a, bool strict) {
  if (f.rank() == 0) return true;
  std::vector<Rational> lower;
  for (const auto& x : a) lower.push_back(-x);
  return halfspaces_feasible(f.rays(), lower, static_cast<std::size_t>(f.rank()), strict);
}

inline std::vector<Rational> to_rational(const IntVec& v) {
  std::vector<Rational> r;
  for (Int x : v) r.emplace_back(x);
  return r;
}

}  // namespace detail

inline bool is_big(const ToricDivisor& d) {
  return detail::section_polytope_test(*d.fan, detail::to_rational(d.coeffs), true);
}

inline bool is_big(const NumericalClass& c) {
  return detail::section_polytope_test(*c.fan, representative_coeffs(c), true);
}

// The effective cone of a complete toric variety is spanned by the classes
// of the invariant prime divisors; c lies in it iff some representative has
// a nonempty section polytope.
inline bool is_pseudoeffective(const NumericalClass& c) {
  return detail::section_polytope_test(*c.fan, representative_coeffs(c), false);
}

inline bool is_pseudoeffective(const ToricDivisor& d) {
  return detail::section_polytope_test(*d.fan, detail::to_rational(d.coeffs), false);
}

inline const char* kEffectiveConeAssumption =
    "effective cone generated by the invariant prime divisors (toric)";

}  // namespace qample
