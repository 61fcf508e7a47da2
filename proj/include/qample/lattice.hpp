#pragma once

// Smooth complete fans: validation, products, projectivized split bundles
// and orbit-closure (star) quotient fans.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qample/arith.hpp"
#include "qample/polyhedron.hpp"

namespace qample {

// Sorted ray indices.
using Cone = std::vector<int>;

class FanError : public std::invalid_argument {
 public:
  enum class Kind { InvalidInput, NonPrimitiveRay, NotSmooth, NotComplete, BadFaceStructure };

  FanError(Kind kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(FanError::Kind k) {
  switch (k) {
    case FanError::Kind::InvalidInput: return "InvalidInput";
    case FanError::Kind::NonPrimitiveRay: return "NonPrimitiveRay";
    case FanError::Kind::NotSmooth: return "NotSmooth";
    case FanError::Kind::NotComplete: return "NotComplete";
    case FanError::Kind::BadFaceStructure: return "BadFaceStructure";
  }
  return "?";
}

// Determinant of a small square integer matrix (rows), exact.
inline Int determinant(std::vector<IntVec> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det.get_num().get_si();
}

// Inverse of a unimodular integer matrix given by its rows.
inline std::vector<IntVec> unimodular_inverse(const std::vector<IntVec>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    std::swap(a[p], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  std::vector<IntVec> out(n, IntVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][n + j].get_den() != 1) throw std::domain_error("matrix is not unimodular");
      out[i][j] = a[i][n + j].get_num().get_si();
    }
  return out;
}

class Fan {
 public:
  int rank() const { return rank_; }
  const std::vector<IntVec>& rays() const { return rays_; }
  const IntVec& ray(int i) const { return rays_[static_cast<std::size_t>(i)]; }
  int num_rays() const { return static_cast<int>(rays_.size()); }
  const std::vector<Cone>& max_cones() const { return max_cones_; }
  const std::string& name() const { return name_; }

  // All cones of dimension d (as ray-index sets), in lexicographic order.
  const std::vector<Cone>& cones(int d) const { return faces_.at(static_cast<std::size_t>(d)); }
  bool is_cone(const Cone& c) const {
    const auto& list = faces_.at(c.size());
    return std::binary_search(list.begin(), list.end(), c);
  }
  std::vector<std::size_t> f_vector() const {
    std::vector<std::size_t> f;
    for (const auto& l : faces_) f.push_back(l.size());
    return f;
  }

  // Index of the first maximal cone containing all rays of `c`.
  std::size_t max_cone_containing(const Cone& c) const {
    for (std::size_t i = 0; i < max_cones_.size(); ++i)
      if (std::includes(max_cones_[i].begin(), max_cones_[i].end(), c.begin(), c.end())) return i;
    throw std::invalid_argument("not a cone of the fan");
  }

  // Stable content hash over rank, rays and maximal cones.
  std::uint64_t hash() const {
    std::string s = "rank=" + std::to_string(rank_) + ";rays=";
    for (const auto& r : rays_) s += "[" + join(r) + "]";
    s += ";cones=";
    for (const auto& c : max_cones_) s += "[" + join(IntVec(c.begin(), c.end())) + "]";
    return fnv1a(s);
  }

  // Inverse of the matrix whose rows are the rays of maximal cone i, in the
  // order of max_cones()[i]. Solves for Cartier data.
  const std::vector<IntVec>& cone_inverse(std::size_t i) const { return cone_inv_[i]; }

  bool same_structure(const Fan& o) const {
    return rank_ == o.rank_ && rays_ == o.rays_ && max_cones_ == o.max_cones_;
  }

 private:
  friend Fan build_fan(int, std::vector<IntVec>, std::vector<Cone>, std::string);

  int rank_ = 0;
  std::vector<IntVec> rays_;
  std::vector<Cone> max_cones_;
  std::vector<std::vector<Cone>> faces_;
  std::vector<std::vector<IntVec>> cone_inv_;
  std::string name_;
};

using FanPtr = std::shared_ptr<const Fan>;

namespace detail {

inline std::vector<IntVec> cone_rows(const std::vector<IntVec>& rays, const Cone& c) {
  std::vector<IntVec> rows;
  for (int i : c) rows.push_back(rays[static_cast<std::size_t>(i)]);
  return rows;
}

// Two simplicial cones meet in their common face iff some linear form is
// zero on the common rays, positive on the rest of the first cone and
// negative on the rest of the second.
inline bool meet_properly(const std::vector<IntVec>& rays, const Cone& a, const Cone& b, int n) {
  std::vector<LinearConstraint> cs;
  auto add = [&](const IntVec& u, int sign, bool strict) {
    LinearConstraint c;
    c.coeffs.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) c.coeffs[static_cast<std::size_t>(j)] = Rational(sign * u[static_cast<std::size_t>(j)]);
    c.rhs = 0;
    c.strict = strict;
    cs.push_back(std::move(c));
  };
  for (int i : a) {
    const auto& u = rays[static_cast<std::size_t>(i)];
    if (std::binary_search(b.begin(), b.end(), i)) {
      add(u, 1, false);
      add(u, -1, false);
    } else {
      add(u, -1, true);  // <m,u> > 0
    }
  }
  for (int i : b) {
    if (std::binary_search(a.begin(), a.end(), i)) continue;
    add(rays[static_cast<std::size_t>(i)], 1, true);  // <m,u> < 0
  }
  return feasible(std::move(cs), static_cast<std::size_t>(n));
}

inline void subsets_of_size(const Cone& c, std::size_t k, std::size_t start, Cone& cur, std::set<Cone>& out) {
  if (cur.size() == k) {
    out.insert(cur);
    return;
  }
  for (std::size_t i = start; i < c.size(); ++i) {
    cur.push_back(c[i]);
    subsets_of_size(c, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline Fan build_fan(int rank, std::vector<IntVec> rays, std::vector<Cone> max_cones, std::string name = "") {
  using K = FanError::Kind;
  if (rank < 0) throw FanError(K::InvalidInput, "negative rank");
  if (rank > 0 && rays.empty()) throw FanError(K::InvalidInput, "fan has no rays");
  for (const auto& r : rays) {
    if (static_cast<int>(r.size()) != rank) throw FanError(K::InvalidInput, "ray length differs from rank");
    if (gcd_of(r) != 1) throw FanError(K::NonPrimitiveRay, "ray [" + join(r) + "] is not primitive");
  }
  {
    auto sorted = rays;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw FanError(K::InvalidInput, "duplicate ray");
  }
  if (max_cones.empty()) throw FanError(K::InvalidInput, "no maximal cones");
  std::vector<bool> used(rays.size(), false);
  for (auto& c : max_cones) {
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw FanError(K::InvalidInput, "repeated ray in cone");
    for (int i : c) {
      if (i < 0 || i >= static_cast<int>(rays.size())) throw FanError(K::InvalidInput, "ray index out of range");
      used[static_cast<std::size_t>(i)] = true;
    }
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw FanError(K::InvalidInput, "ray not used by any maximal cone");
  {
    auto sorted = max_cones;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw FanError(K::BadFaceStructure, "duplicate maximal cone");
  }
  // A complete fan has only full-dimensional maximal cones.
  for (const auto& c : max_cones)
    if (static_cast<int>(c.size()) != rank)
      throw FanError(K::NotComplete, "maximal cone of dimension " + std::to_string(c.size()) +
                                         " in a rank " + std::to_string(rank) + " fan");
  for (const auto& c : max_cones) {
    Int d = determinant(detail::cone_rows(rays, c));
    if (d != 1 && d != -1)
      throw FanError(K::NotSmooth, "cone [" + join(IntVec(c.begin(), c.end())) + "] has determinant " +
                                       std::to_string(d));
  }
  for (std::size_t i = 0; i < max_cones.size(); ++i)
    for (std::size_t j = i + 1; j < max_cones.size(); ++j)
      if (!detail::meet_properly(rays, max_cones[i], max_cones[j], rank))
        throw FanError(K::BadFaceStructure, "cones [" + join(IntVec(max_cones[i].begin(), max_cones[i].end())) +
                                                "] and [" + join(IntVec(max_cones[j].begin(), max_cones[j].end())) +
                                                "] do not meet in a common face");

  std::vector<std::vector<Cone>> faces(static_cast<std::size_t>(rank) + 1);
  for (int d = 0; d <= rank; ++d) {
    std::set<Cone> s;
    for (const auto& c : max_cones) {
      Cone cur;
      detail::subsets_of_size(c, static_cast<std::size_t>(d), 0, cur, s);
    }
    faces[static_cast<std::size_t>(d)].assign(s.begin(), s.end());
  }

  if (rank >= 1) {
    // Every codimension-one cone lies on exactly two maximal cones.
    for (const auto& tau : faces[static_cast<std::size_t>(rank - 1)]) {
      int count = 0;
      for (const auto& c : max_cones)
        if (std::includes(c.begin(), c.end(), tau.begin(), tau.end())) ++count;
      if (count != 2)
        throw FanError(K::NotComplete, "wall [" + join(IntVec(tau.begin(), tau.end())) + "] lies on " +
                                           std::to_string(count) + " maximal cones");
    }
    // Adjacency graph of maximal cones is connected.
    std::vector<int> comp(max_cones.size(), -1);
    std::vector<std::size_t> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < max_cones.size(); ++j) {
        if (comp[j] >= 0) continue;
        Cone common;
        std::set_intersection(max_cones[i].begin(), max_cones[i].end(), max_cones[j].begin(), max_cones[j].end(),
                              std::back_inserter(common));
        if (static_cast<int>(common.size()) == rank - 1) {
          comp[j] = 0;
          stack.push_back(j);
        }
      }
    }
    if (std::find(comp.begin(), comp.end(), -1) != comp.end())
      throw FanError(K::NotComplete, "maximal cones are not connected through walls");
  }

  Fan f;
  f.rank_ = rank;
  f.rays_ = std::move(rays);
  f.max_cones_ = std::move(max_cones);
  f.faces_ = std::move(faces);
  for (const auto& c : f.max_cones_) f.cone_inv_.push_back(unimodular_inverse(detail::cone_rows(f.rays_, c)));
  f.name_ = std::move(name);
  return f;
}

inline Fan point_fan() { return build_fan(0, {}, {Cone{}}, "point"); }

inline Fan product_fan(const Fan& f1, const Fan& f2) {
  const int n1 = f1.rank(), n2 = f2.rank();
  std::vector<IntVec> rays;
  for (const auto& r : f1.rays()) {
    IntVec v(r);
    v.resize(static_cast<std::size_t>(n1 + n2), 0);
    rays.push_back(v);
  }
  for (const auto& r : f2.rays()) {
    IntVec v(static_cast<std::size_t>(n1), 0);
    v.insert(v.end(), r.begin(), r.end());
    rays.push_back(v);
  }
  std::vector<Cone> cones;
  for (const auto& a : f1.max_cones())
    for (const auto& b : f2.max_cones()) {
      Cone c(a);
      for (int i : b) c.push_back(i + f1.num_rays());
      cones.push_back(c);
    }
  std::string name = f1.name().empty() || f2.name().empty() ? "" : f1.name() + "x" + f2.name();
  return build_fan(n1 + n2, std::move(rays), std::move(cones), name);
}

// Fan of P(O + O(D)) over the base, D given by ray coefficients. Base rays
// u_i lift to (u_i, a_i); the fibre rays are (0,..,0,+1) and (0,..,0,-1),
// appended in that order.
inline Fan projectivized_split_bundle_fan(const Fan& base, const IntVec& twist_coeffs, std::string name = "") {
  if (static_cast<int>(twist_coeffs.size()) != base.num_rays())
    throw FanError(FanError::Kind::InvalidInput, "twist must have one coefficient per base ray");
  const int n = base.rank() + 1;
  std::vector<IntVec> rays;
  for (int i = 0; i < base.num_rays(); ++i) {
    IntVec v(base.ray(i));
    v.push_back(twist_coeffs[static_cast<std::size_t>(i)]);
    rays.push_back(v);
  }
  IntVec up(static_cast<std::size_t>(n), 0), down(static_cast<std::size_t>(n), 0);
  up.back() = 1;
  down.back() = -1;
  rays.push_back(up);
  rays.push_back(down);
  const int up_idx = base.num_rays(), down_idx = base.num_rays() + 1;
  std::vector<Cone> cones;
  for (const auto& c : base.max_cones()) {
    Cone a(c), b(c);
    a.push_back(up_idx);
    b.push_back(down_idx);
    cones.push_back(a);
    cones.push_back(b);
  }
  return build_fan(n, std::move(rays), std::move(cones), std::move(name));
}

struct OrbitClosure {
  FanPtr parent;
  Cone cone;                 // tau
  Fan quotient;              // star of tau in N / span(tau)
  std::map<int, int> ray_map;  // parent ray adjacent to tau -> quotient ray
  std::size_t chart;         // index of the parent maximal cone used for coordinates
};

// Orbit closures of dimension d: one per cone of dimension rank - d.
inline std::vector<OrbitClosure> orbit_closures(const FanPtr& fan, int d) {
  const int n = fan->rank();
  if (d <= 0 || d > n) throw std::invalid_argument("orbit closure dimension out of range");
  std::vector<OrbitClosure> out;
  for (const auto& tau : fan->cones(n - d)) {
    OrbitClosure oc;
    oc.parent = fan;
    oc.cone = tau;
    oc.chart = fan->max_cone_containing(tau);
    if (tau.empty()) {
      oc.quotient = *fan;
      for (int i = 0; i < fan->num_rays(); ++i) oc.ray_map[i] = i;
      out.push_back(std::move(oc));
      continue;
    }
    const Cone& sigma = fan->max_cones()[oc.chart];
    // Coordinates in the basis of sigma's rays; tau's coordinates are dropped.
    auto basis_rows = detail::cone_rows(fan->rays(), sigma);
    // basis_rows are the basis vectors; coords of v solve sum c_k b_k = v.
    std::vector<IntVec> bt(static_cast<std::size_t>(n), IntVec(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = basis_rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    auto inv = unimodular_inverse(bt);
    std::vector<int> keep;
    for (int k = 0; k < n; ++k)
      if (!std::binary_search(tau.begin(), tau.end(), sigma[static_cast<std::size_t>(k)])) keep.push_back(k);
    std::vector<IntVec> qrays;
    for (int r = 0; r < fan->num_rays(); ++r) {
      if (std::binary_search(tau.begin(), tau.end(), r)) continue;
      Cone with(tau);
      with.insert(std::upper_bound(with.begin(), with.end(), r), r);
      if (!fan->is_cone(with)) continue;
      IntVec coords(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i) {
        Int s = 0;
        for (int j = 0; j < n; ++j)
          s = checked_add(s, checked_mul(inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], fan->ray(r)[static_cast<std::size_t>(j)]));
        coords[static_cast<std::size_t>(i)] = s;
      }
      IntVec q;
      for (int k : keep) q.push_back(coords[static_cast<std::size_t>(k)]);
      oc.ray_map[r] = static_cast<int>(qrays.size());
      qrays.push_back(q);
    }
    std::vector<Cone> qcones;
    for (const auto& c : fan->max_cones()) {
      if (!std::includes(c.begin(), c.end(), tau.begin(), tau.end())) continue;
      Cone qc;
      for (int r : c)
        if (!std::binary_search(tau.begin(), tau.end(), r)) qc.push_back(oc.ray_map.at(r));
      std::sort(qc.begin(), qc.end());
      qcones.push_back(qc);
    }
    oc.quotient = build_fan(d, std::move(qrays), std::move(qcones),
                            fan->name() + "/V(" + join(IntVec(tau.begin(), tau.end())) + ")");
    out.push_back(std::move(oc));
  }
  return out;
}

}  // namespace qample
