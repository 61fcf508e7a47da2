#pragma once

// Exact feasibility of systems of rational linear inequalities by
// Fourier-Motzkin elimination. Systems in this library have a handful of
// variables and at most a few dozen constraints.

#include <algorithm>
#include <vector>

#include "qample/arith.hpp"

namespace qample {

// coeffs . x <= rhs, or < when strict.
struct LinearConstraint {
  std::vector<Rational> coeffs;
  Rational rhs;
  bool strict = false;
};

namespace detail {

inline void normalize(LinearConstraint& c) {
  Rational scale = 0;
  for (const auto& a : c.coeffs)
    if (sgn(a) != 0) {
      scale = abs(a);
      break;
    }
  if (sgn(scale) == 0) return;
  for (auto& a : c.coeffs) a /= scale;
  c.rhs /= scale;
}

inline bool same_direction(const LinearConstraint& a, const LinearConstraint& b) {
  return a.coeffs == b.coeffs;
}

// Keeps only the tightest constraint among parallel ones.
inline std::vector<LinearConstraint> prune(std::vector<LinearConstraint> cs) {
  for (auto& c : cs) normalize(c);
  std::vector<LinearConstraint> out;
  for (auto& c : cs) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const LinearConstraint& o) { return same_direction(o, c); });
    if (it == out.end()) {
      out.push_back(std::move(c));
    } else if (c.rhs < it->rhs || (c.rhs == it->rhs && c.strict)) {
      *it = std::move(c);
    }
  }
  return out;
}

}  // namespace detail

inline bool feasible(std::vector<LinearConstraint> cs, std::size_t nvars) {
  for (std::size_t k = 0; k < nvars; ++k) {
    cs = detail::prune(std::move(cs));
    std::vector<LinearConstraint> pos, neg, next;
    for (auto& c : cs) {
      int s = sgn(c.coeffs[k]);
      if (s > 0) {
        pos.push_back(std::move(c));
      } else if (s < 0) {
        neg.push_back(std::move(c));
      } else {
        next.push_back(std::move(c));
      }
    }
    for (const auto& p : pos) {
      for (const auto& q : neg) {
        Rational wp = -q.coeffs[k];
        Rational wq = p.coeffs[k];
        LinearConstraint r;
        r.coeffs.resize(nvars);
        for (std::size_t i = 0; i < nvars; ++i) r.coeffs[i] = wp * p.coeffs[i] + wq * q.coeffs[i];
        r.coeffs[k] = 0;
        r.rhs = wp * p.rhs + wq * q.rhs;
        r.strict = p.strict || q.strict;
        next.push_back(std::move(r));
      }
    }
    cs = std::move(next);
  }
  for (const auto& c : cs) {
    if (c.strict ? !(0 < c.rhs) : !(0 <= c.rhs)) return false;
  }
  return true;
}

// Convenience: {m : <m, u_i> >= b_i} nonempty, or with all inequalities
// strict (equivalently: the polyhedron has full dimension).
inline bool halfspaces_feasible(const std::vector<IntVec>& normals, const std::vector<Rational>& lower,
                                std::size_t dim, bool strict) {
  std::vector<LinearConstraint> cs;
  for (std::size_t i = 0; i < normals.size(); ++i) {
    LinearConstraint c;
    c.coeffs.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) c.coeffs[j] = Rational(-normals[i][j]);
    c.rhs = -lower[i];
    c.strict = strict;
    cs.push_back(std::move(c));
  }
  return feasible(std::move(cs), dim);
}

}  // namespace qample
