#pragma once

// Castelnuovo-Mumford regularity of line bundles relative to a polarization,
// and growth rates of h^i(mD).

#include <optional>
#include <string>
#include <vector>

#include "qample/geometry.hpp"

namespace qample {

struct SearchBoundExceeded : std::runtime_error {
  SearchBoundExceeded(Int lo_, Int hi_, const std::string& why)
      : std::runtime_error("regularity search window [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "] " + why),
        lo(lo_), hi(hi_) {}
  Int lo, hi;
};

// C(m): h^i(D + (m - i)H) = 0 for 1 <= i <= n.
inline bool regularity_condition(const Geometry& g, const IntVec& d, const IntVec& h, Int m) {
  for (int i = 1; i <= g.dim(); ++i) {
    auto t = added(d, scaled(h, checked_sub(m, i)));
    if (g.h(t, i) != 0) return false;
  }
  return true;
}

inline std::pair<Int, Int> default_regularity_window(const Geometry& g, const IntVec& d) {
  Int n = g.dim();
  Int r = checked_add(checked_mul(n + 1, g.coefficient_size(d)), n);
  return {-r, r};
}

inline Int regularity(const Geometry& g, const IntVec& d, const IntVec& h,
                      std::optional<std::pair<Int, Int>> window = std::nullopt) {
  if (g.dim() == 0) throw std::invalid_argument("regularity is -infinity on a point");
  auto [lo, hi] = window ? *window : default_regularity_window(g, d);
  if (regularity_condition(g, d, h, lo)) throw SearchBoundExceeded(lo, hi, "already regular at the lower end");
  for (Int m = lo + 1; m <= hi; ++m) {
    if (!regularity_condition(g, d, h, m)) continue;
    // m-regular implies (m+1)-regular; a failure here means H is not a
    // valid polarization for this scan.
    if (!regularity_condition(g, d, h, m + 1) || !regularity_condition(g, d, h, m + 2))
      throw std::logic_error("regularity condition is not monotone for " + g.name());
    return m;
  }
  throw SearchBoundExceeded(lo, hi, "never regular");
}

struct AsymptoticEstimate {
  Rational estimate;                // max of h^i(mD) n!/m^n over m in [m_max/2, m_max]
  std::optional<Rational> limit;    // leading term of the polynomial fitting the top half
  std::vector<Int> sequence;        // h^i(mD), m = 1..m_max
};

namespace detail {

// Coefficients (constant first) of the polynomial of degree < xs.size()
// through the points, by solving the Vandermonde system.
inline std::vector<Rational> interpolate(const std::vector<Int>& xs, const std::vector<Int>& ys) {
  const std::size_t k = xs.size();
  Matrix<RationalField> m(RationalField{}, k, k + 1);
  for (std::size_t r = 0; r < k; ++r) {
    Rational p = 1;
    for (std::size_t c = 0; c < k; ++c) {
      m(r, c) = p;
      p *= xs[r];
    }
    m(r, k) = Rational(ys[r]);
  }
  rref(m);
  std::vector<Rational> coeffs(k);
  for (std::size_t r = 0; r < k; ++r) coeffs[r] = m(r, k);
  return coeffs;
}

}  // namespace detail

inline AsymptoticEstimate asymptotic_h(const Geometry& g, const IntVec& d, int i, int m_max) {
  if (m_max < 4) throw std::invalid_argument("m_max must be at least 4");
  const int n = g.dim();
  AsymptoticEstimate out;
  for (int m = 1; m <= m_max; ++m) out.sequence.push_back(g.h(scaled(d, m), i));
  const Int nf = factorial(n);
  bool first = true;
  for (int m = m_max / 2; m <= m_max; ++m) {
    Rational v(checked_mul(out.sequence[static_cast<std::size_t>(m - 1)], nf));
    v /= Rational(ipow(m, n));
    if (first || v > out.estimate) out.estimate = v;
    first = false;
  }
  std::vector<Int> xs, ys;
  for (int m = m_max - n; m <= m_max; ++m) {
    xs.push_back(m);
    ys.push_back(out.sequence[static_cast<std::size_t>(m - 1)]);
  }
  auto coeffs = detail::interpolate(xs, ys);
  bool fits = true;
  for (int m = m_max / 2; m <= m_max && fits; ++m) {
    Rational v = 0, p = 1;
    for (const auto& c : coeffs) {
      v += c * p;
      p *= m;
    }
    fits = v == Rational(out.sequence[static_cast<std::size_t>(m - 1)]);
  }
  if (fits) out.limit = coeffs[static_cast<std::size_t>(n)] * Rational(nf);
  return out;
}

}  // namespace qample
