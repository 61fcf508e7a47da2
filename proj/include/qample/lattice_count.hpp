#pragma once

// Exact lattice-point counts in boxes cut by integral half-planes. The 2D
// count walks the breakpoints of the upper and lower envelopes and sums each
// linear piece with a floor-sum, so its cost does not grow with the box.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "qample/arith.hpp"

namespace qample {

using i128 = __int128;

namespace detail {

inline i128 floor_div128(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i128 ceil_div128(i128 a, i128 b) { return -floor_div128(-a, b); }

inline i128 floor_sum_unsigned(i128 n, i128 m, i128 a, i128 b) {
  i128 ans = 0;
  while (true) {
    if (a >= m) {
      ans += n * (n - 1) / 2 * (a / m);
      a %= m;
    }
    if (b >= m) {
      ans += n * (b / m);
      b %= m;
    }
    i128 y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return ans;
}

}  // namespace detail

// sum_{i=0}^{n-1} floor((a*i + b) / m) for m > 0, n >= 0.
inline i128 floor_sum(i128 n, i128 m, i128 a, i128 b) {
  if (n <= 0) return 0;
  i128 ans = 0;
  i128 a2 = a % m;
  if (a2 < 0) a2 += m;
  ans += n * (n - 1) / 2 * ((a - a2) / m);
  i128 b2 = b % m;
  if (b2 < 0) b2 += m;
  ans += n * ((b - b2) / m);
  return ans + detail::floor_sum_unsigned(n, m, a2, b2);
}

// alpha*x + beta*y <= gamma
struct HalfPlane {
  Int alpha, beta, gamma;
};

namespace detail {

struct Frac {
  i128 num, den;  // den > 0
};

inline bool frac_less(const Frac& a, const Frac& b) { return a.num * b.den < b.num * a.den; }
inline bool frac_eq(const Frac& a, const Frac& b) { return a.num * b.den == b.num * a.den; }

// Value of the bounding line (gamma - alpha x)/beta at x = p/q, as a fraction
// with positive denominator.
inline Frac line_at(const HalfPlane& h, const Frac& x) {
  i128 num = static_cast<i128>(h.gamma) * x.den - static_cast<i128>(h.alpha) * x.num;
  i128 den = static_cast<i128>(h.beta) * x.den;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return {num, den};
}

// sum over x in [x0, x1] of floor((gamma - alpha x) / beta), beta > 0.
inline i128 sum_floor_line(const HalfPlane& h, Int x0, Int x1) {
  if (x1 < x0) return 0;
  i128 n = static_cast<i128>(x1) - x0 + 1;
  return floor_sum(n, h.beta, -static_cast<i128>(h.alpha), static_cast<i128>(h.gamma) - static_cast<i128>(h.alpha) * x0);
}

// sum over x in [x0, x1] of ceil((gamma - alpha x) / beta), beta < 0.
inline i128 sum_ceil_line(const HalfPlane& h, Int x0, Int x1) {
  // ceil((g - a x)/b) = -floor((g - a x)/(-b))
  if (x1 < x0) return 0;
  i128 n = static_cast<i128>(x1) - x0 + 1;
  return -floor_sum(n, -static_cast<i128>(h.beta), -static_cast<i128>(h.alpha),
                    static_cast<i128>(h.gamma) - static_cast<i128>(h.alpha) * x0);
}

}  // namespace detail

// Number of integer points (x, y) with xlo <= x <= xhi, ylo <= y <= yhi and
// every half-plane satisfied.
inline i128 count_polygon(const std::vector<HalfPlane>& planes, Int xlo, Int xhi, Int ylo, Int yhi) {
  using namespace detail;
  if (xlo > xhi || ylo > yhi) return 0;
  std::vector<HalfPlane> upper{{0, 1, yhi}}, lower{{0, -1, -ylo}};
  Int xl = xlo, xr = xhi;
  for (const auto& h : planes) {
    if (h.beta > 0) {
      upper.push_back(h);
    } else if (h.beta < 0) {
      lower.push_back(h);
    } else if (h.alpha > 0) {
      xr = std::min(xr, floor_div(h.gamma, h.alpha));
    } else if (h.alpha < 0) {
      xl = std::max(xl, ceil_div(h.gamma, h.alpha));
    } else if (h.gamma < 0) {
      return 0;
    }
  }
  if (xl > xr) return 0;

  std::vector<Frac> breaks{{xl, 1}, {xr, 1}};
  std::vector<HalfPlane> all(upper);
  all.insert(all.end(), lower.begin(), lower.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const auto& p = all[i];
      const auto& q = all[j];
      i128 den = static_cast<i128>(p.alpha) * q.beta - static_cast<i128>(q.alpha) * p.beta;
      if (den == 0) continue;
      i128 num = static_cast<i128>(p.gamma) * q.beta - static_cast<i128>(q.gamma) * p.beta;
      if (den < 0) {
        num = -num;
        den = -den;
      }
      Frac x{num, den};
      if (frac_less(Frac{xl, 1}, x) && frac_less(x, Frac{xr, 1})) breaks.push_back(x);
    }
  std::sort(breaks.begin(), breaks.end(), frac_less);
  breaks.erase(std::unique(breaks.begin(), breaks.end(), frac_eq), breaks.end());
  if (breaks.size() == 1) breaks.push_back(breaks[0]);

  i128 total = 0;
  for (std::size_t t = 0; t + 1 < breaks.size(); ++t) {
    const Frac& b0 = breaks[t];
    const Frac& b1 = breaks[t + 1];
    Int start = t == 0 ? xl : static_cast<Int>(floor_div128(b0.num, b0.den)) + 1;
    Int end = static_cast<Int>(floor_div128(b1.num, b1.den));
    if (start > end) continue;
    Frac mid{b0.num * b1.den + b1.num * b0.den, 2 * b0.den * b1.den};
    const HalfPlane* up = &upper[0];
    Frac best = line_at(*up, mid);
    for (const auto& h : upper) {
      Frac v = line_at(h, mid);
      if (frac_less(v, best)) {
        best = v;
        up = &h;
      }
    }
    const HalfPlane* lo = &lower[0];
    Frac worst = line_at(*lo, mid);
    for (const auto& h : lower) {
      Frac v = line_at(h, mid);
      if (frac_less(worst, v)) {
        worst = v;
        lo = &h;
      }
    }
    // Restrict to the x where the upper line is above the lower one:
    // c x >= e with c = b2 a1 - b1 a2, e = b2 g1 - b1 g2.
    i128 c = static_cast<i128>(lo->beta) * up->alpha - static_cast<i128>(up->beta) * lo->alpha;
    i128 e = static_cast<i128>(lo->beta) * up->gamma - static_cast<i128>(up->beta) * lo->gamma;
    i128 s = start, f = end;
    if (c > 0) {
      s = std::max(s, ceil_div128(e, c));
    } else if (c < 0) {
      f = std::min(f, floor_div128(e, c));
    } else if (e > 0) {
      continue;
    }
    if (s > f) continue;
    Int si = static_cast<Int>(s), fi = static_cast<Int>(f);
    total += sum_floor_line(*up, si, fi) - sum_ceil_line(*lo, si, fi) + (f - s + 1);
  }
  return total;
}

// Brute-force reference for count_polygon.
inline i128 count_polygon_naive(const std::vector<HalfPlane>& planes, Int xlo, Int xhi, Int ylo, Int yhi) {
  i128 total = 0;
  for (Int x = xlo; x <= xhi; ++x)
    for (Int y = ylo; y <= yhi; ++y) {
      bool ok = true;
      for (const auto& h : planes)
        if (static_cast<i128>(h.alpha) * x + static_cast<i128>(h.beta) * y > h.gamma) {
          ok = false;
          break;
        }
      if (ok) ++total;
    }
  return total;
}

}  // namespace qample
