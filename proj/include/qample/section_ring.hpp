#pragma once

// Homogeneous coordinate rings of polarized toric varieties (or any graded
// monomial algebra given by point sets), the Koszul spaces B_m inside
// A_1^{(x)m}, minimal resolutions of k over A, and the complex (4) linking
// them:
//
//   A_{l-N+1} (x) K_{N-1,j} -> ... -> A_{l-1} (x) K_{1,j} -> A_l (x) A_j -> A_{j+l} -> 0
//
// with K_{t,j} = ker(B_t (x) A_j -> B_{t-1} (x) A_{j+1}).
//
// Tensor coordinates put the first factor in the most significant place.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qample/geometry.hpp"
#include "qample/linalg.hpp"

namespace qample {

struct NotAmple : std::runtime_error {
  explicit NotAmple(const std::string& w) : std::runtime_error("polarization is not ample: " + w) {}
};

struct WindowTooSmall : std::invalid_argument {
  WindowTooSmall(int need, int have)
      : std::invalid_argument("ring truncated at degree " + std::to_string(have) + ", need " + std::to_string(need)) {}
};

class GradedRing {
 public:
  // Degree-j basis = the given points, sorted lexicographically. The sets
  // must satisfy S_i + S_j within S_{i+j} and S_0 = {0}.
  static GradedRing from_points(std::vector<std::vector<IntVec>> pts, std::string name) {
    GradedRing r;
    r.name_ = std::move(name);
    r.pts_ = std::move(pts);
    if (r.pts_.empty() || r.pts_[0].size() != 1) throw std::invalid_argument("A_0 must be one-dimensional");
    for (auto& p : r.pts_) std::sort(p.begin(), p.end());
    for (const auto& p : r.pts_) {
      std::map<IntVec, std::size_t> m;
      for (std::size_t i = 0; i < p.size(); ++i) m.emplace(p[i], i);
      r.index_.push_back(std::move(m));
    }
    for (int i = 0; i <= r.J(); ++i)
      for (int j = i; i + j <= r.J(); ++j)
        for (const auto& a : r.pts_[static_cast<std::size_t>(i)])
          for (const auto& b : r.pts_[static_cast<std::size_t>(j)])
            if (!r.index_[static_cast<std::size_t>(i + j)].count(added(a, b)))
              throw std::invalid_argument("point sets are not closed under addition");
    for (int j = 1; j < r.J(); ++j) {
      std::vector<bool> hit(r.dim(j + 1), false);
      for (std::size_t a = 0; a < r.dim(1); ++a)
        for (std::size_t b = 0; b < r.dim(j); ++b) hit[r.mult(1, a, j, b)] = true;
      if (std::find(hit.begin(), hit.end(), false) != hit.end()) r.generation_failures_.push_back(j + 1);
    }
    return r;
  }

  // A_j = lattice points of j P_H.
  static GradedRing from_polarization(const ToricGeometry& g, const IntVec& h_params, int J) {
    for (int j = 1; j <= J; ++j) {
      auto h = g.cohomology(scaled(h_params, j));
      for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] != 0)
          throw NotAmple("h^" + std::to_string(i) + "(" + std::to_string(j) + "H) = " + std::to_string(h[i]));
    }
    std::vector<std::vector<IntVec>> pts;
    for (int j = 0; j <= J; ++j) pts.push_back(polytope_points(g.divisor(scaled(h_params, j))));
    return from_points(std::move(pts), g.name() + ":H=(" + join(h_params) + ")");
  }

  // Lattice points m with <m,u_rho> >= -a_rho.
  static std::vector<IntVec> polytope_points(const ToricDivisor& d) {
    auto box = weight_box(d, 0);
    const Fan& f = *d.fan;
    const auto n = static_cast<std::size_t>(f.rank());
    std::vector<IntVec> out;
    IntVec m = box.lo;
    while (true) {
      bool ok = true;
      for (int r = 0; r < f.num_rays() && ok; ++r) ok = dot(m, f.ray(r)) >= -d.coeffs[static_cast<std::size_t>(r)];
      if (ok) out.push_back(m);
      std::size_t k = n;
      while (k > 0) {
        --k;
        if (++m[k] <= box.hi[k]) break;
        m[k] = box.lo[k];
        if (k == 0) return out;
      }
      if (n == 0) return out;
    }
  }

  const std::string& name() const { return name_; }
  int J() const { return static_cast<int>(pts_.size()) - 1; }
  std::size_t dim(int j) const { return j < 0 || j > J() ? 0 : pts_[static_cast<std::size_t>(j)].size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (int j = 0; j <= J(); ++j) d.push_back(dim(j));
    return d;
  }
  const IntVec& point(int j, std::size_t i) const { return pts_[static_cast<std::size_t>(j)][i]; }

  // Index in A_{i+j} of the product of basis elements a of A_i and b of A_j.
  std::size_t mult(int i, std::size_t a, int j, std::size_t b) const {
    return index_.at(static_cast<std::size_t>(i + j)).at(added(point(i, a), point(j, b)));
  }

  bool degree_one_generated() const { return generation_failures_.empty(); }
  const std::vector<int>& generation_failures() const { return generation_failures_; }

 private:
  std::string name_;
  std::vector<std::vector<IntVec>> pts_;
  std::vector<std::map<IntVec, std::size_t>> index_;
  std::vector<int> generation_failures_;
};

inline GradedRing section_ring(const Geometry& g, const IntVec& h_params, int J) {
  const auto* t = dynamic_cast<const ToricGeometry*>(&g);
  if (!t) throw UnsupportedGeometry(g.name() + " has no lattice-point section ring");
  return GradedRing::from_polarization(*t, h_params, J);
}

inline std::size_t ipow_size(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

template <class F>
struct KoszulSpaces {
  F field;
  int N = 0;
  std::size_t d = 0;          // dim A_1
  std::vector<Matrix<F>> B;   // B[m]: rows span B_m inside A_1^{(x)m}

  std::size_t dim(int m) const { return m < 0 || m > N ? 0 : B[static_cast<std::size_t>(m)].rows(); }
};

template <class F>
KoszulSpaces<F> koszul_spaces(const GradedRing& A, int N, const F& field = F{}) {
  if (A.J() < N + 1) throw WindowTooSmall(N + 1, A.J());
  KoszulSpaces<F> ks{field, N, A.dim(1), {}};
  const std::size_t d = ks.d, d2 = A.dim(2);
  Matrix<F> b0(field, 1, 1);
  b0(0, 0) = field.one();
  ks.B.push_back(b0);
  if (N >= 1) {
    Matrix<F> b1(field, d, d);
    for (std::size_t i = 0; i < d; ++i) b1(i, i) = field.one();
    ks.B.push_back(b1);
  }
  for (int m = 2; m <= N; ++m) {
    const auto& prev = ks.B[static_cast<std::size_t>(m - 1)];
    const std::size_t amb = ipow_size(d, m), prefix = ipow_size(d, m - 2);
    // Image of b (x) e_l under id (x) mult, rows indexed by (row of b, l).
    Matrix<F> img(field, prev.rows() * d, prefix * d2);
    for (std::size_t r = 0; r < prev.rows(); ++r)
      for (std::size_t l = 0; l < d; ++l)
        for (std::size_t c = 0; c < prev.cols(); ++c) {
          if (field.is_zero(prev(r, c))) continue;
          std::size_t p = c / d, last = c % d;
          auto& cell = img(r * d + l, p * d2 + A.mult(1, last, 1, l));
          cell = field.add(cell, prev(r, c));
        }
    auto coeffs = kernel(transpose(img));
    Matrix<F> bm(field, coeffs.rows(), amb);
    for (std::size_t k = 0; k < coeffs.rows(); ++k)
      for (std::size_t r = 0; r < prev.rows(); ++r)
        for (std::size_t l = 0; l < d; ++l) {
          auto w = coeffs(k, r * d + l);
          if (field.is_zero(w)) continue;
          for (std::size_t c = 0; c < prev.cols(); ++c)
            if (!field.is_zero(prev(r, c))) bm(k, c * d + l) = field.add(bm(k, c * d + l), field.mul(w, prev(r, c)));
        }
    ks.B.push_back(row_basis(bm));
  }
  return ks;
}

// Rows span K_{t,j} = ker(B_t (x) A_j -> B_{t-1} (x) A_{j+1}) inside
// A_1^{(x)t} (x) A_j.
template <class F>
Matrix<F> koszul_kernel(const GradedRing& A, const KoszulSpaces<F>& ks, int t, int j) {
  const F& field = ks.field;
  const std::size_t aj = A.dim(j), aj1 = A.dim(j + 1), d = ks.d;
  if (t > ks.N) throw WindowTooSmall(t, ks.N);
  if (j + 1 > A.J()) throw WindowTooSmall(j + 1, A.J());
  const auto& bt = ks.B[static_cast<std::size_t>(t)];
  if (t == 0) {
    Matrix<F> id(field, aj, aj);
    for (std::size_t i = 0; i < aj; ++i) id(i, i) = field.one();
    return id;
  }
  const std::size_t prefix = ipow_size(d, t - 1);
  Matrix<F> img(field, bt.rows() * aj, prefix * aj1);
  for (std::size_t r = 0; r < bt.rows(); ++r)
    for (std::size_t y = 0; y < aj; ++y)
      for (std::size_t c = 0; c < bt.cols(); ++c) {
        if (field.is_zero(bt(r, c))) continue;
        std::size_t p = c / d, last = c % d;
        auto& cell = img(r * aj + y, p * aj1 + A.mult(1, last, j, y));
        cell = field.add(cell, bt(r, c));
      }
  auto coeffs = kernel(transpose(img));
  Matrix<F> out(field, coeffs.rows(), bt.cols() * aj);
  for (std::size_t k = 0; k < coeffs.rows(); ++k)
    for (std::size_t r = 0; r < bt.rows(); ++r)
      for (std::size_t y = 0; y < aj; ++y) {
        auto w = coeffs(k, r * aj + y);
        if (field.is_zero(w)) continue;
        for (std::size_t c = 0; c < bt.cols(); ++c)
          if (!field.is_zero(bt(r, c))) out(k, c * aj + y) = field.add(out(k, c * aj + y), field.mul(w, bt(r, c)));
      }
  return out;
}

// dim H^0(R_m(j)).
template <class F>
std::size_t rm_section_dims(const GradedRing& A, const KoszulSpaces<F>& ks, int m, int j) {
  return koszul_kernel(A, ks, m, j).rows();
}

enum class KoszulStatus { CertifiedInWindow, Failed };

struct KoszulCertificate {
  int N = 0;
  int window = 0;
  KoszulStatus status = KoszulStatus::CertifiedInWindow;
  int fail_i = -1, fail_j = -1;
  Int fail_dim = 0;
  std::vector<std::vector<Int>> tor_dims;  // [i][j], i <= N, j <= window
  Int field_char = 0;                      // field of the authoritative computation
  bool rational_confirmation = false;      // a prime-field failure was rechecked over Q
  bool degree_one_generated = true;

  bool certified() const { return status == KoszulStatus::CertifiedInWindow; }
};

namespace detail {

// Graded free module sum_s A(-g_s); degree-d coordinates are the blocks
// A_{d - g_s} in generator order.
struct FreeModule {
  std::vector<int> gens;
  std::size_t offset(const GradedRing& A, int d, std::size_t s) const {
    std::size_t o = 0;
    for (std::size_t t = 0; t < s; ++t) o += A.dim(d - gens[t]);
    return o;
  }
  std::size_t dim(const GradedRing& A, int d) const { return offset(A, d, gens.size()); }
};

// x * v for a monomial x in A_e and v in degree dv of the free module.
template <class F>
std::vector<typename F::Elem> monomial_times(const GradedRing& A, const FreeModule& M, const F& field, int e,
                                             std::size_t x, const std::vector<typename F::Elem>& v, int dv) {
  std::vector<typename F::Elem> out(M.dim(A, dv + e), field.zero());
  for (std::size_t s = 0; s < M.gens.size(); ++s) {
    int ds = dv - M.gens[s];
    if (ds < 0) continue;
    std::size_t in_off = M.offset(A, dv, s), out_off = M.offset(A, dv + e, s);
    for (std::size_t y = 0; y < A.dim(ds); ++y) {
      const auto& c = v[in_off + y];
      if (field.is_zero(c)) continue;
      auto& cell = out[out_off + A.mult(e, x, ds, y)];
      cell = field.add(cell, c);
    }
  }
  return out;
}

template <class F>
KoszulCertificate resolve(const GradedRing& A, int N, int window, const F& field) {
  KoszulCertificate cert;
  cert.N = N;
  cert.window = window;
  cert.field_char = field.characteristic();
  cert.degree_one_generated = A.degree_one_generated();
  cert.tor_dims.assign(static_cast<std::size_t>(N) + 1, std::vector<Int>(static_cast<std::size_t>(window) + 1, 0));
  cert.tor_dims[0][0] = 1;

  using Vec = std::vector<typename F::Elem>;
  // Current free module F_i and the images of its generators in F_{i-1}.
  FreeModule cur{{0}};
  FreeModule prev{};
  std::vector<Vec> cur_images;  // empty for F_0 (augmentation handled separately)

  for (int i = 0; i < N; ++i) {
    // K_{i,d} for d <= window.
    std::vector<Matrix<F>> K;
    for (int d = 0; d <= window; ++d) {
      const std::size_t dim_d = cur.dim(A, d);
      if (i == 0) {
        Matrix<F> k(field, 0, dim_d);
        if (d > 0)
          for (std::size_t y = 0; y < dim_d; ++y) {
            Vec row(dim_d, field.zero());
            row[y] = field.one();
            k.append_row(row);
          }
        K.push_back(k);
        continue;
      }
      // Rows: images of the degree-d basis of F_i in F_{i-1}.
      Matrix<F> img(field, dim_d, prev.dim(A, d));
      for (std::size_t s = 0; s < cur.gens.size(); ++s) {
        int ds = d - cur.gens[s];
        if (ds < 0) continue;
        std::size_t off = cur.offset(A, d, s);
        for (std::size_t x = 0; x < A.dim(ds); ++x) {
          auto v = monomial_times(A, prev, field, ds, x, cur_images[s], cur.gens[s]);
          for (std::size_t c = 0; c < v.size(); ++c) img(off + x, c) = v[c];
        }
      }
      K.push_back(kernel(transpose(img)));
    }
    // Minimal generators of K_i degree by degree.
    FreeModule next{};
    std::vector<Vec> next_images;
    for (int d = 1; d <= window; ++d) {
      const auto& kd = K[static_cast<std::size_t>(d)];
      if (kd.rows() == 0) continue;
      Matrix<F> span(field, 0, cur.dim(A, d));
      int emax = A.degree_one_generated() ? 1 : d;
      for (int e = 1; e <= emax; ++e) {
        const auto& lower = K[static_cast<std::size_t>(d - e)];
        for (std::size_t r = 0; r < lower.rows(); ++r)
          for (std::size_t x = 0; x < A.dim(e); ++x) span.append_row(monomial_times(A, cur, field, e, x, lower.row(r), d - e));
      }
      span = row_basis(span);
      std::size_t base_rank = span.rows();
      Int beta = static_cast<Int>(kd.rows() - base_rank);
      if (beta == 0) continue;
      for (std::size_t r = 0; r < kd.rows(); ++r) {
        Matrix<F> trial = span;
        trial.append_row(kd.row(r));
        if (rank(trial) > span.rows()) {
          span.append_row(kd.row(r));
          next.gens.push_back(d);
          next_images.push_back(kd.row(r));
        }
      }
      cert.tor_dims[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(d)] = beta;
    }
    prev = cur;
    cur = next;
    cur_images = std::move(next_images);
  }

  for (int i = 0; i <= N && cert.status == KoszulStatus::CertifiedInWindow; ++i)
    for (int j = 0; j <= window; ++j)
      if (i != j && cert.tor_dims[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
        cert.status = KoszulStatus::Failed;
        cert.fail_i = i;
        cert.fail_j = j;
        cert.fail_dim = cert.tor_dims[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        break;
      }
  return cert;
}

}  // namespace detail

// Minimal resolution of k over A up to internal degree `window` (default
// 2N). char_label 0 works over Q. A negative label selects the fast mode
// over F_p, p = 2^31 - 1: Betti numbers only grow under reduction mod p, so
// a certificate there holds over Q, and a failure is recomputed over Q.
// A positive prime computes over that F_p and is reported as is.
inline KoszulCertificate certify_N_koszul(const GradedRing& A, int N, int window = -1, Int char_label = 0) {
  if (window < 0) window = 2 * N;
  if (A.J() < window) throw WindowTooSmall(window, A.J());
  if (char_label == 0) return detail::resolve(A, N, window, RationalField{});
  if (char_label > 0 && !is_prime(char_label)) throw UnsupportedCharacteristic(char_label);
  PrimeField field(char_label < 0 ? kLargePrime : static_cast<std::uint64_t>(char_label));
  auto cert = detail::resolve(A, N, window, field);
  if (!cert.certified() && char_label < 0) {
    cert = detail::resolve(A, N, window, RationalField{});
    cert.rational_confirmation = true;
  }
  return cert;
}

struct Sequence4Report {
  int j = 0, l = 0, N = 0;
  // Position 0 is A_{j+l}; position t+1 is A_{l-t} (x) K_{t,j}.
  std::vector<Int> term_dims;
  std::vector<Int> homology;
  std::vector<bool> constrained;
  bool exact() const {
    for (std::size_t i = 0; i < homology.size(); ++i)
      if (constrained[i] && homology[i] != 0) return false;
    return true;
  }
};

namespace detail {

template <class F>
Sequence4Report sequence4(const GradedRing& A, const KoszulSpaces<F>& ks, int j, int l) {
  const F& field = ks.field;
  const int N = ks.N;
  if (j + l + 1 > A.J()) throw WindowTooSmall(j + l + 1, A.J());
  const int top = std::min(l, N - 1);
  const std::size_t d = ks.d, aj = A.dim(j);
  Sequence4Report rep{j, l, N, {}, {}, {}};

  // Basis of T_t in ambient coordinates A_{l-t} (x) A_1^{(x)t} (x) A_j.
  std::vector<Matrix<F>> K;
  for (int t = 0; t <= top; ++t) K.push_back(koszul_kernel(A, ks, t, j));

  // ranks[t] = rank of d_t : T_t -> T_{t-1}; d_0 : T_0 -> A_{j+l}.
  std::vector<std::size_t> ranks(static_cast<std::size_t>(top) + 2, 0);
  std::vector<std::size_t> dims(static_cast<std::size_t>(top) + 1, 0);
  for (int t = 0; t <= top; ++t) {
    const auto& kt = K[static_cast<std::size_t>(t)];
    const std::size_t al = A.dim(l - t);
    dims[static_cast<std::size_t>(t)] = al * kt.rows();
    const std::size_t tail = ipow_size(d, t - 1) * aj;  // A_1^{(x)(t-1)} (x) A_j
    const std::size_t out_cols = t == 0 ? A.dim(j + l) : A.dim(l - t + 1) * tail;
    Matrix<F> img(field, dims[static_cast<std::size_t>(t)], out_cols);
    for (std::size_t x = 0; x < al; ++x)
      for (std::size_t r = 0; r < kt.rows(); ++r) {
        std::size_t row = x * kt.rows() + r;
        for (std::size_t c = 0; c < kt.cols(); ++c) {
          const auto& w = kt(r, c);
          if (field.is_zero(w)) continue;
          std::size_t col;
          if (t == 0) {
            col = A.mult(l, x, j, c);
          } else {
            std::size_t first = c / tail, rest = c % tail;
            col = A.mult(l - t, x, 1, first) * tail + rest;
          }
          img(row, col) = field.add(img(row, col), w);
        }
      }
    ranks[static_cast<std::size_t>(t)] = rank(std::move(img));
  }
  rep.term_dims.push_back(static_cast<Int>(A.dim(j + l)));
  rep.homology.push_back(static_cast<Int>(A.dim(j + l) - ranks[0]));
  rep.constrained.push_back(true);
  for (int t = 0; t <= top; ++t) {
    auto tt = static_cast<std::size_t>(t);
    rep.term_dims.push_back(static_cast<Int>(dims[tt]));
    rep.homology.push_back(static_cast<Int>(dims[tt] - ranks[tt] - ranks[tt + 1]));
    // The leftmost term of the truncated complex carries no claim.
    rep.constrained.push_back(t <= N - 2);
  }
  return rep;
}

}  // namespace detail

// Homology of (4) at every position. Over F_p a nonzero constrained group is
// recomputed over Q before it is reported.
template <class F>
Sequence4Report verify_sequence4(const GradedRing& A, const KoszulSpaces<F>& ks, int j, int l) {
  auto rep = detail::sequence4(A, ks, j, l);
  if (!rep.exact() && ks.field.characteristic() != 0) {
    auto rational = koszul_spaces(A, ks.N, RationalField{});
    rep = detail::sequence4(A, rational, j, l);
  }
  return rep;
}

}  // namespace qample
