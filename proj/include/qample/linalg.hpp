#pragma once

// Dense exact linear algebra over Q (GMP rationals) and over prime fields.
// Matrices act on column vectors: an r x c matrix maps F^c -> F^r.
// Subspaces are stored as matrices whose rows form a basis.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qample/arith.hpp"

namespace qample {

struct RationalField {
  using Elem = mpq_class;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(Int v) const { return mpq_class(mpz_class(static_cast<long>(v))); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return 1 / a; }
  Int characteristic() const { return 0; }
};

struct PrimeField {
  std::uint64_t p;
  using Elem = std::uint64_t;

  explicit PrimeField(std::uint64_t prime) : p(prime) {
    if (prime < 2 || prime >= (1ull << 31)) throw std::invalid_argument("prime out of range");
  }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(Int v) const {
    Int r = v % static_cast<Int>(p);
    if (r < 0) r += static_cast<Int>(p);
    return static_cast<Elem>(r);
  }
  bool is_zero(Elem a) const { return a == 0; }
  Elem add(Elem a, Elem b) const { return (a + b) % p; }
  Elem sub(Elem a, Elem b) const { return (a + p - b) % p; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    Elem r = 1, b = a, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
  Int characteristic() const { return static_cast<Int>(p); }
};

// 2^31 - 1; the default "fast" field.
inline constexpr std::uint64_t kLargePrime = 2147483647ull;

template <class F>
class Matrix {
 public:
  using Elem = typename F::Elem;

  Matrix() = default;
  Matrix(const F& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const F& field() const { return field_; }

  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Elem& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(const std::vector<Elem>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  std::vector<Elem> row(std::size_t r) const {
    return std::vector<Elem>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

 private:
  F field_{};
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

// In-place reduced row echelon form; returns pivot columns. Rows past the
// rank are zero afterwards.
template <class F>
std::vector<std::size_t> rref(Matrix<F>& m) {
  const F& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && f.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(r, piv);
    auto inv = f.inv(m(r, c));
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) = f.mul(m(r, k), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      auto factor = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        if (!f.is_zero(m(r, k))) m(i, k) = f.sub(m(i, k), f.mul(factor, m(r, k)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  // Forward elimination only; cheaper than a full rref.
  const F& f = m.field();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && f.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(r, piv);
    auto inv = f.inv(m(r, c));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (f.is_zero(m(i, c))) continue;
      auto factor = f.mul(m(i, c), inv);
      for (std::size_t k = c; k < m.cols(); ++k) {
        if (!f.is_zero(m(r, k))) m(i, k) = f.sub(m(i, k), f.mul(factor, m(r, k)));
      }
    }
    ++r;
  }
  return r;
}

// Rows of the result form a basis of {x : m x = 0}.
template <class F>
Matrix<F> kernel(Matrix<F> m) {
  const F& f = m.field();
  auto pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix<F> out(f, 0, m.cols());
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename F::Elem> v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(m(i, free));
    out.append_row(v);
  }
  return out;
}

// Basis (reduced) of the row space.
template <class F>
Matrix<F> row_basis(Matrix<F> m) {
  auto pivots = rref(m);
  Matrix<F> out(m.field(), 0, m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) out.append_row(m.row(i));
  return out;
}

// Matrix product a * b.
template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
  const F& f = a.field();
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in multiply");
  Matrix<F> out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (f.is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!f.is_zero(b(k, j))) out(i, j) = f.add(out(i, j), f.mul(a(i, k), b(k, j)));
      }
    }
  }
  return out;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a) {
  Matrix<F> out(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

template <class F>
bool is_zero_matrix(const Matrix<F>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a.field().is_zero(a(i, j))) return false;
  return true;
}

// Runs `fn(field)` with the field matching a characteristic label: 0 selects
// the rationals, a prime selects F_p.
template <class Fn>
decltype(auto) with_field(Int char_label, Fn&& fn) {
  if (char_label == 0) return fn(RationalField{});
  return fn(PrimeField(static_cast<std::uint64_t>(char_label)));
}

inline bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace qample
