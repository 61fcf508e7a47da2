#pragma once

// Finite-dimensional commutative F_p-algebras given by structure constants,
// Tor groups of the relative Frobenius computed from bar complexes, and
// vanishing probes for Frobenius pullbacks on toric varieties.

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qample/positivity.hpp"

namespace qample {

struct SizeCapExceeded : std::runtime_error {
  SizeCapExceeded(std::size_t entries, std::size_t cap)
      : std::runtime_error("bar complex matrix has " + std::to_string(entries) + " entries, cap " + std::to_string(cap)) {}
};

struct InvalidAlgebra : std::invalid_argument {
  explicit InvalidAlgebra(const std::string& w) : std::invalid_argument("invalid algebra: " + w) {}
};

class FinAlgebra {
 public:
  using Vec = std::vector<std::uint64_t>;

  // table[i][j] = coordinates of b_i b_j; entries are reduced mod p.
  FinAlgebra(std::string name, Int p, std::vector<std::string> labels, std::size_t unit,
             std::vector<std::vector<std::vector<Int>>> table, std::vector<Int> augmentation)
      : name_(std::move(name)), field_(static_cast<std::uint64_t>(p)), labels_(std::move(labels)), unit_(unit) {
    if (!is_prime(p)) throw InvalidAlgebra("characteristic " + std::to_string(p) + " is not prime");
    const std::size_t d = labels_.size();
    if (d == 0 || unit_ >= d || table.size() != d || augmentation.size() != d) throw InvalidAlgebra("shape");
    table_.assign(d, std::vector<Vec>(d));
    for (std::size_t i = 0; i < d; ++i) {
      if (table[i].size() != d) throw InvalidAlgebra("shape");
      for (std::size_t j = 0; j < d; ++j) {
        if (table[i][j].size() != d) throw InvalidAlgebra("shape");
        for (Int c : table[i][j]) table_[i][j].push_back(field_.from_int(c));
      }
    }
    for (Int c : augmentation) eps_.push_back(field_.from_int(c));
    verify();
  }

  const std::string& name() const { return name_; }
  Int p() const { return field_.characteristic(); }
  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t unit() const { return unit_; }
  const PrimeField& field() const { return field_; }
  const Vec& basis_product(std::size_t i, std::size_t j) const { return table_[i][j]; }
  std::uint64_t augmentation(std::size_t i) const { return eps_[i]; }

  Vec basis_vector(std::size_t i) const {
    Vec v(dim(), 0);
    v[i] = 1;
    return v;
  }

  Vec mul(const Vec& a, const Vec& b) const {
    Vec out(dim(), 0);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (b[j] == 0) continue;
        auto c = field_.mul(a[i], b[j]);
        for (std::size_t k = 0; k < dim(); ++k)
          if (table_[i][j][k] != 0) out[k] = field_.add(out[k], field_.mul(c, table_[i][j][k]));
      }
    }
    return out;
  }

  // x -> x^{p^N}, linear over F_p; row i is the image of b_i.
  std::vector<Vec> frobenius(int N) const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < dim(); ++i) {
      Vec v = basis_vector(i);
      for (int r = 0; r < N; ++r) {
        Vec acc = basis_vector(unit_);
        for (Int k = 0; k < p(); ++k) acc = mul(acc, v);
        v = acc;
      }
      out.push_back(v);
    }
    return out;
  }

  // Finite-dimensional algebras over the perfect field F_p are regular
  // exactly when reduced, i.e. when x -> x^p is injective.
  bool regular() const {
    Matrix<PrimeField> m(field_, 0, dim());
    for (const auto& row : frobenius(1)) m.append_row(row);
    return rank(m) == dim();
  }

 private:
  void verify() const {
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i) {
      if (table_[unit_][i] != basis_vector(i) || table_[i][unit_] != basis_vector(i)) throw InvalidAlgebra(name_ + ": unit");
      for (std::size_t j = 0; j < d; ++j) {
        if (table_[i][j] != table_[j][i]) throw InvalidAlgebra(name_ + ": not commutative");
        for (std::size_t k = 0; k < d; ++k) {
          auto l = mul(table_[i][j], basis_vector(k));
          auto r = mul(basis_vector(i), table_[j][k]);
          if (l != r) throw InvalidAlgebra(name_ + ": not associative");
        }
        // augmentation is multiplicative
        std::uint64_t e = 0;
        for (std::size_t k = 0; k < d; ++k) e = field_.add(e, field_.mul(eps_[k], table_[i][j][k]));
        if (e != field_.mul(eps_[i], eps_[j])) throw InvalidAlgebra(name_ + ": augmentation is not a homomorphism");
      }
    }
    if (eps_[unit_] != 1) throw InvalidAlgebra(name_ + ": augmentation of 1");
  }

  std::string name_;
  PrimeField field_;
  std::vector<std::string> labels_;
  std::size_t unit_;
  std::vector<std::vector<Vec>> table_;
  Vec eps_;
};

inline FinAlgebra algebra_from_json(const nlohmann::json& j, Int p) {
  std::vector<std::string> labels = j.at("basis").get<std::vector<std::string>>();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < labels.size(); ++i) idx[labels[i]] = i;
  auto at = [&](const std::string& l) {
    auto it = idx.find(l);
    if (it == idx.end()) throw InvalidAlgebra("unknown basis label " + l);
    return it->second;
  };
  const std::size_t d = labels.size(), u = at(j.at("unit").get<std::string>());
  std::vector<std::vector<std::vector<Int>>> t(d, std::vector<std::vector<Int>>(d, std::vector<Int>(d, 0)));
  for (std::size_t i = 0; i < d; ++i) {
    t[u][i][i] = 1;
    t[i][u][i] = 1;
  }
  for (const auto& prod : j.at("products")) {
    std::size_t a = at(prod.at(0).get<std::string>()), b = at(prod.at(1).get<std::string>());
    std::vector<Int> v(d, 0);
    for (const auto& [l, c] : prod.at(2).items()) v[at(l)] = c.get<Int>();
    t[a][b] = v;
    t[b][a] = v;
  }
  return FinAlgebra(j.at("name").get<std::string>(), p, labels, u, t, j.at("augmentation").get<std::vector<Int>>());
}

inline std::string default_algebra_catalog() { return std::string(QAMPLE_DATA_DIR) + "/algebras.json"; }

inline std::vector<FinAlgebra> preset_algebras(Int p, const std::string& path = default_algebra_catalog()) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open algebra catalog " + path);
  auto j = nlohmann::json::parse(in);
  std::vector<FinAlgebra> out;
  for (const auto& a : j.at("algebras")) out.push_back(algebra_from_json(a, p));
  return out;
}

struct TorTable {
  std::string algebra;
  Int p = 0;
  int N = 0;  // Frobenius iterate; 1 for the ordinary Frobenius
  std::vector<Int> dims;
};

inline constexpr std::size_t kBarEntryCap = 1000000;

namespace detail {

// Homology dims 0..i_max of a complex whose n-th differential is given by
// `boundary(n)` (rows: basis of C_n, columns: basis of C_{n-1}).
template <class Boundary>
std::vector<Int> chain_homology(const std::vector<std::size_t>& dims, int i_max, Boundary boundary,
                                std::size_t cap) {
  for (int n = 1; n <= i_max + 1; ++n) {
    std::size_t e = dims[static_cast<std::size_t>(n)] * dims[static_cast<std::size_t>(n) - 1];
    if (e > cap) throw SizeCapExceeded(e, cap);
  }
  std::vector<std::size_t> ranks(static_cast<std::size_t>(i_max) + 2, 0);
  for (int n = 1; n <= i_max + 1; ++n) {
    Matrix<PrimeField> m = boundary(n);
    ranks[static_cast<std::size_t>(n)] = rank(std::move(m));
  }
  std::vector<Int> out;
  for (int i = 0; i <= i_max; ++i)
    out.push_back(static_cast<Int>(dims[static_cast<std::size_t>(i)] - ranks[static_cast<std::size_t>(i)] -
                                   ranks[static_cast<std::size_t>(i) + 1]));
  return out;
}

// Decomposes a flat index of V^{(x)n} (first factor most significant).
inline std::vector<std::size_t> digits(std::size_t idx, std::size_t base, int n) {
  std::vector<std::size_t> out(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = idx % base;
    idx /= base;
  }
  return out;
}

inline std::size_t flat(const std::vector<std::size_t>& dig, std::size_t base) {
  std::size_t idx = 0;
  for (auto x : dig) idx = idx * base + x;
  return idx;
}

}  // namespace detail

// Tor_i over A (x) A of (A (x) A with the right factor twisted by the
// relative Frobenius, A), i.e. the Hochschild homology of A with
// coefficients in that bimodule, from the complex M (x) A^{(x)n}.
inline TorTable frobenius_tor(const FinAlgebra& A, int N, int i_max, std::size_t cap = kBarEntryCap) {
  const std::size_t d = A.dim();
  const PrimeField& f = A.field();
  const auto phi = A.frobenius(N);
  std::vector<std::size_t> dims;
  for (int n = 0; n <= i_max + 1; ++n) dims.push_back(d * d * ipow_size(d, n));

  auto boundary = [&](int n) {
    Matrix<PrimeField> m(f, dims[static_cast<std::size_t>(n)], dims[static_cast<std::size_t>(n) - 1]);
    for (std::size_t row = 0; row < m.rows(); ++row) {
      auto dig = detail::digits(row, d, n + 2);  // x, y, a_1..a_n
      const std::size_t x = dig[0], y = dig[1];
      auto add = [&](std::vector<std::size_t> target, std::size_t pos, const FinAlgebra::Vec& v, std::uint64_t sign) {
        for (std::size_t k = 0; k < d; ++k) {
          if (v[k] == 0) continue;
          target[pos] = k;
          auto& cell = m(row, detail::flat(target, d));
          cell = f.add(cell, f.mul(sign, v[k]));
        }
      };
      auto signed_one = [&](int i) { return i % 2 == 0 ? f.one() : f.neg(f.one()); };
      // d_0: (x (x) phi(a_1) y, a_2, ..)
      {
        std::vector<std::size_t> t{x, y};
        t.insert(t.end(), dig.begin() + 3, dig.end());
        add(t, 1, A.mul(phi[dig[2]], A.basis_vector(y)), signed_one(0));
      }
      // d_i: multiply a_i a_{i+1}
      for (int i = 1; i < n; ++i) {
        std::vector<std::size_t> t(dig.begin(), dig.end());
        auto prod = A.basis_product(dig[static_cast<std::size_t>(i) + 1], dig[static_cast<std::size_t>(i) + 2]);
        t.erase(t.begin() + i + 2);
        add(t, static_cast<std::size_t>(i) + 1, prod, signed_one(i));
      }
      // d_n: (a_n x (x) y, a_1, .., a_{n-1})
      {
        std::vector<std::size_t> t(dig.begin(), dig.end() - 1);
        add(t, 0, A.basis_product(dig.back(), x), signed_one(n));
      }
    }
    return m;
  };
  return {A.name(), A.p(), N, detail::chain_homology(dims, i_max, boundary, cap)};
}

// Tor^A_i(A via Frobenius, k) with k = A / ker(augmentation), from the bar
// complex M (x) A^{(x)n} (x) k.
inline TorTable ordinary_frobenius_tor(const FinAlgebra& A, int i_max, std::size_t cap = kBarEntryCap) {
  const std::size_t d = A.dim();
  const PrimeField& f = A.field();
  const auto phi = A.frobenius(1);
  std::vector<std::size_t> dims;
  for (int n = 0; n <= i_max + 1; ++n) dims.push_back(d * ipow_size(d, n));

  auto boundary = [&](int n) {
    Matrix<PrimeField> m(f, dims[static_cast<std::size_t>(n)], dims[static_cast<std::size_t>(n) - 1]);
    for (std::size_t row = 0; row < m.rows(); ++row) {
      auto dig = detail::digits(row, d, n + 1);  // m, a_1..a_n
      auto signed_one = [&](int i) { return i % 2 == 0 ? f.one() : f.neg(f.one()); };
      auto add = [&](std::vector<std::size_t> target, std::size_t pos, const FinAlgebra::Vec& v, std::uint64_t sign) {
        for (std::size_t k = 0; k < d; ++k) {
          if (v[k] == 0) continue;
          target[pos] = k;
          auto& cell = m(row, detail::flat(target, d));
          cell = f.add(cell, f.mul(sign, v[k]));
        }
      };
      {
        std::vector<std::size_t> t{dig[0]};
        t.insert(t.end(), dig.begin() + 2, dig.end());
        add(t, 0, A.mul(phi[dig[1]], A.basis_vector(dig[0])), signed_one(0));
      }
      for (int i = 1; i < n; ++i) {
        std::vector<std::size_t> t(dig.begin(), dig.end());
        auto prod = A.basis_product(dig[static_cast<std::size_t>(i)], dig[static_cast<std::size_t>(i) + 1]);
        t.erase(t.begin() + i + 1);
        add(t, static_cast<std::size_t>(i), prod, signed_one(i));
      }
      {
        auto e = A.augmentation(dig.back());
        if (e != 0) {
          std::vector<std::size_t> t(dig.begin(), dig.end() - 1);
          auto& cell = m(row, detail::flat(t, d));
          cell = f.add(cell, f.mul(signed_one(n), e));
        }
      }
    }
    return m;
  };
  return {A.name(), A.p(), 1, detail::chain_homology(dims, i_max, boundary, cap)};
}

// ---- vanishing for Frobenius pullbacks ----

enum class ProbeStatus { Pass, Fail, HypothesisFails };

inline const char* probe_status_name(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::Pass: return "PASS";
    case ProbeStatus::Fail: return "FAIL";
    case ProbeStatus::HypothesisFails: return "HYPOTHESIS_FAILS";
  }
  return "";
}

struct CharpRow {
  Int p = 0;
  int b = 0;
  Int multiple = 0;  // N p^b
  std::vector<Int> dims;  // h^i(M + N p^b L) over F_p, all i
  bool required = false;  // p^b >= reg(M)
  bool vanishes = false;  // h^i = 0 for all i > q
};

struct CharpReport {
  ProbeStatus status = ProbeStatus::Pass;
  Int certificate_N = 0;
  Int reg_M = 0;
  AmplenessReport hypothesis;
  std::vector<CharpRow> rows;
};

// L^N satisfies the q-T-ample vanishing for the certificate power N; then
// h^i(M (x) L^{N p^b}) = 0 for i > q whenever p^b >= reg(M).
inline CharpReport charp_vanishing_probe(const Geometry& g, const IntVec& l, int q, const IntVec& m_twist,
                                         const std::vector<Int>& primes, int b_max, Int n_max = 64) {
  if (!g.toric()) throw UnsupportedGeometry(g.name() + " has no characteristic-p backend");
  CharpReport rep;
  const IntVec h = g.polarization();
  rep.hypothesis = qtample_certificate(g, l, h, q, n_max);
  if (rep.hypothesis.verdict != Verdict::CertifiedQTample) {
    rep.status = rep.hypothesis.verdict == Verdict::ExactTrue ? ProbeStatus::Pass : ProbeStatus::HypothesisFails;
    return rep;
  }
  rep.certificate_N = rep.hypothesis.N;
  rep.reg_M = regularity(g, m_twist, h);
  for (Int p : primes) {
    if (!is_prime(p)) throw UnsupportedCharacteristic(p);
    Int pb = 1;
    for (int b = 0; b <= b_max; ++b, pb = checked_mul(pb, p)) {
      CharpRow row;
      row.p = p;
      row.b = b;
      row.multiple = checked_mul(rep.certificate_N, pb);
      row.dims = g.cohomology(added(m_twist, scaled(l, row.multiple)), p);
      row.required = pb >= rep.reg_M;
      row.vanishes = true;
      for (int i = q + 1; i <= g.dim(); ++i) row.vanishes = row.vanishes && row.dims[static_cast<std::size_t>(i)] == 0;
      if (row.required && !row.vanishes) rep.status = ProbeStatus::Fail;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace qample
