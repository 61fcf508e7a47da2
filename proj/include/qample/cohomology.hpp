#pragma once

// Line-bundle cohomology on smooth complete toric varieties.
//
// h^i(D) = sum over weights m of dim H~^{i-1}(V_{D,m}), where V_{D,m} is the
// full subcomplex on {rho : <m,u_rho> < -a_rho}. Two routes evaluate the sum:
// a per-weight sweep that keeps the breakdown, and a pattern-wise count that
// slices each region {m : pattern(m) = S} into polygons and counts those
// exactly. Both scan the bounding box of the Cartier data grown by one; the
// outer shell must contribute nothing and is checked.

#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "qample/divisor.hpp"
#include "qample/json_io.hpp"
#include "qample/lattice_count.hpp"
#include "qample/simplicial.hpp"

namespace qample {

struct WeightTerm {
  IntVec m;
  int degree;
  Int mult;
};

struct CohomologyTable {
  IntVec coeffs;
  Int char_label = 0;
  IntVec dims;
  bool torsion = false;
  IntVec rational_dims;  // filled when torsion is set
  std::vector<WeightTerm> per_weight;

  Int h(int i) const { return dims.at(static_cast<std::size_t>(i)); }
};

struct RegionOverflow : std::runtime_error {
  RegionOverflow(Int size, Int bound)
      : std::runtime_error("weight region of size " + std::to_string(size) + " exceeds bound " +
                           std::to_string(bound)) {}
};

struct ShellGuardViolation : std::logic_error {
  explicit ShellGuardViolation(const std::string& w) : std::logic_error("nonzero shell contribution: " + w) {}
};

struct CacheMismatch : std::logic_error {
  explicit CacheMismatch(const std::string& key) : std::logic_error("cached table differs from recomputation: " + key) {}
};

struct UnsupportedCharacteristic : std::invalid_argument {
  explicit UnsupportedCharacteristic(Int p)
      : std::invalid_argument("unsupported characteristic " + std::to_string(p)) {}
};

inline void check_char_label(Int p) {
  if (p != 0 && !is_prime(p)) throw UnsupportedCharacteristic(p);
}

// Thread-safe table store, optionally mirrored to a JSON-lines file.
class CohomologyCache {
 public:
  struct Entry {
    IntVec coeffs;
    Int char_label = 0;
    IntVec dims;
    bool torsion = false;
    IntVec rational_dims;
  };

  CohomologyCache() = default;
  explicit CohomologyCache(std::string path) : path_(std::move(path)) { load(); }

  static std::string key(std::uint64_t fan_hash, const IntVec& coeffs, Int char_label) {
    return std::to_string(fan_hash) + "|" + join(coeffs) + "|" + std::to_string(char_label);
  }

  std::optional<Entry> find(const std::string& k) const {
    std::shared_lock lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const std::string& k, const Entry& e, std::uint64_t fan_hash) {
    std::unique_lock lock(mu_);
    if (!map_.emplace(k, e).second) return;
    order_.push_back(k);
    if (!path_.empty()) append_line(k, e, fan_hash);
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return map_.size();
  }

  // Entries in insertion order, optionally restricted to one fan.
  std::vector<Entry> entries(std::optional<std::uint64_t> fan_hash = std::nullopt) const {
    std::shared_lock lock(mu_);
    std::vector<Entry> out;
    const std::string prefix = fan_hash ? std::to_string(*fan_hash) + "|" : "";
    for (const auto& k : order_)
      if (k.rfind(prefix, 0) == 0) out.push_back(map_.at(k));
    return out;
  }

  const std::string& path() const { return path_; }

 private:
  void load() {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key")) continue;
      Entry e;
      e.coeffs = json_to_intvec(j.at("coeffs"));
      e.char_label = json_to_int(j.at("char"));
      e.dims = json_to_intvec(j.at("dims"));
      e.torsion = j.value("torsion", false);
      if (j.contains("rational_dims")) e.rational_dims = json_to_intvec(j.at("rational_dims"));
      auto k = j.at("key").get<std::string>();
      if (map_.emplace(k, e).second) order_.push_back(k);
    }
  }

  void append_line(const std::string& k, const Entry& e, std::uint64_t fan_hash) {
    nlohmann::json j{{"key", k},           {"fan", std::to_string(fan_hash)}, {"coeffs", e.coeffs},
                     {"char", e.char_label}, {"dims", e.dims},                 {"torsion", e.torsion}};
    if (e.torsion) j["rational_dims"] = e.rational_dims;
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << "\n";
  }

  std::string path_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, Entry> map_;
  std::vector<std::string> order_;
};

struct EngineOptions {
  // Largest number of weights (sweep) or outer slices (count) per table.
  Int region_bound = 200'000'000;
  bool shell_guard = true;
  // Every audit_period-th cache hit is recomputed and compared.
  Int audit_period = 20;
};

struct WeightBox {
  IntVec lo, hi;  // inclusive
};

// Bounding box of the Cartier data, grown by `grow`.
inline WeightBox weight_box(const ToricDivisor& d, Int grow) {
  auto cd = cartier_data(d);
  const auto n = static_cast<std::size_t>(d.fan->rank());
  WeightBox b{IntVec(n, 0), IntVec(n, 0)};
  for (std::size_t k = 0; k < n; ++k) {
    Int lo = cd.weights[0][k], hi = lo;
    for (const auto& m : cd.weights) {
      lo = std::min(lo, m[k]);
      hi = std::max(hi, m[k]);
    }
    b.lo[k] = checked_sub(lo, grow);
    b.hi[k] = checked_add(hi, grow);
  }
  return b;
}

class CohomologyEngine {
 public:
  explicit CohomologyEngine(FanPtr fan, EngineOptions opts = {}, std::shared_ptr<CohomologyCache> cache = nullptr)
      : fan_(std::move(fan)), opts_(opts), cache_(std::move(cache)), fan_hash_(fan_->hash()) {}

  const FanPtr& fan() const { return fan_; }
  const std::shared_ptr<CohomologyCache>& cache() const { return cache_; }
  std::uint64_t fan_hash() const { return fan_hash_; }
  Int cache_hits() const { return hits_; }
  Int audits() const { return audits_; }

  const PatternTable& patterns(Int char_label) const {
    check_char_label(char_label);
    std::lock_guard lock(pattern_mu_);
    auto it = patterns_.find(char_label);
    if (it == patterns_.end()) {
      auto table = with_field(char_label, [&](const auto& f) { return std::make_shared<PatternTable>(*fan_, f); });
      it = patterns_.emplace(char_label, std::move(table)).first;
    }
    return *it->second;
  }

  // Cached, pattern-wise route.
  CohomologyTable compute(const ToricDivisor& d, Int char_label = 0) const {
    check_char_label(char_label);
    if (!cache_) return count_route(d, char_label);
    auto k = CohomologyCache::key(fan_hash_, d.coeffs, char_label);
    if (auto hit = cache_->find(k)) {
      CohomologyTable t{d.coeffs, char_label, hit->dims, hit->torsion, hit->rational_dims, {}};
      Int n = ++hits_;
      if (opts_.audit_period > 0 && n % opts_.audit_period == 0) {
        ++audits_;
        auto fresh = count_route(d, char_label);
        if (fresh.dims != t.dims || fresh.torsion != t.torsion) throw CacheMismatch(k);
      }
      return t;
    }
    auto t = count_route(d, char_label);
    cache_->insert(k, {t.coeffs, t.char_label, t.dims, t.torsion, t.rational_dims}, fan_hash_);
    return t;
  }

  CohomologyTable compute(const IntVec& coeffs, Int char_label = 0) const {
    return compute(ToricDivisor(fan_, coeffs), char_label);
  }

  // Per-weight sweep with the full breakdown; never cached.
  CohomologyTable compute_per_weight(const ToricDivisor& d, Int char_label = 0) const {
    check_char_label(char_label);
    const int n = fan_->rank();
    const auto& pat = patterns(char_label);
    const PatternTable* rat = char_label == 0 ? nullptr : &patterns(0);
    CohomologyTable t{d.coeffs, char_label, IntVec(static_cast<std::size_t>(n) + 1, 0), false, {}, {}};
    IntVec rdims = t.dims;
    auto outer = weight_box(d, 1);
    auto inner = weight_box(d, 0);
    Int volume = 1;
    for (int k = 0; k < n; ++k) volume = checked_mul(volume, outer.hi[static_cast<std::size_t>(k)] - outer.lo[static_cast<std::size_t>(k)] + 1);
    if (volume > opts_.region_bound) throw RegionOverflow(volume, opts_.region_bound);
    IntVec m = outer.lo;
    for (Int step = 0; step < volume; ++step) {
      RayMask s = pattern_of(m, d.coeffs);
      const auto& c = pat[s];
      bool in_shell = false;
      for (int k = 0; k < n; ++k) {
        auto kk = static_cast<std::size_t>(k);
        if (m[kk] < inner.lo[kk] || m[kk] > inner.hi[kk]) in_shell = true;
      }
      for (int i = 0; i <= n; ++i) {
        auto ii = static_cast<std::size_t>(i);
        if (c[ii] != 0) {
          if (in_shell && opts_.shell_guard) throw ShellGuardViolation("weight (" + join(m) + ")");
          t.dims[ii] += c[ii];
          t.per_weight.push_back({m, i, c[ii]});
        }
        if (rat) rdims[ii] += (*rat)[s][ii];
      }
      for (int k = n - 1; k >= 0; --k) {
        auto kk = static_cast<std::size_t>(k);
        if (++m[kk] <= outer.hi[kk]) break;
        m[kk] = outer.lo[kk];
      }
    }
    if (rat && rdims != t.dims) {
      t.torsion = true;
      t.rational_dims = rdims;
    }
    return t;
  }

  // Ray pattern {rho : <m,u_rho> < -a_rho} of a weight.
  RayMask pattern_of(const IntVec& m, const IntVec& a) const {
    RayMask s = 0;
    for (int r = 0; r < fan_->num_rays(); ++r)
      if (dot(m, fan_->ray(r)) < -a[static_cast<std::size_t>(r)]) s |= RayMask{1} << r;
    return s;
  }

  // Number of lattice points m in the box with pattern(m) = s.
  i128 count_pattern(RayMask s, const IntVec& a, const WeightBox& box) const {
    const int n = fan_->rank();
    const int nr = fan_->num_rays();
    if (n == 0) return s == 0 ? 1 : 0;
    if (n == 1) {
      Int lo = box.lo[0], hi = box.hi[0];
      for (int r = 0; r < nr; ++r) {
        Int u = fan_->ray(r)[0];
        Int ar = a[static_cast<std::size_t>(r)];
        // in s: u x <= -a-1; otherwise -u x <= a.
        Int coef = (s >> r & 1) ? u : -u;
        Int rhs = (s >> r & 1) ? -ar - 1 : ar;
        if (coef > 0) hi = std::min(hi, floor_div(rhs, coef));
        if (coef < 0) lo = std::max(lo, ceil_div(rhs, coef));
      }
      return hi >= lo ? hi - lo + 1 : 0;
    }
    // The two widest coordinates are counted by polygons.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return box.hi[static_cast<std::size_t>(x)] - box.lo[static_cast<std::size_t>(x)] >
             box.hi[static_cast<std::size_t>(y)] - box.lo[static_cast<std::size_t>(y)];
    });
    const auto ix = static_cast<std::size_t>(order[0]), iy = static_cast<std::size_t>(order[1]);
    std::vector<std::size_t> outer;
    for (int k = 2; k < n; ++k) outer.push_back(static_cast<std::size_t>(order[static_cast<std::size_t>(k)]));

    IntVec m(static_cast<std::size_t>(n), 0);
    for (auto k : outer) m[k] = box.lo[k];
    std::vector<HalfPlane> planes;
    planes.reserve(static_cast<std::size_t>(nr));
    i128 total = 0;
    while (true) {
      planes.clear();
      bool empty = false;
      for (int r = 0; r < nr && !empty; ++r) {
        const auto& u = fan_->ray(r);
        Int t = 0;
        for (auto k : outer) t += u[k] * m[k];
        Int ar = a[static_cast<std::size_t>(r)];
        HalfPlane h = (s >> r & 1) ? HalfPlane{u[ix], u[iy], checked_sub(-ar - 1, t)}
                                   : HalfPlane{-u[ix], -u[iy], checked_add(ar, t)};
        if (h.alpha == 0 && h.beta == 0) {
          if (h.gamma < 0) empty = true;
          continue;
        }
        planes.push_back(h);
      }
      if (!empty) total += count_polygon(planes, box.lo[ix], box.hi[ix], box.lo[iy], box.hi[iy]);
      std::size_t k = 0;
      for (; k < outer.size(); ++k) {
        auto c = outer[k];
        if (++m[c] <= box.hi[c]) break;
        m[c] = box.lo[c];
      }
      if (k == outer.size()) break;
    }
    return total;
  }

 private:
  CohomologyTable count_route(const ToricDivisor& d, Int char_label) const {
    const int n = fan_->rank();
    const auto& pat = patterns(char_label);
    const PatternTable* rat = char_label == 0 ? nullptr : &patterns(0);
    auto outer = weight_box(d, 1);
    auto inner = weight_box(d, 0);
    Int slices = 1;
    for (int k = 0; k < n; ++k) {
      auto kk = static_cast<std::size_t>(k);
      slices = checked_mul(slices, outer.hi[kk] - outer.lo[kk] + 1);
    }
    if (n >= 2) {
      // only the n-2 outer coordinates are enumerated
      IntVec widths;
      for (int k = 0; k < n; ++k) widths.push_back(outer.hi[static_cast<std::size_t>(k)] - outer.lo[static_cast<std::size_t>(k)] + 1);
      std::sort(widths.begin(), widths.end());
      slices = 1;
      for (int k = 0; k + 2 < n; ++k) slices = checked_mul(slices, widths[static_cast<std::size_t>(k)]);
    }
    if (slices > opts_.region_bound) throw RegionOverflow(slices, opts_.region_bound);

    CohomologyTable t{d.coeffs, char_label, IntVec(static_cast<std::size_t>(n) + 1, 0), false, {}, {}};
    IntVec rdims = t.dims;
    for (RayMask s : pat.interesting()) {
      i128 c = count_pattern(s, d.coeffs, outer);
      if (c == 0) continue;
      if (opts_.shell_guard && count_pattern(s, d.coeffs, inner) != c)
        throw ShellGuardViolation("pattern " + std::to_string(s) + " of (" + join(d.coeffs) + ")");
      auto ci = static_cast<Int>(c);
      for (int i = 0; i <= n; ++i) {
        auto ii = static_cast<std::size_t>(i);
        t.dims[ii] = checked_add(t.dims[ii], checked_mul(ci, pat[s][ii]));
        if (rat) rdims[ii] = checked_add(rdims[ii], checked_mul(ci, (*rat)[s][ii]));
      }
    }
    if (rat && rdims != t.dims) {
      t.torsion = true;
      t.rational_dims = rdims;
    }
    return t;
  }

  FanPtr fan_;
  EngineOptions opts_;
  std::shared_ptr<CohomologyCache> cache_;
  std::uint64_t fan_hash_;
  mutable std::mutex pattern_mu_;
  mutable std::map<Int, std::shared_ptr<PatternTable>> patterns_;
  mutable std::atomic<Int> hits_{0};
  mutable std::atomic<Int> audits_{0};
};

// K_X - D coefficients.
inline IntVec serre_dual_coeffs(const IntVec& a) {
  IntVec out;
  for (Int x : a) out.push_back(checked_sub(-1, x));
  return out;
}

inline bool serre_duality_holds(const CohomologyEngine& e, const CohomologyTable& t) {
  auto dual = e.compute(serre_dual_coeffs(t.coeffs), t.char_label);
  const std::size_t n = t.dims.size() - 1;
  for (std::size_t i = 0; i <= n; ++i)
    if (t.dims[i] != dual.dims[n - i]) return false;
  return true;
}

// Closed forms and product formulas used as independent checks.

inline Int binomial(Int n, Int k) {
  if (k < 0 || n < k) return 0;
  Int r = 1;
  for (Int i = 1; i <= k; ++i) r = checked_mul(r, n - k + i) / i;
  return r;
}

// O(d) on P^n.
inline IntVec projective_space_cohomology(int n, Int d) {
  IntVec h(static_cast<std::size_t>(n) + 1, 0);
  if (d >= 0) h[0] = binomial(d + n, n);
  if (d <= -n - 1) h[static_cast<std::size_t>(n)] = binomial(-d - 1, n);
  return h;
}

inline IntVec kunneth(const IntVec& h1, const IntVec& h2) {
  IntVec h(h1.size() + h2.size() - 1, 0);
  for (std::size_t r = 0; r < h1.size(); ++r)
    for (std::size_t s = 0; s < h2.size(); ++s) h[r + s] = checked_add(h[r + s], checked_mul(h1[r], h2[s]));
  return h;
}

// Table of D1 ⊞ D2 on the product fan (rays of the first factor first).
inline CohomologyTable kunneth_oracle(const ToricDivisor& d1, const ToricDivisor& d2, Int char_label = 0) {
  CohomologyEngine e1(d1.fan), e2(d2.fan);
  auto t1 = e1.compute(d1, char_label);
  auto t2 = e2.compute(d2, char_label);
  IntVec coeffs = d1.coeffs;
  coeffs.insert(coeffs.end(), d2.coeffs.begin(), d2.coeffs.end());
  return {coeffs, char_label, kunneth(t1.dims, t2.dims), t1.torsion || t2.torsion, {}, {}};
}

struct UnsupportedTwist : std::invalid_argument {
  explicit UnsupportedTwist(Int c) : std::invalid_argument("pushforward formula needs c > 0, got " + std::to_string(c)) {}
};

// P(O + O(1,-1)) over P^1 x P^1 and c > 0: pi_* O(c) = sum_j O(j,-j), no R^1.
inline IntVec split_bundle_oracle(Int a, Int b, Int c) {
  if (c <= 0) throw UnsupportedTwist(c);
  IntVec h(4, 0);
  for (Int j = 0; j <= c; ++j) {
    auto s = kunneth(projective_space_cohomology(1, a + j), projective_space_cohomology(1, b - j));
    for (std::size_t i = 0; i < s.size(); ++i) h[i] = checked_add(h[i], s[i]);
  }
  return h;
}

}  // namespace qample
