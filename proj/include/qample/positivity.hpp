#pragma once

// q-positivity of line bundles and numerical classes: finite q-T-ample
// certificates, probes of the naive and uniform definitions, q-nefness
// through orbit closures, the exact (n-1)-ample test, rank-2 cone charts and
// additivity checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qample/regularity.hpp"
#include "qample/section_ring.hpp"

namespace qample {

struct UnsupportedRank : std::invalid_argument {
  explicit UnsupportedRank(int r) : std::invalid_argument("cone scans need Picard rank 2, got " + std::to_string(r)) {}
};

enum class Verdict { CertifiedQTample, NoCertificateUpTo, ExactTrue, ExactFalse };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::CertifiedQTample: return "CERTIFIED_Q_TAMPLE";
    case Verdict::NoCertificateUpTo: return "NO_CERTIFICATE_UP_TO";
    case Verdict::ExactTrue: return "EXACT_TRUE";
    case Verdict::ExactFalse: return "EXACT_FALSE";
  }
  return "";
}

struct Witness {
  IntVec twist;  // parameters of the line bundle whose cohomology was computed
  int i = 0;
  Int h = 0;
};

struct AmplenessReport {
  ClassVec cls;
  IntVec params;  // integral positive multiple of cls used for cohomology
  int q = 0;
  Verdict verdict = Verdict::NoCertificateUpTo;
  Int N = 0;  // certificate power, or the search bound
  std::vector<Witness> witnesses;
  std::vector<std::string> assumptions;

  bool positive() const { return verdict == Verdict::CertifiedQTample || verdict == Verdict::ExactTrue; }
};

// Smallest positive integral multiple of a rational class.
inline IntVec integral_multiple(const ClassVec& c) {
  mpz_class l = 1;
  for (const auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  IntVec out;
  for (const auto& x : c) {
    mpz_class v = x.get_num() * (l / x.get_den());
    if (!v.fits_slong_p()) throw ArithmeticOverflow("class multiple out of range");
    out.push_back(v.get_si());
  }
  return out;
}

// Koszul-ampleness of the polarization, certified once per geometry and H.
// Rings whose window piece is larger than `max_piece` are not resolved.
struct KoszulStatusEntry {
  bool certified = false;
  std::string note;
};

inline KoszulStatusEntry koszul_status(const Geometry& g, const IntVec& h, std::size_t max_piece = 150) {
  static std::mutex mu;
  static std::map<std::string, KoszulStatusEntry> memo;
  const std::string key = g.name() + "|" + join(h);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  KoszulStatusEntry e;
  const int N = 2 * g.dim();
  const auto* t = dynamic_cast<const ToricGeometry*>(&g);
  if (!t) {
    e.note = "Koszul-ampleness of H asserted (no lattice-point ring for " + g.name() + ")";
  } else if (static_cast<std::size_t>(t->h(scaled(h, 2 * N), 0)) > max_piece) {
    e.note = "Koszul-ampleness of H asserted (degree-" + std::to_string(2 * N) + " piece too large to resolve)";
  } else {
    auto cert = certify_N_koszul(section_ring(g, h, 2 * N), N);
    e.certified = cert.certified();
    e.note = cert.certified() ? "H is " + std::to_string(N) + "-Koszul: CERTIFIED_IN_WINDOW " + std::to_string(cert.window)
                              : "H failed " + std::to_string(N) + "-Koszul certification at Tor_" +
                                    std::to_string(cert.fail_i) + "," + std::to_string(cert.fail_j);
  }
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, e);
  return e;
}

// Searches N = 1..N_max for h^{q+k}(N L - (n+k) H) = 0, k = 1..n-q.
inline AmplenessReport qtample_certificate(const Geometry& g, const ClassVec& c, const IntVec& h, int q,
                                           Int n_max = 64) {
  AmplenessReport rep;
  rep.cls = c;
  rep.q = q;
  rep.params = integral_multiple(c);
  const int n = g.dim();
  if (q >= n) {
    rep.verdict = Verdict::ExactTrue;
    return rep;
  }
  if (q < 0) throw std::invalid_argument("q must be nonnegative");
  rep.assumptions.push_back(koszul_status(g, h).note);
  std::vector<Witness> last;
  for (Int N = 1; N <= n_max; ++N) {
    std::vector<Witness> ws;
    bool ok = true;
    for (int k = 1; k <= n - q && ok; ++k) {
      auto twist = added(scaled(rep.params, N), scaled(h, -(n + k)));
      Int v = g.h(twist, q + k);
      ws.push_back({twist, q + k, v});
      ok = v == 0;
    }
    if (ok) {
      rep.verdict = Verdict::CertifiedQTample;
      rep.N = N;
      rep.witnesses = std::move(ws);
      return rep;
    }
    last = std::move(ws);
  }
  rep.verdict = Verdict::NoCertificateUpTo;
  rep.N = n_max;
  rep.witnesses.push_back(last.back());
  return rep;
}

inline AmplenessReport qtample_certificate(const Geometry& g, const IntVec& l, const IntVec& h, int q,
                                           Int n_max = 64) {
  return qtample_certificate(g, to_class(l), h, q, n_max);
}

struct NaiveProbeEntry {
  IntVec twist;
  std::optional<Int> m;  // least m0 with vanishing for all m in [m0, m_max]
  Witness last_failure;
};

struct NaiveProbeReport {
  IntVec params;
  int q = 0;
  Int m_max = 0;
  std::vector<NaiveProbeEntry> entries;
  bool all_reached() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.m.has_value(); });
  }
};

namespace detail {

// Least m0 in [m_lo, m_hi] with h^i(t + m L) = 0 for all i > q and all
// m in [m0, m_hi].
inline std::optional<Int> stable_vanishing(const Geometry& g, const IntVec& l, const IntVec& t, int q, Int m_lo,
                                           Int m_hi, Witness* failure = nullptr) {
  for (Int m = m_hi; m >= m_lo; --m) {
    auto b = added(t, scaled(l, m));
    auto h = g.cohomology(b);
    for (int i = q + 1; i <= g.dim(); ++i)
      if (h[static_cast<std::size_t>(i)] != 0) {
        if (failure) *failure = {b, i, h[static_cast<std::size_t>(i)]};
        if (m == m_hi) return std::nullopt;
        return m + 1;
      }
  }
  return m_lo;
}

}  // namespace detail

// Probed on twists only; vanishing here is evidence, not a proof.
inline NaiveProbeReport naive_probe(const Geometry& g, const IntVec& l, int q, const std::vector<IntVec>& twists,
                                    Int m_max = 64) {
  NaiveProbeReport rep{l, q, m_max, {}};
  for (const auto& t : twists) {
    NaiveProbeEntry e{t, std::nullopt, {}};
    e.m = detail::stable_vanishing(g, l, t, q, 1, m_max, &e.last_failure);
    rep.entries.push_back(e);
  }
  return rep;
}

struct UniformProbeResult {
  std::optional<Rational> lambda_estimate;      // empty when some j never vanishes
  std::vector<std::pair<Int, std::optional<Int>>> samples;  // (j, least stable m)
  std::optional<Int> N_reference;               // certificate N, if any
  bool speculative = false;                     // no certificate to compare with
  bool consistent = true;                       // m_j <= N j + 1 for every sample
};

inline UniformProbeResult uniform_probe(const Geometry& g, const IntVec& l, const IntVec& h, int q, Int j_max = 8,
                                        Int m_cap = 64, Int n_max = 64) {
  UniformProbeResult r;
  auto cert = qtample_certificate(g, l, h, q, n_max);
  if (cert.verdict == Verdict::CertifiedQTample) r.N_reference = cert.N;
  r.speculative = !r.N_reference && cert.verdict != Verdict::ExactTrue;
  Rational best = 0;
  bool finite = true;
  for (Int j = 1; j <= j_max; ++j) {
    auto m = detail::stable_vanishing(g, l, scaled(h, -j), q, 1, m_cap);
    r.samples.emplace_back(j, m);
    if (!m) {
      finite = false;
      continue;
    }
    Rational v(*m);
    v /= j;
    if (v > best) best = v;
    if (r.N_reference && *m > checked_add(checked_mul(*r.N_reference, j), 1)) r.consistent = false;
  }
  if (finite) r.lambda_estimate = best;
  return r;
}

struct NefReport {
  bool nef = true;
  std::optional<Cone> witness;  // cone of the first orbit closure where -c is big
  std::vector<std::string> assumptions;
};

// q-nef: -c is not big on any (q+1)-dimensional invariant subvariety.
inline NefReport q_nef(const Geometry& g, const ClassVec& c, int q) {
  NefReport rep;
  const int n = g.dim();
  if (q >= n) return rep;
  if (q < 0) throw std::invalid_argument("q must be nonnegative");
  const auto* t = dynamic_cast<const ToricGeometry*>(&g);
  if (!t) {
    if (q == 0) {
      // nef and effective cones coincide on SL(3)/B
      rep.nef = g.is_pseudoeffective(c);
    } else if (q == n - 1) {
      ClassVec neg;
      for (const auto& x : c) neg.push_back(-x);
      rep.nef = !g.is_big(neg);
    } else {
      throw UnsupportedGeometry(g.name() + " supports q-nef only for q = 0 and q = n - 1");
    }
    return rep;
  }
  rep.assumptions.push_back("tested on torus-invariant subvarieties only");
  ToricDivisor neg{t->fan(), negated(integral_multiple(t->rational_coeffs(c)))};
  for (const auto& v : orbit_closures(t->fan(), q + 1)) {
    if (is_big(restrict_to(neg, v))) {
      rep.nef = false;
      rep.witness = v.cone;
      return rep;
    }
  }
  return rep;
}

// Exact: c is (n-1)-ample iff -c is not pseudoeffective.
inline bool n_minus_1_ample(const Geometry& g, const ClassVec& c) {
  ClassVec neg;
  for (const auto& x : c) neg.push_back(-x);
  return !g.is_pseudoeffective(neg);
}

// ---- rank-2 cone charts ----

enum class ScanPredicate { Ample, Nef };

struct Ray2 {
  Int a = 0, b = 0;  // primitive
  bool operator==(const Ray2& o) const { return a == o.a && b == o.b; }
  bool operator<(const Ray2& o) const;
};

inline Ray2 primitive_ray(Int a, Int b) {
  Int g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
  if (g == 0) throw std::invalid_argument("zero ray");
  return {a / g, b / g};
}

// Counterclockwise order starting at the positive a-axis.
inline int half_of(const Ray2& r) { return (r.b > 0 || (r.b == 0 && r.a > 0)) ? 0 : 1; }
inline bool Ray2::operator<(const Ray2& o) const {
  int h1 = half_of(*this), h2 = half_of(o);
  if (h1 != h2) return h1 < h2;
  return static_cast<i128>(a) * o.b - static_cast<i128>(b) * o.a > 0;
}

inline std::string slope_label(const Ray2& r) {
  if (r.a == 0) return r.b > 0 ? "a=0,b>0" : "a=0,b<0";
  Rational s(r.b);
  s /= r.a;
  return "b/a=" + rational_to_string(s) + (r.a > 0 ? ",a>0" : ",a<0");
}

struct Sector {
  Ray2 from, to;  // open arc from -> to, counterclockwise
  bool verdict = false;
};

struct ConeChart {
  std::string geometry;
  int q = 0;
  int resolution = 0;
  ScanPredicate predicate = ScanPredicate::Ample;
  std::vector<Ray2> candidates;
  std::vector<std::pair<Ray2, bool>> ray_verdicts;  // all evaluated rays, in order
  std::vector<Sector> sectors;
  std::vector<Ray2> boundary_rays;
  bool consistent = true;  // samples inside each sector agree
};

// Lines where the predicates of a rank-2 geometry can change: for every
// orbit closure V, the pullbacks of the hyperplanes spanned by V's prime
// divisor classes; for SL(3)/B the dot-action walls.
inline std::vector<Ray2> candidate_rays(const Geometry& g) {
  std::vector<Ray2> out;
  auto add_line = [&](Int a, Int b) {
    if (a == 0 && b == 0) return;
    auto r = primitive_ray(a, b);
    out.push_back(r);
    out.push_back({-r.a, -r.b});
  };
  const auto* t = dynamic_cast<const ToricGeometry*>(&g);
  if (!t) {
    add_line(1, 0);
    add_line(0, 1);
    add_line(1, -1);
  } else {
    const int n = g.dim();
    for (int d = 1; d <= n; ++d)
      for (const auto& v : orbit_closures(t->fan(), d)) {
        auto qf = std::make_shared<const Fan>(v.quotient);
        std::vector<std::vector<Rational>> R;  // restricted basis classes
        for (int i = 0; i < 2; ++i) R.push_back(class_of(restrict_to(t->divisor(unit(2, static_cast<std::size_t>(i))), v, qf)).coords);
        const int rv = picard_rank(*qf);
        std::vector<std::vector<Rational>> gens;
        for (int r = 0; r < qf->num_rays(); ++r) gens.push_back(class_of(prime_divisor(qf, r)).coords);
        std::vector<std::vector<Rational>> normals;
        if (rv == 1) {
          normals.push_back({Rational(1)});
        } else {
          // every (rv-1)-subset of generators spanning a hyperplane
          std::vector<int> idx(static_cast<std::size_t>(rv - 1));
          std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int start) {
            if (pos == idx.size()) {
              Matrix<RationalField> m(RationalField{}, 0, static_cast<std::size_t>(rv));
              for (int k : idx) m.append_row(gens[static_cast<std::size_t>(k)]);
              auto ker = kernel(m);
              if (ker.rows() == 1) normals.push_back(ker.row(0));
              return;
            }
            for (int k = start; k < static_cast<int>(gens.size()); ++k) {
              idx[pos] = k;
              rec(pos + 1, k + 1);
            }
          };
          rec(0, 0);
        }
        for (const auto& nu : normals) {
          Rational f0 = 0, f1 = 0;
          for (std::size_t k = 0; k < nu.size(); ++k) {
            f0 += nu[k] * R[0][k];
            f1 += nu[k] * R[1][k];
          }
          // kernel of c -> c0 f0 + c1 f1
          Rational v0 = -f1, v1 = f0;
          mpz_class l = 1;
          mpz_lcm(l.get_mpz_t(), v0.get_den().get_mpz_t(), v1.get_den().get_mpz_t());
          mpz_class a = v0.get_num() * (l / v0.get_den()), b = v1.get_num() * (l / v1.get_den());
          add_line(a.get_si(), b.get_si());
        }
      }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

inline bool flag_naive_ample(const Geometry& g, const IntVec& l, int q, Int m_max = 40) {
  for (Int s = -3; s <= 3; ++s)
    for (Int t = -3; t <= 3; ++t)
      if (!stable_vanishing(g, l, {s, t}, q, m_max / 2, m_max)) return false;
  return true;
}

}  // namespace detail

// Verdict of the chosen predicate on an integral class.
inline bool scan_predicate(const Geometry& g, const IntVec& l, int q, ScanPredicate p, Int n_max = 64) {
  if (p == ScanPredicate::Nef) return q_nef(g, to_class(l), q).nef;
  if (!g.toric()) return detail::flag_naive_ample(g, l, q);
  return qtample_certificate(g, l, g.polarization(), q, n_max).positive();
}

inline ConeChart cone_scan_rank2(const Geometry& g, int q, int resolution, ScanPredicate p = ScanPredicate::Ample) {
  if (g.picard_rank() != 2) throw UnsupportedRank(g.picard_rank());
  if (resolution < 4) throw std::invalid_argument("resolution must be at least 4");
  ConeChart chart;
  chart.geometry = g.name();
  chart.q = q;
  chart.resolution = resolution;
  chart.predicate = p;
  chart.candidates = candidate_rays(g);

  std::vector<Ray2> samples;
  const double pi = std::acos(-1.0);
  for (int k = 0; k < resolution; ++k) {
    double th = 2 * pi * k / resolution;
    auto a = static_cast<Int>(std::llround(resolution * std::cos(th)));
    auto b = static_cast<Int>(std::llround(resolution * std::sin(th)));
    if (a != 0 || b != 0) samples.push_back(primitive_ray(a, b));
  }
  std::map<Ray2, bool> verdict;
  auto eval = [&](const Ray2& r) {
    auto it = verdict.find(r);
    if (it != verdict.end()) return it->second;
    bool v = scan_predicate(g, {r.a, r.b}, q, p);
    verdict.emplace(r, v);
    return v;
  };
  for (const auto& r : chart.candidates) eval(r);
  for (const auto& r : samples) eval(r);

  // Sectors between consecutive candidate rays; interior samples plus the
  // bisector decide the verdict.
  const auto& cand = chart.candidates;
  const std::size_t k = cand.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Ray2& from = cand[i];
    const Ray2& to = cand[(i + 1) % k];
    auto inside = [&](const Ray2& r) {
      if (k == 1) return !(r == from);
      if (from < to) return from < r && r < to;
      return from < r || r < to;
    };
    // Bisector: sum of unit-ish directions; for opposite rays use the normal.
    Int ba = from.a + to.a, bb = from.b + to.b;
    if (ba == 0 && bb == 0) {
      ba = -from.b;
      bb = from.a;
    }
    Ray2 mid = primitive_ray(ba, bb);
    if (!inside(mid)) mid = {-mid.a, -mid.b};
    bool v = eval(mid);
    for (const auto& [r, rv] : verdict)
      if (inside(r) && rv != v) chart.consistent = false;
    chart.sectors.push_back({from, to, v});
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto& before = chart.sectors[(i + k - 1) % k];
    const auto& after = chart.sectors[i];
    bool own = verdict.at(cand[i]);
    if (before.verdict != after.verdict || own != after.verdict) chart.boundary_rays.push_back(cand[i]);
  }
  for (const auto& [r, v] : verdict) chart.ray_verdicts.emplace_back(r, v);
  return chart;
}

// Chambers and walls agree between two charts.
inline bool same_structure(const ConeChart& x, const ConeChart& y) {
  if (x.boundary_rays != y.boundary_rays || x.sectors.size() != y.sectors.size()) return false;
  for (std::size_t i = 0; i < x.sectors.size(); ++i)
    if (!(x.sectors[i].from == y.sectors[i].from) || x.sectors[i].verdict != y.sectors[i].verdict) return false;
  return true;
}

enum class AdditivityOutcome { Consistent, Inconclusive, PreconditionUnmet, Counterexample };

inline const char* additivity_name(AdditivityOutcome o) {
  switch (o) {
    case AdditivityOutcome::Consistent: return "CONSISTENT";
    case AdditivityOutcome::Inconclusive: return "INCONCLUSIVE";
    case AdditivityOutcome::PreconditionUnmet: return "PRECONDITION_UNMET";
    case AdditivityOutcome::Counterexample: return "COUNTEREXAMPLE";
  }
  return "";
}

struct AdditivityReport {
  AdditivityOutcome outcome = AdditivityOutcome::Inconclusive;
  AmplenessReport first, second, sum;
};

// A q-ample class plus an r-ample class should be (q+r)-ample.
inline AdditivityReport additivity_check(const Geometry& g, const ClassVec& c1, int q, const ClassVec& c2, int r,
                                         Int evidence_depth = 64) {
  AdditivityReport rep;
  const IntVec h = g.polarization();
  rep.first = qtample_certificate(g, c1, h, q, evidence_depth);
  rep.second = qtample_certificate(g, c2, h, r, evidence_depth);
  if (!rep.first.positive() || !rep.second.positive()) {
    rep.outcome = AdditivityOutcome::PreconditionUnmet;
    return rep;
  }
  ClassVec s;
  for (std::size_t i = 0; i < c1.size(); ++i) s.push_back(c1[i] + c2.at(i));
  rep.sum = qtample_certificate(g, s, h, q + r, evidence_depth);
  if (rep.sum.positive()) {
    rep.outcome = AdditivityOutcome::Consistent;
  } else if (q + r == g.dim() - 1) {
    rep.outcome = n_minus_1_ample(g, s) ? AdditivityOutcome::Consistent : AdditivityOutcome::Counterexample;
  } else {
    rep.outcome = AdditivityOutcome::Inconclusive;
  }
  return rep;
}

}  // namespace qample
