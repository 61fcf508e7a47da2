#pragma once

// Command-line front end. run_command is callable in-process so the tests
// can drive it without spawning the binary.

#include <iostream>

#include "CLI11.hpp"
#include "qample/json_io.hpp"
#include "qample/suite.hpp"

namespace qample {

struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& w) : std::invalid_argument(w) {}
};

inline IntVec parse_intvec(const std::string& s) {
  IntVec out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    Int v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("not an integer list: " + s);
    }
    if (used != tok.size()) throw UsageError("not an integer list: " + s);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

// 2c +- e_k all nef means c lies in the interior of the nef cone.
inline bool is_ample_class(const Geometry& g, const IntVec& c) {
  if (!q_nef(g, to_class(c), 0).nef) return false;
  for (std::size_t k = 0; k < c.size(); ++k)
    for (Int s : {-1, 1}) {
      IntVec v = scaled(c, 2);
      v[k] += s;
      if (!q_nef(g, to_class(v), 0).nef) return false;
    }
  return true;
}

// Fan files may carry "polarization" in the default parameter basis;
// otherwise the smallest ample class in [-3,3]^rho is taken.
inline GeometryPtr geometry_from_fan_file(const std::string& path, std::shared_ptr<CohomologyCache> cache) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open fan file " + path);
  auto j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw UsageError("fan file is not JSON: " + path);
  auto fan = std::make_shared<const Fan>(fan_from_json(j));
  auto basis = ToricGeometry::default_basis(*fan);
  std::string name = fan->name().empty() ? "fan" : fan->name();
  const std::size_t r = basis.size();
  if (j.contains("polarization")) {
    auto h = json_to_intvec(j.at("polarization"));
    auto g = std::make_shared<ToricGeometry>(fan, name, basis, h, cache);
    if (h.size() != r || !is_ample_class(*g, h)) throw UsageError("polarization is not ample");
    return g;
  }
  std::vector<IntVec> cands;
  IntVec v(r, -3);
  while (true) {
    cands.push_back(v);
    std::size_t k = 0;
    while (k < r && v[k] == 3) v[k++] = -3;
    if (k == r) break;
    ++v[k];
  }
  std::stable_sort(cands.begin(), cands.end(), [](const IntVec& a, const IntVec& b) { return max_abs(a) < max_abs(b); });
  auto probe = std::make_shared<ToricGeometry>(fan, name, basis, IntVec(r, 0), nullptr);
  for (const auto& h : cands)
    if (max_abs(h) > 0 && is_ample_class(*probe, h)) return std::make_shared<ToricGeometry>(fan, name, basis, h, cache);
  throw UsageError("no ample class with coefficients in [-3,3]; add \"polarization\" to the fan file");
}

struct RunConfig {
  std::string geometry = "p1xp1";
  std::string fan_file;
  std::string divisor, twist, primes = "2,3,5";
  int q = 0;
  Int char_label = 0;
  Int n_max = 64, m_max = 32;
  int window = -1;
  int resolution = 24;
  int N = 2, i_max = 3, b_max = 4;
  std::string cache_path;
  bool no_cache = false;
  std::string format = "json";
  std::string svg;
};

namespace detail {

inline void add_common(CLI::App* s, RunConfig& c) {
  s->add_option("--geometry", c.geometry, "built-in geometry")
      ->check(CLI::IsMember(catalog_names()));
  s->add_option("--fan-file", c.fan_file, "fan JSON file (overrides --geometry)");
  s->add_option("--cache", c.cache_path, "cohomology cache file (JSON lines)");
  s->add_flag("--no-cache", c.no_cache, "disable the cohomology cache");
  s->add_option("--format", c.format, "json | text | svg")->check(CLI::IsMember({"json", "text", "svg"}));
}

inline std::string text_table(const json& j, int indent = 0) {
  std::ostringstream s;
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !(v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); })))
        s << pad << k << ":\n" << text_table(v, indent + 2);
      else
        s << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  } else if (j.is_array()) {
    for (const auto& v : j) s << (v.is_structured() ? text_table(v, indent + 2) + pad + "--\n" : pad + v.dump() + "\n");
  } else {
    s << pad << j.dump() << "\n";
  }
  return s.str();
}

}  // namespace detail

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-ampleness toolkit for toric varieties and SL(3)/B"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* coh = app.add_subcommand("cohomology", "sheaf cohomology table of a line bundle");
  auto* chk = app.add_subcommand("check", "q-T-ample certificate search");
  auto* nef = app.add_subcommand("nef", "q-nef test");
  auto* scan = app.add_subcommand("scan", "chambers of a rank-2 geometry");
  auto* prb = app.add_subcommand("probe", "naive and uniform vanishing probes");
  auto* chp = app.add_subcommand("charp", "vanishing after Frobenius pullback");
  auto* kos = app.add_subcommand("koszul", "N-Koszul certificate of a section ring");
  auto* frb = app.add_subcommand("frobenius", "Tor tables of Frobenius on the preset algebras");
  auto* reg = app.add_subcommand("regularity", "Castelnuovo-Mumford regularity and asymptotic cohomology");
  auto* rep = app.add_subcommand("reproduce", "run the acceptance suite");
  rep->alias("reproduce-paper");
  std::string only;

  for (auto* s : {coh, chk, nef, scan, prb, chp, kos, reg}) detail::add_common(s, cfg);
  for (auto* s : {coh, chk, nef, prb, chp, kos, reg})
    s->add_option("--divisor", cfg.divisor, "parameters a,b[,c...]")->required();
  for (auto* s : {coh, prb, chp}) s->add_option("--twist", cfg.twist, "twist parameters (added, or the sheaf M)");
  for (auto* s : {chk, nef, scan, prb, chp}) s->add_option("--q", cfg.q, "q")->check(CLI::NonNegativeNumber);
  for (auto* s : {coh, kos, frb}) s->add_option("--char", cfg.char_label, "0 or a prime");
  for (auto* s : {chk, prb, chp}) s->add_option("--n-max", cfg.n_max, "certificate search bound")->check(CLI::PositiveNumber);
  for (auto* s : {prb, reg}) s->add_option("--m-max", cfg.m_max, "largest multiple probed")->check(CLI::PositiveNumber);
  for (auto* s : {kos, reg}) s->add_option("--window", cfg.window, "degree window / search half-width")->check(CLI::PositiveNumber);
  scan->add_option("--resolution", cfg.resolution, "sample directions")->check(CLI::Range(4, 4096));
  scan->add_option("--svg", cfg.svg, "write the chart to this file");
  scan->add_flag("--nef", "scan q-nef instead of q-ample");
  kos->add_option("--n", cfg.N, "N")->check(CLI::PositiveNumber);
  frb->add_option("--n", cfg.N, "Frobenius iterate")->check(CLI::PositiveNumber);
  frb->add_option("--i-max", cfg.i_max, "top Tor degree")->check(CLI::Range(0, 6));
  frb->add_option("--format", cfg.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  chp->add_option("--primes", cfg.primes, "comma-separated primes");
  chp->add_option("--b-max", cfg.b_max, "largest Frobenius exponent")->check(CLI::Range(0, 20));
  rep->add_option("--only", only, "comma-separated criterion ids");
  rep->add_option("--format", cfg.format, "json | text")->check(CLI::IsMember({"json", "text"}));
  rep->add_option("--cache", cfg.cache_path, "cohomology cache file");
  rep->add_option("--resolution", cfg.resolution, "scan resolution")->check(CLI::Range(4, 4096));

  auto usage = [&](const std::string& msg) {
    err << json{{"error", "usage"}, {"message", msg}}.dump() << "\n";
    return 2;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage(e.what());
  }

  auto emit = [&](const json& j) {
    if (cfg.format == "text") out << detail::text_table(j);
    else out << j.dump(2) << "\n";
  };

  try {
    std::shared_ptr<CohomologyCache> cache;
    if (!cfg.no_cache) cache = cfg.cache_path.empty() ? std::make_shared<CohomologyCache>()
                                                      : std::make_shared<CohomologyCache>(cfg.cache_path);
    auto geometry = [&]() -> GeometryPtr {
      if (!cfg.fan_file.empty()) return geometry_from_fan_file(cfg.fan_file, cache);
      return make_geometry(cfg.geometry, cache);
    };
    auto params = [&](const Geometry& g, const std::string& s, const char* what) {
      auto v = parse_intvec(s);
      if (static_cast<int>(v.size()) != g.picard_rank())
        throw UsageError(std::string(what) + " needs " + std::to_string(g.picard_rank()) + " parameters for " + g.name());
      return v;
    };
    auto head = [&](const Geometry& g) { return json{{"geometry", g.name()}, {"polarization", g.polarization()}}; };

    if (*rep) {
      SuiteOptions opt;
      if (cache) opt.cache = cache;
      opt.scan_resolution = cfg.resolution;
      if (!only.empty())
        for (Int id : parse_intvec(only)) opt.only.push_back(static_cast<int>(id));
      auto res = run_suite(opt);
      if (cfg.format == "text") {
        for (const auto& c : res.claims) {
          out << (c.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "\n";
          if (!c.pass)
            out << "      expected: " << c.expected.dump() << "\n      got:      " << c.artifact.dump()
                << "\n      first mismatch: " << c.detail << "\n";
        }
      } else {
        out << to_json(res).dump(2) << "\n";
      }
      return res.all_pass() ? 0 : 1;
    }

    if (*frb) {
      if (cfg.char_label == 0) cfg.char_label = 2;
      json rows = json::array();
      for (const auto& a : preset_algebras(cfg.char_label))
        rows.push_back({{"algebra", a.name()}, {"dim", a.dim()}, {"regular", a.regular()},
                        {"relative", frobenius_tor(a, cfg.N, cfg.i_max).dims},
                        {"ordinary", ordinary_frobenius_tor(a, cfg.i_max).dims}});
      emit({{"p", cfg.char_label}, {"N", cfg.N}, {"i_max", cfg.i_max}, {"algebras", rows}});
      return 0;
    }

    auto g = geometry();
    json j = head(*g);

    if (*coh) {
      IntVec d = params(*g, cfg.divisor, "--divisor");
      if (!cfg.twist.empty()) d = added(d, params(*g, cfg.twist, "--twist"));
      j["params"] = d;
      j["char"] = cfg.char_label;
      j["h"] = g->cohomology(d, cfg.char_label);
      if (auto t = dynamic_cast<const ToricGeometry*>(g.get())) j["coeffs"] = t->coeffs(d);
      if (cfg.char_label != 0) j["note"] = "combinatorial dims; the same in every characteristic";
    } else if (*chk) {
      auto r = qtample_certificate(*g, params(*g, cfg.divisor, "--divisor"), g->polarization(), cfg.q, cfg.n_max);
      j["report"] = to_json(r);
    } else if (*nef) {
      j["report"] = to_json(q_nef(*g, to_class(params(*g, cfg.divisor, "--divisor")), cfg.q));
    } else if (*scan) {
      auto chart = cone_scan_rank2(*g, cfg.q, cfg.resolution, scan->count("--nef") ? ScanPredicate::Nef : ScanPredicate::Ample);
      if (!cfg.svg.empty()) {
        std::ofstream f(cfg.svg, std::ios::binary);
        if (!f) throw UsageError("cannot write " + cfg.svg);
        f << emit_chart(chart);
      }
      if (cfg.format == "svg") {
        out << emit_chart(chart);
        return 0;
      }
      j["chart"] = to_json(chart);
    } else if (*prb) {
      IntVec l = params(*g, cfg.divisor, "--divisor");
      std::vector<IntVec> twists;
      if (!cfg.twist.empty()) twists.push_back(params(*g, cfg.twist, "--twist"));
      else
        for (Int k = 0; k <= g->dim(); ++k) twists.push_back(scaled(g->polarization(), -k));
      j["naive"] = to_json(naive_probe(*g, l, cfg.q, twists, cfg.m_max));
      j["uniform"] = to_json(uniform_probe(*g, l, g->polarization(), cfg.q, 8, cfg.m_max, cfg.n_max));
      j["note"] = "finitely many twists and multiples; evidence only";
    } else if (*chp) {
      IntVec l = params(*g, cfg.divisor, "--divisor");
      IntVec m = cfg.twist.empty() ? IntVec(l.size(), 0) : params(*g, cfg.twist, "--twist");
      auto r = charp_vanishing_probe(*g, l, cfg.q, m, parse_intvec(cfg.primes), cfg.b_max, cfg.n_max);
      j["report"] = to_json(r);
      emit(j);
      return r.status == ProbeStatus::Fail ? 1 : 0;
    } else if (*kos) {
      int window = cfg.window > 0 ? cfg.window : 2 * cfg.N;
      auto A = section_ring(*g, params(*g, cfg.divisor, "--divisor"), window);
      j["dims"] = A.dims();
      j["certificate"] = to_json(certify_N_koszul(A, cfg.N, window, cfg.char_label));
    } else if (*reg) {
      IntVec d = params(*g, cfg.divisor, "--divisor");
      std::optional<std::pair<Int, Int>> w;
      if (cfg.window > 0) w = std::pair<Int, Int>{-cfg.window, cfg.window};
      j["params"] = d;
      j["regularity"] = regularity(*g, d, g->polarization(), w);
      json as = json::array();
      for (int i = 0; i <= g->dim(); ++i) {
        auto e = to_json(asymptotic_h(*g, d, i, static_cast<int>(cfg.m_max)));
        e.erase("sequence");
        e["i"] = i;
        as.push_back(e);
      }
      j["asymptotic"] = as;
    }
    emit(j);
    return 0;
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const std::exception& e) {
    err << json{{"error", "runtime"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace qample
