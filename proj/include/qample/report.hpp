#pragma once

// JSON views of module results and the SVG cone chart.

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "qample/frobenius.hpp"
#include "qample/regularity.hpp"

namespace qample {

using nlohmann::json;

inline json rational_json(const Rational& r) { return rational_to_string(r); }

inline json class_json(const ClassVec& c) {
  json out = json::array();
  for (const auto& x : c) out.push_back(rational_json(x));
  return out;
}

inline json to_json(const CohomologyTable& t, const IntVec& params) {
  json j{{"params", params}, {"coeffs", t.coeffs}, {"char", t.char_label}, {"h", t.dims}};
  if (t.torsion) j["rational_h"] = t.rational_dims;
  return j;
}

inline json to_json(const Witness& w) { return {{"twist", w.twist}, {"i", w.i}, {"h", w.h}}; }

inline json to_json(const AmplenessReport& r) {
  json w = json::array();
  for (const auto& x : r.witnesses) w.push_back(to_json(x));
  return {{"class", class_json(r.cls)}, {"params", r.params}, {"q", r.q}, {"verdict", verdict_name(r.verdict)},
          {"N", r.N}, {"witnesses", w}, {"assumptions", r.assumptions}};
}

inline json to_json(const NefReport& r) {
  json j{{"nef", r.nef}, {"assumptions", r.assumptions}};
  if (r.witness) j["witness_cone"] = std::vector<int>(r.witness->begin(), r.witness->end());
  return j;
}

inline json to_json(const NaiveProbeReport& r) {
  json e = json::array();
  for (const auto& x : r.entries) {
    json one{{"twist", x.twist}};
    one["m"] = x.m ? json(*x.m) : json(nullptr);
    if (!x.m) one["last_failure"] = to_json(x.last_failure);
    e.push_back(one);
  }
  return {{"params", r.params}, {"q", r.q}, {"m_max", r.m_max}, {"entries", e}, {"all_reached", r.all_reached()}};
}

inline json to_json(const UniformProbeResult& r) {
  json s = json::array();
  for (const auto& [j, m] : r.samples) s.push_back({{"j", j}, {"m", m ? json(*m) : json(nullptr)}});
  json out{{"samples", s}, {"speculative", r.speculative}, {"consistent", r.consistent}};
  out["lambda_estimate"] = r.lambda_estimate ? rational_json(*r.lambda_estimate) : json(nullptr);
  out["N_reference"] = r.N_reference ? json(*r.N_reference) : json(nullptr);
  return out;
}

inline json to_json(const KoszulCertificate& c) {
  json j{{"N", c.N},
         {"window", c.window},
         {"status", c.certified() ? "CERTIFIED_IN_WINDOW" : "FAILED"},
         {"tor_dims", c.tor_dims},
         {"field_char", c.field_char},
         {"rational_confirmation", c.rational_confirmation},
         {"degree_one_generated", c.degree_one_generated}};
  if (!c.certified()) j["failure"] = {{"i", c.fail_i}, {"j", c.fail_j}, {"dim", c.fail_dim}};
  return j;
}

inline json to_json(const Sequence4Report& r) {
  return {{"j", r.j}, {"l", r.l}, {"N", r.N}, {"term_dims", r.term_dims}, {"homology", r.homology},
          {"constrained", r.constrained}, {"exact", r.exact()}};
}

inline json to_json(const TorTable& t) { return {{"algebra", t.algebra}, {"p", t.p}, {"N", t.N}, {"dims", t.dims}}; }

inline json to_json(const CharpReport& r) {
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back({{"p", x.p}, {"b", x.b}, {"multiple", x.multiple}, {"h", x.dims}, {"required", x.required},
                    {"vanishes", x.vanishes}});
  return {{"status", probe_status_name(r.status)}, {"certificate_N", r.certificate_N}, {"reg_M", r.reg_M},
          {"hypothesis", to_json(r.hypothesis)}, {"rows", rows},
          {"note", "cohomology dims are combinatorial and independent of the characteristic"}};
}

inline json to_json(const AsymptoticEstimate& e) {
  json j{{"estimate", rational_json(e.estimate)}, {"sequence", e.sequence}};
  j["limit"] = e.limit ? rational_json(*e.limit) : json(nullptr);
  return j;
}

inline json ray_json(const Ray2& r) { return {{"a", r.a}, {"b", r.b}, {"label", slope_label(r)}}; }

inline json to_json(const ConeChart& c) {
  json sectors = json::array(), walls = json::array();
  for (const auto& s : c.sectors) sectors.push_back({{"from", ray_json(s.from)}, {"to", ray_json(s.to)}, {"in", s.verdict}});
  for (const auto& r : c.boundary_rays) walls.push_back(ray_json(r));
  return {{"geometry", c.geometry}, {"q", c.q}, {"resolution", c.resolution},
          {"predicate", c.predicate == ScanPredicate::Ample ? "ample" : "nef"},
          {"sectors", sectors}, {"boundary_rays", walls}, {"consistent", c.consistent}};
}

// ---- SVG ----

struct ChartStyle {
  std::string fill = "#9ecae1";
  std::string stroke = "#08519c";
  std::string title;
};

namespace detail {

inline std::string fmt3(double v) {
  if (std::fabs(v) < 5e-4) v = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::pair<double, double> ray_point(const Ray2& r, double radius) {
  double len = std::hypot(static_cast<double>(r.a), static_cast<double>(r.b));
  return {400 + radius * static_cast<double>(r.a) / len, 400 - radius * static_cast<double>(r.b) / len};
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else out += ch;
  }
  return out;
}

inline double angle_of(const Ray2& r) {
  double t = std::atan2(static_cast<double>(r.b), static_cast<double>(r.a));
  return t < 0 ? t + 2 * std::acos(-1.0) : t;
}

}  // namespace detail

// Consecutive in-sectors merged into chambers (from, to, full circle).
struct Chamber {
  Ray2 from, to;
  bool full = false;
};

inline std::vector<Chamber> chambers(const ConeChart& c) {
  std::vector<Chamber> out;
  const std::size_t k = c.sectors.size();
  if (k == 0) return out;
  std::size_t start = k;
  for (std::size_t i = 0; i < k; ++i)
    if (!c.sectors[i].verdict) {
      start = i;
      break;
    }
  if (start == k) return {{c.sectors[0].from, c.sectors[0].from, true}};
  for (std::size_t s = 1; s <= k; ++s) {
    std::size_t i = (start + s) % k;
    if (!c.sectors[i].verdict) continue;
    std::size_t e = i;
    while (c.sectors[(e + 1) % k].verdict) e = (e + 1) % k;
    out.push_back({c.sectors[i].from, c.sectors[e].to, false});
    s += (e + k - i) % k;
  }
  return out;
}

inline std::string emit_chart(const ConeChart& c, const ChartStyle& style = {}) {
  const double R = 340;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  for (const auto& ch : chambers(c)) {
    if (ch.full) {
      s << "<circle class=\"chamber\" cx=\"400\" cy=\"400\" r=\"" << detail::fmt3(R) << "\" fill=\"" << style.fill
        << "\" fill-opacity=\"0.6\"/>\n";
      continue;
    }
    auto [x0, y0] = detail::ray_point(ch.from, R);
    auto [x1, y1] = detail::ray_point(ch.to, R);
    double sweep = detail::angle_of(ch.to) - detail::angle_of(ch.from);
    if (sweep <= 0) sweep += 2 * std::acos(-1.0);
    int large = sweep > std::acos(-1.0) ? 1 : 0;
    // counterclockwise in the a,b plane is sweep-flag 0 once y is flipped
    s << "<path class=\"chamber\" d=\"M 400.000 400.000 L " << detail::fmt3(x0) << " " << detail::fmt3(y0) << " A "
      << detail::fmt3(R) << " " << detail::fmt3(R) << " 0 " << large << " 0 " << detail::fmt3(x1) << " "
      << detail::fmt3(y1) << " Z\" fill=\"" << style.fill << "\" fill-opacity=\"0.6\"/>\n";
  }
  s << "<line class=\"axis\" x1=\"20\" y1=\"400\" x2=\"780\" y2=\"400\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s << "<line class=\"axis\" x1=\"400\" y1=\"780\" x2=\"400\" y2=\"20\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s << "<text x=\"770\" y=\"392\" font-size=\"14\">a</text>\n<text x=\"408\" y=\"32\" font-size=\"14\">b</text>\n";
  for (const auto& r : c.boundary_rays) {
    auto [x, y] = detail::ray_point(r, R);
    auto [lx, ly] = detail::ray_point(r, R + 24);
    s << "<line class=\"wall\" x1=\"400.000\" y1=\"400.000\" x2=\"" << detail::fmt3(x) << "\" y2=\"" << detail::fmt3(y)
      << "\" stroke=\"" << style.stroke << "\" stroke-width=\"2\"/>\n";
    s << "<text class=\"slope\" x=\"" << detail::fmt3(lx) << "\" y=\"" << detail::fmt3(ly)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << detail::xml_escape(slope_label(r)) << "</text>\n";
  }
  std::string title = style.title.empty() && !c.geometry.empty()
                          ? c.geometry + " q=" + std::to_string(c.q)
                          : style.title;
  if (!title.empty()) s << "<text x=\"20\" y=\"30\" font-size=\"16\">" << detail::xml_escape(title) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace qample
