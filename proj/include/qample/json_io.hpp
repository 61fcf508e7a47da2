#pragma once

// JSON encodings of fans and divisors. Integers may be JSON numbers or
// decimal strings; both must fit in 64 bits.

#include <string>

#include "json.hpp"
#include "qample/lattice.hpp"

namespace qample {

inline Int json_to_int(const nlohmann::json& j) {
  if (j.is_number_integer()) return j.get<Int>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used, 10);
    } catch (const std::out_of_range&) {
      throw ArithmeticOverflow("integer literal " + s);
    } catch (const std::invalid_argument&) {
      throw FanError(FanError::Kind::InvalidInput, "not an integer: " + s);
    }
    if (used != s.size()) throw FanError(FanError::Kind::InvalidInput, "not an integer: " + s);
    return v;
  }
  throw FanError(FanError::Kind::InvalidInput, "expected an integer, got " + j.dump());
}

inline IntVec json_to_intvec(const nlohmann::json& j) {
  if (!j.is_array()) throw FanError(FanError::Kind::InvalidInput, "expected an array, got " + j.dump());
  IntVec v;
  for (const auto& x : j) v.push_back(json_to_int(x));
  return v;
}

inline Fan fan_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rank") || !j.contains("rays") || !j.contains("max_cones"))
    throw FanError(FanError::Kind::InvalidInput, "fan needs rank, rays and max_cones");
  int rank = static_cast<int>(json_to_int(j.at("rank")));
  std::vector<IntVec> rays;
  for (const auto& r : j.at("rays")) rays.push_back(json_to_intvec(r));
  std::vector<Cone> cones;
  for (const auto& c : j.at("max_cones")) {
    Cone cone;
    for (Int x : json_to_intvec(c)) cone.push_back(static_cast<int>(x));
    cones.push_back(cone);
  }
  return build_fan(rank, std::move(rays), std::move(cones), j.value("name", std::string{}));
}

inline nlohmann::json fan_to_json(const Fan& f) {
  nlohmann::json cones = nlohmann::json::array();
  for (const auto& c : f.max_cones()) cones.push_back(c);
  return {{"rank", f.rank()}, {"rays", f.rays()}, {"max_cones", cones}, {"name", f.name()}};
}

// {"coeffs": {"0": 1, "3": -2}} (missing rays are zero) or {"coeffs": [..]}.
inline IntVec divisor_coeffs_from_json(const nlohmann::json& j, int num_rays) {
  const auto& c = j.contains("coeffs") ? j.at("coeffs") : j;
  if (c.is_array()) {
    auto v = json_to_intvec(c);
    if (static_cast<int>(v.size()) != num_rays) throw FanError(FanError::Kind::InvalidInput, "wrong coefficient count");
    return v;
  }
  if (!c.is_object()) throw FanError(FanError::Kind::InvalidInput, "coeffs must be an object or array");
  IntVec v(static_cast<std::size_t>(num_rays), 0);
  for (const auto& [k, val] : c.items()) {
    int idx = std::stoi(k);
    if (idx < 0 || idx >= num_rays) throw FanError(FanError::Kind::InvalidInput, "ray index out of range: " + k);
    v[static_cast<std::size_t>(idx)] = json_to_int(val);
  }
  return v;
}

inline nlohmann::json divisor_coeffs_to_json(const IntVec& a) {
  nlohmann::json c = nlohmann::json::object();
  for (std::size_t i = 0; i < a.size(); ++i) c[std::to_string(i)] = a[i];
  return {{"coeffs", c}};
}

}  // namespace qample
