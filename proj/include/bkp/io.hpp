#pragma once

// JSON/CSV serialization of value objects and deterministic float formatting.

#include <json.hpp>

#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "bkp/params.hpp"
#include "bkp/spectrum.hpp"
#include "bkp/wave.hpp"

namespace bkp::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// Fixed 17-significant-digit rendering; reproducible across runs.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline nlohmann::json to_json(const PhysicalParams& p) {
  return {{"b", p.b}, {"kappa", p.kappa}, {"k", p.k}, {"sigma", p.sig()}};
}

inline PhysicalParams params_from_json(const nlohmann::json& j) {
  return PhysicalParams(j.at("b").get<double>(), j.at("kappa").get<double>(),
                        j.at("k").get<double>(),
                        j.at("sigma").get<double>() < 0 ? Sigma::MinusOne : Sigma::PlusOne);
}

inline nlohmann::json to_json(const wave::RefinedWave& w) {
  return {{"params", to_json(w.params)},
          {"a", w.a},
          {"cos_coeffs", w.cos_coeffs},
          {"c", w.c},
          {"residual_norm", w.residual_norm}};
}

inline wave::RefinedWave wave_from_json(const nlohmann::json& j) {
  return wave::RefinedWave{params_from_json(j.at("params")),
                           j.at("a").get<double>(),
                           j.at("cos_coeffs").get<std::vector<double>>(),
                           j.at("c").get<double>(),
                           j.at("residual_norm").get<double>()};
}

inline nlohmann::json to_json(const BlochSpec& s) {
  return {{"ell", s.ell}, {"xi", s.xi}, {"n_modes", s.n_modes}};
}

inline nlohmann::json to_json(const spectrum::SpectrumResult& r) {
  nlohmann::json eig = nlohmann::json::array();
  for (const auto& z : r.eigenvalues) eig.push_back({z.real(), z.imag()});
  nlohmann::json near = nlohmann::json::array();
  for (const auto& z : r.near_origin) near.push_back({z.real(), z.imag()});
  return {{"eigenvalues", eig},
          {"symmetry_defect", r.symmetry_defect},
          {"max_real", r.max_real},
          {"near_origin", near},
          {"spec", to_json(r.spec)},
          {"n_modes_used", r.n_modes_used}};
}

inline nlohmann::json to_json(const RegionVerdict& v) {
  nlohmann::json j = {{"kind", to_string(v.kind)}, {"case", v.case_label}};
  if (v.witness) j["witness"] = *v.witness;
  return j;
}

}  // namespace bkp::io
