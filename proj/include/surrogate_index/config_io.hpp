// Copyright 2026 The Surrogate Index Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON form of DgpConfig. Keys match the struct field names; tagged unions
// carry a "variant" key:
//
//   "surrogate_cov": {"variant": "identity_scaled", "sigma2": 1}
//                    {"variant": "toeplitz", "rho": 0.5, "sigma2": 1}
//                    {"variant": "explicit", "matrix": [[...], ...]}
//   "loading_spec":  {"variant": "balanced", "c": 6}
//                    {"variant": "block", "per_surrogate": 6, "base": 1, "jitter_sd": 0.2}
//                    {"variant": "explicit", "matrix": [[...], ...]}
//   "proxy_noise":   {"variant": "iso", "sigma2_e": 1}
//                    {"variant": "compound_symmetry", "sigma2": 1, "rho": 0.2}
//                    {"variant": "snr_calibrated", "target_snr": 1, "rho": 0.2}

#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "surrogate_index/core_model.hpp"

namespace surrogate_index {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kSchema, where + ": " + what);
}

inline double get_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) schema_error(where, "missing key '" + key + "'");
  if (!j.at(key).is_number()) schema_error(where, "key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

inline Vector json_to_vector(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(where, "expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Matrix json_to_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) schema_error(where, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) schema_error(where, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) schema_error(where, "matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) schema_error(where, "unknown key '" + it.key() + "'");
}

inline std::string variant_of(const Json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  if (!j.contains("variant") || !j.at("variant").is_string())
    schema_error(where, "missing string key 'variant'");
  return j.at("variant").get<std::string>();
}

}  // namespace detail

inline Json to_json(const CovarianceSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IdentityScaled>)
          return {{"variant", "identity_scaled"}, {"sigma2", s.sigma2}};
        else if constexpr (std::is_same_v<T, Toeplitz>)
          return {{"variant", "toeplitz"}, {"rho", s.rho}, {"sigma2", s.sigma2}};
        else
          return {{"variant", "explicit"}, {"matrix", detail::matrix_to_json(s.matrix)}};
      },
      spec);
}

inline Json to_json(const LoadingSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BalancedLoadings>)
          return {{"variant", "balanced"}, {"c", s.c}};
        else if constexpr (std::is_same_v<T, BlockLoadings>)
          return {{"variant", "block"},
                  {"per_surrogate", s.per_surrogate},
                  {"base", s.base},
                  {"jitter_sd", s.jitter_sd}};
        else
          return {{"variant", "explicit"}, {"matrix", detail::matrix_to_json(s.matrix)}};
      },
      spec);
}

inline Json to_json(const ProxyNoiseSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IsoNoise>)
          return {{"variant", "iso"}, {"sigma2_e", s.sigma2_e}};
        else if constexpr (std::is_same_v<T, CompoundSymmetryNoise>)
          return {{"variant", "compound_symmetry"}, {"sigma2", s.sigma2}, {"rho", s.rho}};
        else
          return {{"variant", "snr_calibrated"}, {"target_snr", s.target_snr}, {"rho", s.rho}};
      },
      spec);
}

inline Json to_json(const DgpConfig& c) {
  return {{"n_obs", c.n_obs},
          {"n_exp", c.n_exp},
          {"p", c.p},
          {"k", c.k},
          {"gamma", detail::vector_to_json(c.gamma)},
          {"beta", detail::vector_to_json(c.beta)},
          {"sigma_eta", c.sigma_eta},
          {"surrogate_cov", to_json(c.surrogate_cov)},
          {"loading_spec", to_json(c.loading_spec)},
          {"proxy_noise", to_json(c.proxy_noise)},
          {"treat_prob", c.treat_prob},
          {"seed", c.seed},
          {"obs_treated", c.obs_treated}};
}

inline CovarianceSpec covariance_from_json(const Json& j) {
  const std::string where = "surrogate_cov";
  const auto v = detail::variant_of(j, where);
  if (v == "identity_scaled") {
    detail::reject_unknown_keys(j, {"variant", "sigma2"}, where);
    return IdentityScaled{detail::get_number(j, "sigma2", where)};
  }
  if (v == "toeplitz") {
    detail::reject_unknown_keys(j, {"variant", "rho", "sigma2"}, where);
    return Toeplitz{detail::get_number(j, "rho", where), detail::get_number(j, "sigma2", where)};
  }
  if (v == "explicit") {
    detail::reject_unknown_keys(j, {"variant", "matrix"}, where);
    if (!j.contains("matrix")) detail::schema_error(where, "missing key 'matrix'");
    return ExplicitCovariance{detail::json_to_matrix(j.at("matrix"), where + ".matrix")};
  }
  detail::schema_error(where, "unknown variant '" + v + "'");
}

inline LoadingSpec loadings_from_json(const Json& j) {
  const std::string where = "loading_spec";
  const auto v = detail::variant_of(j, where);
  if (v == "balanced") {
    detail::reject_unknown_keys(j, {"variant", "c"}, where);
    return BalancedLoadings{detail::get_number(j, "c", where)};
  }
  if (v == "block") {
    detail::reject_unknown_keys(j, {"variant", "per_surrogate", "base", "jitter_sd"}, where);
    if (!j.contains("per_surrogate") || !j.at("per_surrogate").is_number_integer())
      detail::schema_error(where, "key 'per_surrogate' must be an integer");
    BlockLoadings b;
    b.per_surrogate = j.at("per_surrogate").get<int>();
    b.base = j.contains("base") ? detail::get_number(j, "base", where) : 1.0;
    b.jitter_sd = j.contains("jitter_sd") ? detail::get_number(j, "jitter_sd", where) : 0.0;
    return b;
  }
  if (v == "explicit") {
    detail::reject_unknown_keys(j, {"variant", "matrix"}, where);
    if (!j.contains("matrix")) detail::schema_error(where, "missing key 'matrix'");
    return ExplicitLoadings{detail::json_to_matrix(j.at("matrix"), where + ".matrix")};
  }
  detail::schema_error(where, "unknown variant '" + v + "'");
}

inline ProxyNoiseSpec noise_from_json(const Json& j) {
  const std::string where = "proxy_noise";
  const auto v = detail::variant_of(j, where);
  if (v == "iso") {
    detail::reject_unknown_keys(j, {"variant", "sigma2_e"}, where);
    return IsoNoise{detail::get_number(j, "sigma2_e", where)};
  }
  if (v == "compound_symmetry") {
    detail::reject_unknown_keys(j, {"variant", "sigma2", "rho"}, where);
    return CompoundSymmetryNoise{detail::get_number(j, "sigma2", where),
                                 j.contains("rho") ? detail::get_number(j, "rho", where) : 0.0};
  }
  if (v == "snr_calibrated") {
    detail::reject_unknown_keys(j, {"variant", "target_snr", "rho"}, where);
    return SnrCalibratedNoise{detail::get_number(j, "target_snr", where),
                              j.contains("rho") ? detail::get_number(j, "rho", where) : 0.0};
  }
  detail::schema_error(where, "unknown variant '" + v + "'");
}

inline DgpConfig config_from_json(const Json& j) {
  const std::string where = "config";
  if (!j.is_object()) detail::schema_error(where, "expected an object");
  detail::reject_unknown_keys(j,
                              {"n_obs", "n_exp", "p", "k", "gamma", "beta", "sigma_eta",
                               "surrogate_cov", "loading_spec", "proxy_noise", "treat_prob",
                               "seed", "obs_treated"},
                              where);
  auto get_int = [&](const std::string& key, int fallback, bool required) {
    if (!j.contains(key)) {
      if (required) detail::schema_error(where, "missing key '" + key + "'");
      return fallback;
    }
    if (!j.at(key).is_number_integer())
      detail::schema_error(where, "key '" + key + "' must be an integer");
    return j.at(key).get<int>();
  };

  DgpConfig c;
  c.n_obs = get_int("n_obs", c.n_obs, false);
  c.n_exp = get_int("n_exp", c.n_exp, false);
  c.p = get_int("p", c.p, true);
  c.k = get_int("k", c.k, true);
  if (!j.contains("gamma") || !j.contains("beta"))
    detail::schema_error(where, "keys 'gamma' and 'beta' are required");
  c.gamma = detail::json_to_vector(j.at("gamma"), "gamma");
  c.beta = detail::json_to_vector(j.at("beta"), "beta");
  if (j.contains("sigma_eta")) c.sigma_eta = detail::get_number(j, "sigma_eta", where);
  if (j.contains("surrogate_cov")) c.surrogate_cov = covariance_from_json(j.at("surrogate_cov"));
  if (j.contains("loading_spec")) c.loading_spec = loadings_from_json(j.at("loading_spec"));
  if (j.contains("proxy_noise")) c.proxy_noise = noise_from_json(j.at("proxy_noise"));
  if (j.contains("treat_prob")) c.treat_prob = detail::get_number(j, "treat_prob", where);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      detail::schema_error(where, "key 'seed' must be a nonnegative integer");
    if (!j.at("seed").is_number_unsigned() && j.at("seed").get<long long>() < 0)
      detail::schema_error(where, "key 'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("obs_treated")) {
    if (!j.at("obs_treated").is_boolean())
      detail::schema_error(where, "key 'obs_treated' must be a boolean");
    c.obs_treated = j.at("obs_treated").get<bool>();
  }
  return c;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchema, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchema, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline DgpConfig read_config(const std::string& path) { return config_from_json(read_json_file(path)); }

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kSchema, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

inline void write_config(const std::string& path, const DgpConfig& config) {
  write_json_file(path, to_json(config));
}

}  // namespace surrogate_index
