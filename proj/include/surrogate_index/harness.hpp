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

// Monte Carlo comparison of second-stage methods over a grid of
// (surrogate count p, proxies per surrogate) design points.
//
// Every replication draws one world per design point and runs every method on
// it, so method comparisons within a cell are paired. Replication seeds are a
// hash of (master_seed, p, k, rep), which makes results independent of the
// order in which cells and replications execute.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "surrogate_index/config_io.hpp"
#include "surrogate_index/csv_io.hpp"
#include "surrogate_index/dgp.hpp"
#include "surrogate_index/estimators.hpp"
#include "surrogate_index/inference.hpp"

namespace surrogate_index {

enum class HarnessMethod { kOracle, kOlsScreen, kLasso, kRidge, kPls, kOls };

inline std::string_view to_string(HarnessMethod m) {
  switch (m) {
    case HarnessMethod::kOracle: return "oracle";
    case HarnessMethod::kOlsScreen: return "ols_screen";
    case HarnessMethod::kLasso: return "lasso";
    case HarnessMethod::kRidge: return "ridge";
    case HarnessMethod::kPls: return "pls";
    case HarnessMethod::kOls: return "ols";
  }
  return "unknown";
}

inline HarnessMethod harness_method_from_string(const std::string& s) {
  if (s == "oracle") return HarnessMethod::kOracle;
  if (s == "ols_screen" || s == "ols-screen") return HarnessMethod::kOlsScreen;
  if (s == "lasso") return HarnessMethod::kLasso;
  if (s == "ridge") return HarnessMethod::kRidge;
  if (s == "pls") return HarnessMethod::kPls;
  if (s == "ols") return HarnessMethod::kOls;
  throw Error(ErrorCode::kSchema, "unknown method '" + s + "'");
}

struct ReplicationMethod {
  HarnessMethod kind = HarnessMethod::kRidge;
  std::optional<double> lambda;
  std::optional<int> n_components;
  int top_m = 10;
  std::string label;  // CSV label; defaults to the method name

  std::string display() const { return label.empty() ? std::string(to_string(kind)) : label; }

  MethodSpec estimator_spec() const {
    MethodSpec m;
    switch (kind) {
      case HarnessMethod::kOlsScreen: m.method = Method::kOlsScreen; break;
      case HarnessMethod::kLasso: m.method = Method::kLasso; break;
      case HarnessMethod::kRidge: m.method = Method::kRidge; break;
      case HarnessMethod::kPls: m.method = Method::kPls; break;
      case HarnessMethod::kOls: m.method = Method::kOls; break;
      case HarnessMethod::kOracle:
        throw Error(ErrorCode::kValidation, "oracle has no second-stage estimator");
    }
    m.lambda = lambda;
    m.n_components = n_components;
    m.top_m = top_m;
    return m;
  }
};

// tau_hat for one method on an already simulated world.
inline double estimate_on_world(const SimulatedWorld& world, const ReplicationMethod& method,
                                const CvSpec& cv) {
  if (method.kind == HarnessMethod::kOracle) return oracle_effect(world);
  const IndexFit fit = fit_index(world.observational, method.estimator_spec(), cv);
  const ProxyEffect tau_p = estimate_tau_p(world.experimental);
  return tau_p.tau_p.dot(fit.alpha);
}

// simulate -> second stage on D_O -> first stage on D_E -> combine. The CV
// fold shuffle is seeded from rep_seed as well.
inline double run_replication(DgpConfig config, const ReplicationMethod& method,
                              std::uint64_t rep_seed, CvSpec cv = {}) {
  config.seed = rep_seed;
  cv.seed = rep_seed;
  return estimate_on_world(simulate(config), method, cv);
}

// ---------------------------------------------------------------------------

enum class BetaRule { kHarmonic, kOnes };

struct DesignPoint {
  int p = 1;
  int per_surrogate = 1;
};

struct SweepSpec {
  DgpConfig base;
  std::vector<DesignPoint> points;
  std::vector<ReplicationMethod> methods;
  int n_reps = 200;
  std::uint64_t master_seed = 0;
  CvSpec cv;
  // Used when a design point changes p: gamma_j = gamma_value and beta by rule.
  std::optional<double> gamma_value;
  BetaRule beta_rule = BetaRule::kHarmonic;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::string method;
  int p = 0;
  int k = 0;
  int rep_count = 0;
  int n_failed = 0;
  double tau_star = 0.0;
  std::optional<double> mean_estimate;
  std::optional<double> bias;
  std::optional<double> rmse;
  std::optional<double> mc_se;
  std::optional<double> rel_rmse_vs_oracle;
  std::optional<double> bias_diff_vs_oracle;  // |bias| - |bias_oracle|
  std::string status;                          // ok | partial | failed
  std::string error;                           // first failure message, if any
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

inline std::vector<DesignPoint> grid_points(const std::vector<int>& p_values,
                                            const std::vector<int>& per_values) {
  std::vector<DesignPoint> out;
  for (int p : p_values)
    for (int per : per_values) out.push_back({p, per});
  return out;
}

inline int base_per_surrogate(const DgpConfig& base) {
  if (const auto* b = std::get_if<BlockLoadings>(&base.loading_spec)) return b->per_surrogate;
  return std::max(1, base.k / std::max(1, base.p));
}

// Config for one design point. Block loadings take the new per_surrogate;
// balanced loadings set c = per_surrogate (effective proxies per surrogate).
inline DgpConfig point_config(const SweepSpec& spec, const DesignPoint& point) {
  DgpConfig c = spec.base;
  const bool p_changed = point.p != c.p;
  c.p = point.p;
  c.k = point.p * point.per_surrogate;
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BlockLoadings>)
          s.per_surrogate = point.per_surrogate;
        else if constexpr (std::is_same_v<T, BalancedLoadings>)
          s.c = point.per_surrogate;
        else if (s.matrix.rows() != c.k || s.matrix.cols() != c.p)
          throw Error(ErrorCode::kValidation, "explicit loadings cannot follow a varying design");
      },
      c.loading_spec);
  if (p_changed) {
    if (std::holds_alternative<ExplicitCovariance>(c.surrogate_cov))
      throw Error(ErrorCode::kValidation, "explicit surrogate_cov cannot follow a varying p");
    const double g = spec.gamma_value.value_or(spec.base.gamma.size() ? spec.base.gamma[0] : 0.5);
    c.gamma = Vector::Constant(c.p, g);
    c.beta.resize(c.p);
    for (int j = 0; j < c.p; ++j)
      c.beta[j] = spec.beta_rule == BetaRule::kHarmonic ? 1.0 / (j + 1) : 1.0;
  }
  return c;
}

inline std::uint64_t replication_seed(std::uint64_t master, int p, int k, int rep) {
  return hash_combine({master, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k),
                       static_cast<std::uint64_t>(rep)});
}

// Calls fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

inline void validate_sweep(const SweepSpec& spec) {
  if (spec.methods.empty()) throw Error(ErrorCode::kValidation, "sweep needs at least one method");
  if (spec.points.empty()) throw Error(ErrorCode::kValidation, "sweep needs at least one design point");
  if (spec.n_reps < 1) throw Error(ErrorCode::kValidation, "n_reps must be positive");
  for (const auto& pt : spec.points)
    if (pt.p < 1 || pt.per_surrogate < 1)
      throw Error(ErrorCode::kValidation, "design points need p >= 1 and per_surrogate >= 1");
  validate_cv_spec(spec.cv);
  for (const auto& pt : spec.points) require_valid(point_config(spec, pt));
}

inline SweepResult run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  const std::size_t n_points = spec.points.size();
  const std::size_t n_methods = spec.methods.size();
  const auto n_reps = static_cast<std::size_t>(spec.n_reps);

  std::vector<DgpConfig> configs;
  for (const auto& pt : spec.points) configs.push_back(point_config(spec, pt));

  // estimates[(point * n_methods + method) * n_reps + rep]
  std::vector<std::optional<double>> estimates(n_points * n_methods * n_reps);
  std::vector<std::string> first_error(n_points * n_methods);
  std::mutex error_mutex;

  auto record_error = [&](std::size_t cell, const std::string& msg) {
    std::lock_guard<std::mutex> lock(error_mutex);
    if (first_error[cell].empty()) first_error[cell] = msg;
  };

  parallel_for(n_points * n_reps, spec.threads, [&](std::size_t task) {
    const std::size_t point = task / n_reps, rep = task % n_reps;
    DgpConfig config = configs[point];
    const std::uint64_t seed =
        replication_seed(spec.master_seed, config.p, config.k, static_cast<int>(rep));
    config.seed = seed;
    CvSpec cv = spec.cv;
    cv.seed = seed;
    std::optional<SimulatedWorld> world;
    try {
      world = simulate(config);
    } catch (const std::exception& e) {
      for (std::size_t m = 0; m < n_methods; ++m) record_error(point * n_methods + m, e.what());
      return;
    }
    for (std::size_t m = 0; m < n_methods; ++m) {
      const std::size_t cell = point * n_methods + m;
      try {
        estimates[cell * n_reps + rep] = estimate_on_world(*world, spec.methods[m], cv);
      } catch (const std::exception& e) {
        record_error(cell, e.what());
      }
    }
  });

  SweepResult result;
  for (std::size_t point = 0; point < n_points; ++point) {
    const auto& config = configs[point];
    const double tau_star = config.tau_star();
    std::optional<std::size_t> oracle_row;
    const std::size_t row_base = result.rows.size();
    for (std::size_t m = 0; m < n_methods; ++m) {
      const std::size_t cell = point * n_methods + m;
      SweepRow row;
      row.method = spec.methods[m].display();
      row.p = config.p;
      row.k = config.k;
      row.tau_star = tau_star;
      std::vector<double> ok;
      for (std::size_t rep = 0; rep < n_reps; ++rep)
        if (const auto& v = estimates[cell * n_reps + rep]) ok.push_back(*v);
      row.rep_count = static_cast<int>(ok.size());
      row.n_failed = static_cast<int>(n_reps - ok.size());
      row.error = first_error[cell];
      for (char& ch : row.error)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
      if (!ok.empty()) {
        double sum = 0.0, sq = 0.0;
        for (double v : ok) {
          sum += v;
          sq += (v - tau_star) * (v - tau_star);
        }
        const double count = static_cast<double>(ok.size());
        const double mean = sum / count;
        double var = 0.0;
        for (double v : ok) var += (v - mean) * (v - mean);
        row.mean_estimate = mean;
        row.bias = mean - tau_star;
        row.rmse = std::sqrt(sq / count);
        row.mc_se = ok.size() > 1 ? std::sqrt(var / (count - 1.0) / count) : 0.0;
      }
      row.status = row.n_failed == 0 ? "ok" : (row.rep_count == 0 ? "failed" : "partial");
      if (spec.methods[m].kind == HarnessMethod::kOracle && !oracle_row) oracle_row = row_base + m;
      result.rows.push_back(std::move(row));
    }
    if (oracle_row) {
      const SweepRow oracle = result.rows[*oracle_row];
      for (std::size_t m = 0; m < n_methods; ++m) {
        SweepRow& row = result.rows[row_base + m];
        if (row.rmse && oracle.rmse && *oracle.rmse > 0.0)
          row.rel_rmse_vs_oracle = *row.rmse / *oracle.rmse;
        else if (row.rmse && oracle.rmse && *oracle.rmse == *row.rmse)
          row.rel_rmse_vs_oracle = 1.0;
        if (row.bias && oracle.bias)
          row.bias_diff_vs_oracle = std::abs(*row.bias) - std::abs(*oracle.bias);
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV export / import of sweep results.

inline const char* sweep_csv_header() {
  return "method,p,k,rep_count,n_failed,tau_star,mean_estimate,bias,rmse,mc_se,"
         "rel_rmse_vs_oracle,bias_diff_vs_oracle,status,error";
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << sweep_csv_header() << '\n';
  for (const auto& r : result.rows) {
    out << r.method << ',' << r.p << ',' << r.k << ',' << r.rep_count << ',' << r.n_failed << ','
        << format_double(r.tau_star) << ',' << opt(r.mean_estimate) << ',' << opt(r.bias) << ','
        << opt(r.rmse) << ',' << opt(r.mc_se) << ',' << opt(r.rel_rmse_vs_oracle) << ','
        << opt(r.bias_diff_vs_oracle) << ',' << r.status << ',' << r.error << '\n';
  }
}

inline void export_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kSchema, "cannot write '" + path + "'");
  write_sweep_csv(out, result);
}

inline SweepResult read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchema, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != sweep_csv_header())
    throw Error(ErrorCode::kSchema, path + ": unexpected sweep header");
  SweepResult result;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row_no;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 14)
      throw Error(ErrorCode::kSchema, path + ": row " + std::to_string(row_no) + " needs 14 fields");
    auto num = [&](std::size_t i, const char* col) {
      return detail::parse_number(f[i], path, col, row_no);
    };
    auto opt = [&](std::size_t i, const char* col) -> std::optional<double> {
      if (f[i].empty()) return std::nullopt;
      return num(i, col);
    };
    SweepRow r;
    r.method = f[0];
    r.p = static_cast<int>(num(1, "p"));
    r.k = static_cast<int>(num(2, "k"));
    r.rep_count = static_cast<int>(num(3, "rep_count"));
    r.n_failed = static_cast<int>(num(4, "n_failed"));
    r.tau_star = num(5, "tau_star");
    r.mean_estimate = opt(6, "mean_estimate");
    r.bias = opt(7, "bias");
    r.rmse = opt(8, "rmse");
    r.mc_se = opt(9, "mc_se");
    r.rel_rmse_vs_oracle = opt(10, "rel_rmse_vs_oracle");
    r.bias_diff_vs_oracle = opt(11, "bias_diff_vs_oracle");
    r.status = f[12];
    r.error = f[13];
    result.rows.push_back(std::move(r));
  }
  return result;
}

// ---------------------------------------------------------------------------
// JSON form of a sweep:
//
//   {"base": {...DgpConfig...},
//    "vary": {"proxies_per_surrogate": [2, 4]}
//          | {"n_surrogates": [1, 5]}
//          | {"grid": {"p": [1, 5], "per_surrogate": [2, 6]}},
//    "methods": ["oracle", "ridge", {"method": "ridge", "lambda": 0.5, "label": "ridge_fixed"}],
//    "n_reps": 200, "master_seed": 1, "top_m": 10,
//    "cv": {"n_folds": 5, "lambda_grid": [...], "component_grid": [...]},
//    "gamma_value": 0.5, "beta_rule": "harmonic" | "ones", "threads": 0}

inline CvSpec cv_from_json(const Json& j) {
  CvSpec cv;
  if (!j.is_object()) detail::schema_error("cv", "expected an object");
  detail::reject_unknown_keys(j, {"n_folds", "lambda_grid", "component_grid", "seed"}, "cv");
  if (j.contains("n_folds")) cv.n_folds = j.at("n_folds").get<int>();
  if (j.contains("lambda_grid")) {
    const Vector g = detail::json_to_vector(j.at("lambda_grid"), "cv.lambda_grid");
    cv.lambda_grid.assign(g.data(), g.data() + g.size());
  }
  if (j.contains("component_grid")) cv.component_grid = j.at("component_grid").get<std::vector<int>>();
  if (j.contains("seed")) cv.seed = j.at("seed").get<std::uint64_t>();
  return cv;
}

inline SweepSpec sweep_from_json(const Json& j) {
  const std::string where = "sweep";
  if (!j.is_object()) detail::schema_error(where, "expected an object");
  detail::reject_unknown_keys(j,
                              {"base", "vary", "methods", "n_reps", "master_seed", "top_m", "cv",
                               "gamma_value", "beta_rule", "threads"},
                              where);
  SweepSpec s;
  try {
    if (!j.contains("base")) detail::schema_error(where, "missing key 'base'");
    s.base = config_from_json(j.at("base"));
    const int top_m = j.value("top_m", 10);

    if (!j.contains("vary") || !j.at("vary").is_object() || j.at("vary").size() != 1)
      detail::schema_error(where, "'vary' must hold exactly one of proxies_per_surrogate, "
                                  "n_surrogates, grid");
    const Json& vary = j.at("vary");
    if (vary.contains("proxies_per_surrogate")) {
      s.points = grid_points({s.base.p}, vary.at("proxies_per_surrogate").get<std::vector<int>>());
    } else if (vary.contains("n_surrogates")) {
      s.points = grid_points(vary.at("n_surrogates").get<std::vector<int>>(),
                             {base_per_surrogate(s.base)});
    } else if (vary.contains("grid")) {
      const Json& g = vary.at("grid");
      s.points = grid_points(g.at("p").get<std::vector<int>>(),
                             g.at("per_surrogate").get<std::vector<int>>());
    } else {
      detail::schema_error(where, "unknown 'vary' key");
    }

    if (!j.contains("methods") || !j.at("methods").is_array())
      detail::schema_error(where, "'methods' must be an array");
    for (const auto& m : j.at("methods")) {
      ReplicationMethod rm;
      rm.top_m = top_m;
      if (m.is_string()) {
        rm.kind = harness_method_from_string(m.get<std::string>());
      } else if (m.is_object()) {
        detail::reject_unknown_keys(m, {"method", "lambda", "n_components", "top_m", "label"},
                                    "methods[]");
        rm.kind = harness_method_from_string(m.at("method").get<std::string>());
        if (m.contains("lambda")) rm.lambda = m.at("lambda").get<double>();
        if (m.contains("n_components")) rm.n_components = m.at("n_components").get<int>();
        if (m.contains("top_m")) rm.top_m = m.at("top_m").get<int>();
        if (m.contains("label")) rm.label = m.at("label").get<std::string>();
      } else {
        detail::schema_error(where, "methods entries must be strings or objects");
      }
      s.methods.push_back(rm);
    }

    s.n_reps = j.value("n_reps", 200);
    s.master_seed = j.value("master_seed", static_cast<std::uint64_t>(0));
    if (j.contains("cv")) s.cv = cv_from_json(j.at("cv"));
    if (j.contains("gamma_value")) s.gamma_value = j.at("gamma_value").get<double>();
    if (j.contains("beta_rule")) {
      const auto rule = j.at("beta_rule").get<std::string>();
      if (rule == "harmonic") s.beta_rule = BetaRule::kHarmonic;
      else if (rule == "ones") s.beta_rule = BetaRule::kOnes;
      else detail::schema_error(where, "beta_rule must be 'harmonic' or 'ones'");
    }
    s.threads = j.value("threads", 0u);
  } catch (const nlohmann::json::exception& e) {
    detail::schema_error(where, e.what());
  }
  return s;
}

}  // namespace surrogate_index
