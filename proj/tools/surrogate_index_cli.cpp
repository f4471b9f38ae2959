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


// surrogate_index command line front end.
//
//   simulate --config cfg.json --out-dir DIR [--seed N]
//   estimate --exp experimental.csv --obs observational.csv --method ridge --lambda cv
//            [--variance robust|homoskedastic] [--alpha-level 0.05] --out estimate.json
//   sweep    --config sweep.json --out results.csv [--reps N] [--seed N] [--threads N]
//   theory   bias|amse|lambda-star --c 6 --sigma-s2 1 --sigma-e2 1 --lambda 0 --tau-star 1
//
// Ridge penalties use the mean normalization (P'P / n + lambda I), the same
// scale as the population theory, so `theory lambda-star` output can be passed
// straight to `estimate --lambda`.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surrogate_index.hpp"

namespace si = surrogate_index;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

// Printed in place of lambda* when tau* = 0 makes the AMSE unbounded below.
constexpr double kUnboundedLambdaSentinel = 1e4;

si::Json optional_number(const std::optional<double>& v) {
  return v ? si::Json(*v) : si::Json(nullptr);
}

// "cv" or a number.
std::optional<double> parse_cv_or_number(const std::string& s, const char* flag) {
  if (s == "cv") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw si::Error(si::ErrorCode::kValidation,
                    std::string(flag) + " must be 'cv' or a number, got '" + s + "'");
  }
}

si::Method parse_method(const std::string& s) {
  if (s == "ridge") return si::Method::kRidge;
  if (s == "lasso") return si::Method::kLasso;
  if (s == "pls") return si::Method::kPls;
  if (s == "ols-screen" || s == "ols_screen") return si::Method::kOlsScreen;
  if (s == "ols") return si::Method::kOls;
  throw si::Error(si::ErrorCode::kValidation, "unknown method '" + s + "'");
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& a) {
  si::DgpConfig config = si::read_config(a.config);
  if (a.seed) config.seed = *a.seed;
  const si::SimulatedWorld world = si::simulate(config);
  std::filesystem::create_directories(a.out_dir);
  const std::filesystem::path dir(a.out_dir);
  si::write_experimental_csv((dir / "experimental.csv").string(), world.experimental);
  si::write_observational_csv((dir / "observational.csv").string(), world.observational);
  si::Json truth;
  truth["tau_star"] = world.tau_star;
  truth["seed"] = config.seed;
  truth["n_exp"] = config.n_exp;
  truth["n_obs"] = config.n_obs;
  truth["k"] = config.k;
  truth["config"] = si::to_json(config);
  si::write_json_file((dir / "truth.json").string(), truth);
  std::cout << "tau_star=" << si::format_double(world.tau_star) << '\n'
            << "experimental=" << (dir / "experimental.csv").string() << '\n'
            << "observational=" << (dir / "observational.csv").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string exp;
  std::string obs;
  std::string method = "ridge";
  std::string lambda = "cv";
  std::string components = "cv";
  int top_m = 10;
  std::string variance = "robust";
  double alpha_level = 0.05;
  int folds = 5;
  std::uint64_t seed = 0;
  bool overlap = false;
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  si::MethodSpec spec;
  spec.method = parse_method(a.method);
  spec.lambda = parse_cv_or_number(a.lambda, "--lambda");
  if (const auto c = parse_cv_or_number(a.components, "--components")) {
    if (*c < 1 || *c != std::floor(*c))
      throw si::Error(si::ErrorCode::kValidation, "--components must be a positive integer");
    spec.n_components = static_cast<int>(*c);
  }
  if (a.top_m < 1) throw si::Error(si::ErrorCode::kValidation, "--top-m must be >= 1");
  spec.top_m = a.top_m;

  si::InferenceOptions opts;
  if (a.variance == "robust") opts.variance_mode = si::VarianceMode::kRobust;
  else if (a.variance == "homoskedastic") opts.variance_mode = si::VarianceMode::kHomoskedastic;
  else throw si::Error(si::ErrorCode::kValidation, "--variance must be robust or homoskedastic");
  opts.alpha_level = a.alpha_level;
  opts.overlap_declared = a.overlap;

  si::CvSpec cv;
  cv.n_folds = a.folds;
  cv.seed = a.seed;
  si::validate_cv_spec(cv);

  si::IngestReport report;
  const auto [exp, obs] = si::ingest_samples(a.exp, a.obs, &report);
  const si::PipelineResult r = si::estimate_long_term(exp, obs, spec, opts, cv);
  const si::LongTermEstimate& e = r.estimate;

  si::Json hyper;
  hyper["lambda"] = optional_number(r.fit.hyper.lambda);
  hyper["n_components"] =
      r.fit.hyper.n_components ? si::Json(*r.fit.hyper.n_components) : si::Json(nullptr);
  hyper["top_m"] = r.fit.hyper.top_m ? si::Json(*r.fit.hyper.top_m) : si::Json(nullptr);
  hyper["cv_selected"] = r.fit.hyper.cv_selected;
  hyper["selected"] = r.fit.selected;

  si::Json out;
  out["method"] = std::string(si::to_string(e.method));
  out["tau_hat"] = e.tau_hat;
  out["se"] = optional_number(e.se);
  out["ci_low"] = optional_number(e.ci_low);
  out["ci_high"] = optional_number(e.ci_high);
  out["alpha_level"] = e.alpha_level;
  out["variance_mode"] = std::string(si::to_string(opts.variance_mode));
  out["first_stage_variance"] = optional_number(e.first_stage_variance);
  out["second_stage_variance"] = optional_number(e.second_stage_variance);
  out["estimand_note"] = e.estimand_note;
  out["hyperparameters"] = hyper;
  out["n_exp"] = report.exp_rows;
  out["n_obs"] = report.obs_rows;
  out["k"] = report.k;
  out["n_treated"] = r.proxy_effect.n1;
  out["n_control"] = r.proxy_effect.n0;
  out["tau_p"] = si::detail::vector_to_json(r.proxy_effect.tau_p);
  out["alpha"] = si::detail::vector_to_json(r.fit.alpha);
  out["intercept"] = r.fit.intercept;
  si::write_json_file(a.out, out);

  std::cout << "method=" << si::to_string(e.method) << '\n'
            << "tau_hat=" << si::format_double(e.tau_hat) << '\n';
  if (e.se)
    std::cout << "se=" << si::format_double(*e.se) << '\n'
              << "ci_low=" << si::format_double(*e.ci_low) << '\n'
              << "ci_high=" << si::format_double(*e.ci_high) << '\n';
  std::cout << "note=" << e.estimand_note << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::string out;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

int run_sweep_command(const SweepArgs& a) {
  si::SweepSpec spec = si::sweep_from_json(si::read_json_file(a.config));
  if (a.reps) spec.n_reps = *a.reps;
  if (a.seed) spec.master_seed = *a.seed;
  if (a.threads) spec.threads = *a.threads;
  const si::SweepResult result = si::run_sweep(spec);
  si::export_csv(result, a.out);
  int failed_cells = 0;
  for (const auto& row : result.rows)
    if (row.status != "ok") ++failed_cells;
  std::cout << "rows=" << result.rows.size() << '\n'
            << "cells_with_failures=" << failed_cells << '\n'
            << "out=" << a.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct TheoryArgs {
  double c = 1.0;
  double sigma2_s = 1.0;
  double sigma2_e = 1.0;
  double lambda = 0.0;
  std::optional<double> tau_star;
  std::optional<double> gamma_norm2;
  double sigma2_eta = 1.0;
  int n = 1;
  std::vector<double> gamma;
  std::vector<double> beta;
  bool json = false;
};

// gamma and beta from either explicit vectors or (tau*, ||gamma||^2).
si::TheoryParams theory_params(const TheoryArgs& a) {
  si::TheoryParams t;
  t.c = a.c;
  t.sigma2_s = a.sigma2_s;
  t.sigma2_e = a.sigma2_e;
  t.lambda = a.lambda;
  t.sigma2_eta = a.sigma2_eta;
  t.n = a.n;
  if (!a.gamma.empty() || !a.beta.empty()) {
    if (a.gamma.size() != a.beta.size())
      throw si::Error(si::ErrorCode::kDimensionMismatch, "--gamma and --beta differ in length");
    if (a.tau_star || a.gamma_norm2)
      throw si::Error(si::ErrorCode::kValidation,
                      "give either --gamma/--beta or --tau-star/--gamma-norm2");
    t.gamma = Eigen::Map<const si::Vector>(a.gamma.data(), static_cast<Eigen::Index>(a.gamma.size()));
    t.beta = Eigen::Map<const si::Vector>(a.beta.data(), static_cast<Eigen::Index>(a.beta.size()));
  } else {
    const double g2 = a.gamma_norm2.value_or(1.0);
    if (!(g2 > 0.0)) throw si::Error(si::ErrorCode::kValidation, "--gamma-norm2 must be > 0");
    const double tau = a.tau_star.value_or(1.0);
    t.gamma = si::Vector::Constant(1, std::sqrt(g2));
    t.beta = si::Vector::Constant(1, tau / std::sqrt(g2));
  }
  if (!(t.sigma2_s >= 0.0) || !(t.sigma2_e >= 0.0) || !(t.lambda >= 0.0) || !(t.sigma2_eta >= 0.0))
    throw si::Error(si::ErrorCode::kValidation, "variances and lambda must be >= 0");
  return t;
}

using KeyValues = std::vector<std::pair<std::string, si::Json>>;

void emit(const KeyValues& kv, bool json) {
  if (json) {
    si::Json out = si::Json::object();
    for (const auto& [k, v] : kv) out[k] = v;
    std::cout << out.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : kv) {
    std::cout << k << '=';
    if (v.is_number_float()) std::cout << si::format_double(v.get<double>());
    else if (v.is_string()) std::cout << v.get<std::string>();
    else std::cout << v.dump();
    std::cout << '\n';
  }
}

int run_theory(const std::string& which, const TheoryArgs& a) {
  const si::TheoryParams t = theory_params(a);
  KeyValues kv;
  kv.emplace_back("tau_star", t.tau_star());
  if (which == "bias") {
    const double bias = si::bias_balanced(t);
    kv.emplace_back("lambda", t.lambda);
    kv.emplace_back("attenuation", si::balanced_attenuation(t));
    kv.emplace_back("bias", bias);
    kv.emplace_back("tau_lambda", t.tau_star() + bias);
  } else if (which == "amse") {
    const si::Amse m = si::amse(t);
    kv.emplace_back("lambda", t.lambda);
    kv.emplace_back("squared_bias", m.squared_bias);
    kv.emplace_back("variance", m.variance);
    kv.emplace_back("amse", m.total);
  } else {
    try {
      const double raw = si::lambda_star_unclamped(t);
      kv.emplace_back("lambda_star_unclamped", raw);
      kv.emplace_back("lambda_star", std::max(0.0, raw));
      kv.emplace_back("clamped", raw < 0.0);
      kv.emplace_back("unbounded", false);
    } catch (const si::Error& e) {
      if (e.code() != si::ErrorCode::kUnboundedRegularization) throw;
      kv.emplace_back("lambda_star", kUnboundedLambdaSentinel);
      kv.emplace_back("clamped", false);
      kv.emplace_back("unbounded", true);
    }
  }
  emit(kv, a.json);
  return 0;
}

void add_theory_options(CLI::App* cmd, TheoryArgs& a) {
  cmd->add_option("--c", a.c, "effective proxies per surrogate (L'L = c I)");
  cmd->add_option("--sigma-s2", a.sigma2_s, "surrogate variance");
  cmd->add_option("--sigma-e2", a.sigma2_e, "proxy noise variance");
  cmd->add_option("--lambda", a.lambda, "ridge penalty (mean normalization)");
  cmd->add_option("--tau-star", a.tau_star, "true long-term effect gamma'beta");
  cmd->add_option("--gamma-norm2", a.gamma_norm2, "||gamma||^2");
  cmd->add_option("--sigma-eta2", a.sigma2_eta, "outcome noise variance");
  cmd->add_option("--n", a.n, "observational sample size");
  cmd->add_option("--gamma", a.gamma, "gamma as a comma list")->delimiter(',');
  cmd->add_option("--beta", a.beta, "beta as a comma list")->delimiter(',');
  cmd->add_flag("--json", a.json, "print JSON instead of key=value lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample surrogate index estimation of long-term treatment effects"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "draw experimental and observational samples");
  simulate->add_option("--config", sim.config, "DGP config JSON")->required();
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();
  simulate->add_option("--seed", sim.seed, "override the config seed");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate the long-term effect from two CSVs");
  estimate->add_option("--exp", est.exp, "experimental CSV (w,p_1..p_k)")->required();
  estimate->add_option("--obs", est.obs, "observational CSV (p_1..p_k,y)")->required();
  estimate->add_option("--method", est.method, "ridge | lasso | pls | ols-screen | ols");
  estimate->add_option("--lambda", est.lambda, "'cv' or a penalty value");
  estimate->add_option("--components", est.components, "pls components: 'cv' or a count");
  estimate->add_option("--top-m", est.top_m, "proxies kept by ols-screen");
  estimate->add_option("--variance", est.variance, "robust | homoskedastic");
  estimate->add_option("--alpha-level", est.alpha_level, "interval level is 1 - alpha");
  estimate->add_option("--folds", est.folds, "cross-validation folds");
  estimate->add_option("--seed", est.seed, "cross-validation fold seed");
  estimate->add_flag("--overlap", est.overlap, "declare that the samples share units");
  estimate->add_option("--out", est.out, "output JSON")->required();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo comparison of methods");
  sweep->add_option("--config", sw.config, "sweep JSON")->required();
  sweep->add_option("--out", sw.out, "results CSV")->required();
  sweep->add_option("--reps", sw.reps, "override n_reps");
  sweep->add_option("--seed", sw.seed, "override master_seed");
  sweep->add_option("--threads", sw.threads, "worker threads (0: all cores)");

  auto* theory = app.add_subcommand("theory", "closed-form bias, AMSE and optimal lambda");
  theory->require_subcommand(1);
  TheoryArgs th_bias, th_amse, th_lambda;
  auto* bias = theory->add_subcommand("bias", "balanced-loadings bias of the ridge estimand");
  auto* amse = theory->add_subcommand("amse", "asymptotic MSE decomposition");
  auto* lambda_star = theory->add_subcommand("lambda-star", "AMSE-optimal ridge penalty");
  add_theory_options(bias, th_bias);
  add_theory_options(amse, th_amse);
  add_theory_options(lambda_star, th_lambda);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*estimate) return run_estimate(est);
    if (*sweep) return run_sweep_command(sw);
    if (*bias) return run_theory("bias", th_bias);
    if (*amse) return run_theory("amse", th_amse);
    if (*lambda_star) return run_theory("lambda-star", th_lambda);
  } catch (const si::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return si::is_input_error(e.code()) ? kExitInput : kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
