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

// Two-sample estimator tau_hat = tau_hat_P' alpha_hat and its delta-method
// variance
//
//   Var(tau_hat) ~= alpha' Var(tau_hat_P) alpha + tau_hat_P' Var(alpha) tau_hat_P,
//
// which assumes the experimental and observational samples share no units.

#pragma once

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <optional>
#include <string>

#include "surrogate_index/core_model.hpp"
#include "surrogate_index/estimators.hpp"

namespace surrogate_index {

enum class VarianceMode { kRobust, kHomoskedastic };

inline std::string_view to_string(VarianceMode m) {
  return m == VarianceMode::kRobust ? "robust" : "homoskedastic";
}

struct InferenceOptions {
  VarianceMode variance_mode = VarianceMode::kRobust;
  double alpha_level = 0.05;
  // Shared units between the samples add a covariance term this library does
  // not estimate; declaring overlap blocks interval construction.
  bool overlap_declared = false;
};

struct ProxyEffect {
  Vector tau_p;
  Matrix cov;
  Eigen::Index n1 = 0;
  Eigen::Index n0 = 0;
};

struct LongTermEstimate {
  double tau_hat = 0.0;
  std::optional<double> se;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  double alpha_level = 0.05;
  Method method = Method::kRidge;
  std::string estimand_note;
  std::optional<double> first_stage_variance;
  std::optional<double> second_stage_variance;
};

// Difference in arm means with Var = S1/n1 + S0/n0 (unbiased within-arm
// covariances).
inline ProxyEffect estimate_tau_p(const ExperimentalSample& exp) {
  check_sample(exp);
  const auto k = exp.proxies.cols();
  Vector sum1 = Vector::Zero(k), sum0 = Vector::Zero(k);
  Eigen::Index n1 = 0, n0 = 0;
  for (Eigen::Index i = 0; i < exp.w.size(); ++i) {
    if (exp.w[i] == 1.0) {
      sum1 += exp.proxies.row(i).transpose();
      ++n1;
    } else {
      sum0 += exp.proxies.row(i).transpose();
      ++n0;
    }
  }
  if (n1 < 2 || n0 < 2)
    throw Error(ErrorCode::kInsufficientArm,
                "each arm needs >= 2 units (treated " + std::to_string(n1) + ", control " +
                    std::to_string(n0) + ")");
  const Vector mean1 = sum1 / static_cast<double>(n1);
  const Vector mean0 = sum0 / static_cast<double>(n0);

  Matrix scatter1 = Matrix::Zero(k, k), scatter0 = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < exp.w.size(); ++i) {
    if (exp.w[i] == 1.0) {
      const Vector d = exp.proxies.row(i).transpose() - mean1;
      scatter1.selfadjointView<Eigen::Lower>().rankUpdate(d);
    } else {
      const Vector d = exp.proxies.row(i).transpose() - mean0;
      scatter0.selfadjointView<Eigen::Lower>().rankUpdate(d);
    }
  }
  Matrix full1 = scatter1.selfadjointView<Eigen::Lower>();
  Matrix full0 = scatter0.selfadjointView<Eigen::Lower>();

  ProxyEffect out;
  out.tau_p = mean1 - mean0;
  out.cov = full1 / (static_cast<double>(n1 - 1) * n1) + full0 / (static_cast<double>(n0 - 1) * n0);
  out.n1 = n1;
  out.n0 = n0;
  return out;
}

// Sandwich covariance A (X' Omega X) A of a ridge-type fit, with A the stored
// smoother and X the centered proxies. Robust: Omega = diag(e^2);
// homoskedastic: Omega = mean(e^2) I.
inline Matrix ridge_coef_cov(const IndexFit& fit, const ObservationalSample& obs,
                             VarianceMode mode) {
  if (!fit.ridge_smoother)
    throw Error(ErrorCode::kNotRidgeFit,
                std::string(to_string(fit.method)) + " fit has no ridge smoother");
  const auto k = obs.proxies.cols();
  if (fit.ridge_smoother->rows() != k || fit.residuals.size() != obs.proxies.rows())
    throw Error(ErrorCode::kDimensionMismatch, "fit does not match the observational sample");
  const Matrix xc = obs.proxies.rowwise() - obs.proxies.colwise().mean();
  const Matrix& a = *fit.ridge_smoother;
  if (mode == VarianceMode::kRobust) return a * detail::meat(xc, fit.residuals) * a;
  const double sigma2 = fit.residuals.squaredNorm() / static_cast<double>(fit.residuals.size());
  return a * (sigma2 * (xc.transpose() * xc)) * a;
}

inline IndexFit with_coef_cov(IndexFit fit, const ObservationalSample& obs, VarianceMode mode) {
  if (fit.ridge_smoother) fit.coef_cov = ridge_coef_cov(fit, obs, mode);
  return fit;
}

inline double normal_quantile(double q) {
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), q);
}

inline std::string estimand_note(Method m) {
  switch (m) {
    case Method::kRidge:
      return "targets tau_lambda = tau_P' alpha_lambda (the ridge estimand, not tau*); "
             "interval conditions on the selected lambda";
    case Method::kOls:
      return "targets tau_0 = tau_P' alpha_0 (the unregularized projection estimand)";
    case Method::kOlsScreen:
      return "targets tau_P' alpha on the screened proxies; interval conditions on the selection";
    case Method::kLasso:
    case Method::kPls:
      return "point estimate only: no variance theory for this second stage";
  }
  return {};
}

inline LongTermEstimate combine(const ProxyEffect& tau_p, const IndexFit& fit,
                                const InferenceOptions& opts) {
  if (opts.overlap_declared)
    throw Error(ErrorCode::kOverlapUnsupported,
                "overlapping samples add a covariance term that is not estimated; "
                "split the sample instead");
  if (!(opts.alpha_level > 0.0 && opts.alpha_level < 1.0))
    throw Error(ErrorCode::kValidation, "alpha_level must lie in (0, 1)");
  if (tau_p.tau_p.size() != fit.alpha.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "experimental k = " + std::to_string(tau_p.tau_p.size()) +
                    " but observational k = " + std::to_string(fit.alpha.size()));

  LongTermEstimate est;
  est.tau_hat = tau_p.tau_p.dot(fit.alpha);
  est.alpha_level = opts.alpha_level;
  est.method = fit.method;
  est.estimand_note = estimand_note(fit.method);
  if (fit.coef_cov) {
    const double first = fit.alpha.dot(tau_p.cov * fit.alpha);
    const double second = tau_p.tau_p.dot(*fit.coef_cov * tau_p.tau_p);
    est.first_stage_variance = first;
    est.second_stage_variance = second;
    const double se = std::sqrt(std::max(0.0, first + second));
    const double z = normal_quantile(1.0 - opts.alpha_level / 2.0);
    est.se = se;
    est.ci_low = est.tau_hat - z * se;
    est.ci_high = est.tau_hat + z * se;
  }
  return est;
}

struct PipelineResult {
  ProxyEffect proxy_effect;
  IndexFit fit;
  LongTermEstimate estimate;
};

// Full two-sample estimate: second stage on obs, first stage on exp, combine.
inline PipelineResult estimate_long_term(const ExperimentalSample& exp,
                                         const ObservationalSample& obs,
                                         const MethodSpec& method,
                                         const InferenceOptions& opts = {},
                                         const CvSpec& cv = {}) {
  if (exp.proxies.cols() != obs.proxies.cols())
    throw Error(ErrorCode::kDimensionMismatch, "samples disagree on the number of proxies");
  PipelineResult r;
  r.fit = fit_index(obs, method, cv);
  if (opts.variance_mode != VarianceMode::kRobust)
    r.fit = with_coef_cov(std::move(r.fit), obs, opts.variance_mode);
  r.proxy_effect = estimate_tau_p(exp);
  r.estimate = combine(r.proxy_effect, r.fit, opts);
  return r;
}

}  // namespace surrogate_index
