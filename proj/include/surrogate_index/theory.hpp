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

// Closed forms for the population ridge surrogate index.
//
// With Sigma_PP = L Sigma_S L' + Sigma_E and Sigma_PY = L Sigma_S beta, the
// ridge index alpha_lambda = (Sigma_PP + lambda I)^{-1} Sigma_PY targets
// tau_lambda = (L gamma)' alpha_lambda. Under balanced loadings (L'L = c I_p)
// and homoskedastic noise everything reduces to scalars in
// (c, sigma_S^2, sigma_E^2, lambda).

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "surrogate_index/core_model.hpp"

namespace surrogate_index {

struct TheoryParams {
  double sigma2_s = 1.0;
  double sigma2_e = 1.0;
  double c = 1.0;
  double lambda = 0.0;
  Vector gamma = Vector::Ones(1);
  Vector beta = Vector::Ones(1);
  double sigma2_eta = 1.0;
  int n = 1;

  double tau_star() const { return gamma.dot(beta); }
};

struct TwoProxyAlphas {
  double alpha_1 = 0.0;
  double alpha_2 = 0.0;
};

// Population OLS coefficients for P_j = S + eps_j, j = 1, 2, and Y = beta S + eta.
inline TwoProxyAlphas two_proxy_alphas(double beta, double sigma2_s, double sigma2_1,
                                       double sigma2_2) {
  if (!(sigma2_s > 0.0 && sigma2_1 > 0.0 && sigma2_2 > 0.0))
    throw Error(ErrorCode::kValidation, "two_proxy_alphas needs positive variances");
  const double denom = sigma2_s * sigma2_1 + sigma2_s * sigma2_2 + sigma2_1 * sigma2_2;
  return {beta * sigma2_s * sigma2_2 / denom, beta * sigma2_s * sigma2_1 / denom};
}

struct EquicorrelatedAlpha {
  double per_proxy = 0.0;
  double sum = 0.0;
};

// k i.i.d. proxies of one scalar surrogate: every proxy gets
// beta sigma_S^2 / (sigma_E^2 + k sigma_S^2).
inline EquicorrelatedAlpha equicorrelated_alpha(double beta, double sigma2_s, double sigma2_e,
                                                long long k) {
  if (!(sigma2_s > 0.0 && sigma2_e > 0.0) || k < 1)
    throw Error(ErrorCode::kValidation, "equicorrelated_alpha needs positive variances, k >= 1");
  const double kd = static_cast<double>(k);
  const double per = beta * sigma2_s / (sigma2_e + kd * sigma2_s);
  return {per, beta * kd * sigma2_s / (kd * sigma2_s + sigma2_e)};
}

// (sigma_S^2 J_k + sigma_E^2 I_k)^{-1}
//   = I_k / sigma_E^2 - sigma_S^2 / (sigma_E^2 (sigma_E^2 + k sigma_S^2)) J_k.
inline Matrix equicorrelated_inverse(double sigma2_s, double sigma2_e, int k) {
  if (!(sigma2_e > 0.0) || !(sigma2_s >= 0.0) || k < 1)
    throw Error(ErrorCode::kValidation, "equicorrelated_inverse needs sigma2_e > 0, k >= 1");
  const double off = sigma2_s / (sigma2_e * (sigma2_e + k * sigma2_s));
  Matrix inv = Matrix::Constant(k, k, -off);
  inv.diagonal().array() += 1.0 / sigma2_e;
  return inv;
}

// Sherman-Morrison: (A + u v')^{-1} from A^{-1}.
inline Matrix sherman_morrison_inverse(const Matrix& a_inv, const Vector& u, const Vector& v) {
  const Vector au = a_inv * u;
  const Vector va = a_inv.transpose() * v;
  const double denom = 1.0 + v.dot(au);
  if (std::abs(denom) < 1e-14)
    throw Error(ErrorCode::kSingularSystem, "rank-one update makes the matrix singular");
  return a_inv - au * va.transpose() / denom;
}

namespace detail {

inline Vector solve_spd_or_throw(const Matrix& m, const Vector& rhs) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible())
    throw Error(ErrorCode::kSingularSystem, "L Sigma_S L' + Sigma_E + lambda I is singular");
  return lu.solve(rhs);
}

inline void check_shapes(const Vector& gamma, const Vector& beta, const Matrix& loadings,
                         const Matrix& sigma_s, const Matrix& sigma_e) {
  const auto p = loadings.cols(), k = loadings.rows();
  if (gamma.size() != p || beta.size() != p || sigma_s.rows() != p || sigma_s.cols() != p ||
      sigma_e.rows() != k || sigma_e.cols() != k)
    throw Error(ErrorCode::kDimensionMismatch, "theory inputs have inconsistent shapes");
}

}  // namespace detail

// gamma' [L' (L Sigma_S L' + Sigma_E + lambda I)^{-1} L Sigma_S - I] beta.
inline double bias_general(const Vector& gamma, const Vector& beta, const Matrix& loadings,
                           const Matrix& sigma_s, const Matrix& sigma_e, double lambda) {
  detail::check_shapes(gamma, beta, loadings, sigma_s, sigma_e);
  const auto k = loadings.rows();
  Matrix m = loadings * sigma_s * loadings.transpose() + sigma_e;
  m += lambda * Matrix::Identity(k, k);
  const Vector alpha = detail::solve_spd_or_throw(m, loadings * (sigma_s * beta));
  return (loadings * gamma).dot(alpha) - gamma.dot(beta);
}

inline double population_tau_lambda(const Vector& gamma, const Vector& beta,
                                    const Matrix& loadings, const Matrix& sigma_s,
                                    const Matrix& sigma_e, double lambda) {
  return gamma.dot(beta) + bias_general(gamma, beta, loadings, sigma_s, sigma_e, lambda);
}

// Population ridge index alpha_lambda itself.
inline Vector population_alpha(const Vector& beta, const Matrix& loadings,
                               const Matrix& sigma_s, const Matrix& sigma_e, double lambda) {
  const auto k = loadings.rows();
  Matrix m = loadings * sigma_s * loadings.transpose() + sigma_e;
  m += lambda * Matrix::Identity(k, k);
  return detail::solve_spd_or_throw(m, loadings * (sigma_s * beta));
}

struct SpectralDecomposition {
  Vector singular_values;  // d_1..d_p
  Vector rotated_gamma;    // V' gamma
  Vector rotated_beta;     // V' beta
  Vector kappa;            // sigma_S^2 d_j^2 / (sigma_S^2 d_j^2 + sigma_E^2 + lambda)
  double sigma2_s = 0.0;
  double sigma2_e = 0.0;

  Vector shrinkage_at(double lambda) const {
    const Vector signal = sigma2_s * singular_values.array().square();
    return signal.array() / (signal.array() + sigma2_e + lambda);
  }
};

struct SpectralBias {
  SpectralDecomposition decomposition;
  double bias = 0.0;
};

namespace detail {

// Returns s if m == s I within tolerance.
inline double scalar_identity_or_throw(const Matrix& m, const char* name) {
  const double s = m(0, 0);
  const Matrix diff = m - s * Matrix::Identity(m.rows(), m.cols());
  if (diff.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, std::abs(s)))
    throw Error(ErrorCode::kAssumptionViolated, std::string(name) + " is not a scaled identity");
  return s;
}

}  // namespace detail

// Bias_lambda = -sum_j (1 - kappa_j) gamma~_j beta~_j via the SVD L = U D V'.
// Requires Sigma_S = sigma_S^2 I and Sigma_E = sigma_E^2 I.
inline SpectralBias bias_spectral(const Vector& gamma, const Vector& beta, const Matrix& loadings,
                                  const Matrix& sigma_s, const Matrix& sigma_e, double lambda) {
  detail::check_shapes(gamma, beta, loadings, sigma_s, sigma_e);
  if (loadings.rows() < loadings.cols())
    throw Error(ErrorCode::kRankError, "spectral decomposition needs k >= p");
  SpectralBias out;
  auto& d = out.decomposition;
  d.sigma2_s = detail::scalar_identity_or_throw(sigma_s, "Sigma_S");
  d.sigma2_e = detail::scalar_identity_or_throw(sigma_e, "Sigma_E");

  Eigen::JacobiSVD<Matrix> svd(loadings, Eigen::ComputeThinU | Eigen::ComputeThinV);
  d.singular_values = svd.singularValues();
  if (d.singular_values.minCoeff() <= 0.0)
    throw Error(ErrorCode::kRankError, "loadings are not full column rank");
  d.rotated_gamma = svd.matrixV().transpose() * gamma;
  d.rotated_beta = svd.matrixV().transpose() * beta;
  d.kappa = d.shrinkage_at(lambda);
  out.bias = -((1.0 - d.kappa.array()) * d.rotated_gamma.array() * d.rotated_beta.array()).sum();
  return out;
}

// Attenuation factor (sigma_E^2 + lambda) / (c sigma_S^2 + sigma_E^2 + lambda).
inline double balanced_attenuation(const TheoryParams& t) {
  if (!(t.c > 0.0)) throw Error(ErrorCode::kValidation, "balanced loadings need c > 0");
  const double num = t.sigma2_e + t.lambda;
  return num / (t.c * t.sigma2_s + num);
}

// -((sigma_E^2 + lambda) / (c sigma_S^2 + sigma_E^2 + lambda)) tau*.
inline double bias_balanced(const TheoryParams& t) {
  return -balanced_attenuation(t) * t.tau_star();
}

struct Amse {
  double squared_bias = 0.0;
  double variance = 0.0;
  double total = 0.0;
};

inline Amse amse(const TheoryParams& t) {
  if (t.n < 1) throw Error(ErrorCode::kValidation, "amse needs n >= 1");
  const double ratio = balanced_attenuation(t);
  const double tau = t.tau_star();
  const double a = t.c * t.sigma2_s + t.sigma2_e;
  Amse out;
  out.squared_bias = ratio * ratio * tau * tau;
  out.variance = (t.sigma2_eta * t.c * t.gamma.squaredNorm() / t.n) * a /
                 ((a + t.lambda) * (a + t.lambda));
  out.total = out.squared_bias + out.variance;
  return out;
}

// Unclamped minimizer of amse() over lambda.
inline double lambda_star_unclamped(const TheoryParams& t) {
  const double tau = t.tau_star();
  if (tau == 0.0)
    throw Error(ErrorCode::kUnboundedRegularization,
                "tau* = 0: squared bias vanishes and AMSE decreases without bound in lambda");
  if (!(t.sigma2_s > 0.0)) throw Error(ErrorCode::kValidation, "lambda* needs sigma2_s > 0");
  if (t.n < 1) throw Error(ErrorCode::kValidation, "lambda* needs n >= 1");
  return t.sigma2_eta * t.gamma.squaredNorm() * (t.c * t.sigma2_s + t.sigma2_e) /
             (t.n * tau * tau * t.sigma2_s) -
         t.sigma2_e;
}

inline double optimal_lambda(const TheoryParams& t) {
  return std::max(0.0, lambda_star_unclamped(t));
}

}  // namespace surrogate_index
