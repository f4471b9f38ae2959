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

// Shared domain types for the two-sample surrogate index model:
//
//   S = gamma * W + eps_S,   eps_S ~ N(0, Sigma_S)          (p latent surrogates)
//   P = L S + E,             E ~ N(0, Sigma_E)              (k observed proxies)
//   Y = S' beta + eta,       eta ~ N(0, sigma_eta^2)
//
// The experimental sample observes (W, P), the observational sample (P, Y).
// The long-term effect is tau* = gamma' beta.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "surrogate_index/error.hpp"

namespace surrogate_index {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Covariance of the latent surrogates.

struct IdentityScaled {
  double sigma2 = 1.0;
};

// Entry (i, j) is sigma2 * rho^|i - j|.
struct Toeplitz {
  double rho = 0.5;
  double sigma2 = 1.0;
};

struct ExplicitCovariance {
  Matrix matrix;
};

using CovarianceSpec = std::variant<IdentityScaled, Toeplitz, ExplicitCovariance>;

// ---------------------------------------------------------------------------
// Loading matrix L (k x p).

// L'L = c I_p, built from a seeded orthonormal basis.
struct BalancedLoadings {
  double c = 1.0;
};

// k = per_surrogate * p rows; row r loads `base` on surrogate r / per_surrogate,
// and every entry receives independent N(0, jitter_sd^2) noise.
struct BlockLoadings {
  int per_surrogate = 6;
  double base = 1.0;
  double jitter_sd = 0.0;
};

struct ExplicitLoadings {
  Matrix matrix;
};

using LoadingSpec = std::variant<BalancedLoadings, BlockLoadings, ExplicitLoadings>;

// ---------------------------------------------------------------------------
// Proxy noise covariance Sigma_E (k x k).

struct IsoNoise {
  double sigma2_e = 1.0;
};

// Diagonal sigma2, off-diagonal sigma2 * rho.
struct CompoundSymmetryNoise {
  double sigma2 = 1.0;
  double rho = 0.0;
};

// Compound symmetry whose sigma2 is chosen so that
// trace(L Sigma_S L') / trace(Sigma_E) equals target_snr.
struct SnrCalibratedNoise {
  double target_snr = 1.0;
  double rho = 0.0;
};

using ProxyNoiseSpec =
    std::variant<IsoNoise, CompoundSymmetryNoise, SnrCalibratedNoise>;

// ---------------------------------------------------------------------------

struct DgpConfig {
  int n_obs = 5000;
  int n_exp = 5000;
  int p = 1;
  int k = 1;
  Vector gamma = Vector::Constant(1, 0.5);
  Vector beta = Vector::Ones(1);
  double sigma_eta = 0.5;
  CovarianceSpec surrogate_cov = IdentityScaled{1.0};
  LoadingSpec loading_spec = BalancedLoadings{1.0};
  ProxyNoiseSpec proxy_noise = IsoNoise{1.0};
  double treat_prob = 0.5;
  std::uint64_t seed = 0;
  // Observational units also draw W (then drop it) so both samples share one
  // model. When false, every observational unit is untreated.
  bool obs_treated = true;

  double tau_star() const { return gamma.dot(beta); }
};

struct ExperimentalSample {
  Vector w;       // 0/1 entries
  Matrix proxies;  // n_exp x k
};

struct ObservationalSample {
  Matrix proxies;  // n_obs x k
  Vector y;
};

struct Violation {
  std::string code;
  std::string message;
};

// ---------------------------------------------------------------------------
// Matrix checks.

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline double max_asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// Resolves a surrogate covariance spec to a dim x dim matrix. A zero
// identity_scaled variance is accepted as a point-mass surrogate; everything
// else must be positive definite.
inline Matrix resolve_covariance(const CovarianceSpec& spec, int dim) {
  if (dim <= 0) throw Error(ErrorCode::kValidation, "covariance dimension must be positive");
  return std::visit(
      [dim](const auto& s) -> Matrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IdentityScaled>) {
          if (!(s.sigma2 >= 0.0) || !std::isfinite(s.sigma2))
            throw Error(ErrorCode::kValidation, "identity_scaled sigma2 must be >= 0");
          return s.sigma2 * Matrix::Identity(dim, dim);
        } else if constexpr (std::is_same_v<T, Toeplitz>) {
          if (!(s.sigma2 > 0.0) || !std::isfinite(s.sigma2))
            throw Error(ErrorCode::kValidation, "toeplitz sigma2 must be > 0");
          if (!(s.rho >= 0.0 && s.rho < 1.0))
            throw Error(ErrorCode::kValidation, "toeplitz rho must lie in [0, 1)");
          Matrix m(dim, dim);
          for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
              m(i, j) = s.sigma2 * std::pow(s.rho, std::abs(i - j));
          return m;
        } else {
          const Matrix& m = s.matrix;
          if (m.rows() != dim || m.cols() != dim)
            throw Error(ErrorCode::kDimensionMismatch,
                        "explicit covariance is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected " +
                            std::to_string(dim) + "x" + std::to_string(dim));
          if (!all_finite(m))
            throw Error(ErrorCode::kValidation, "explicit covariance has non-finite entries");
          if (max_asymmetry(m) >= 1e-10)
            throw Error(ErrorCode::kNotPositiveDefinite, "explicit covariance is not symmetric");
          if (min_eigenvalue(m) <= 0.0)
            throw Error(ErrorCode::kNotPositiveDefinite,
                        "explicit covariance has a non-positive eigenvalue");
          return m;
        }
      },
      spec);
}

inline Matrix compound_symmetry(int k, double sigma2, double rho) {
  Matrix m = Matrix::Constant(k, k, sigma2 * rho);
  m.diagonal().setConstant(sigma2);
  return m;
}

// Resolves iso and compound-symmetry noise. SNR-calibrated noise needs the
// loadings and the surrogate covariance; see dgp.hpp.
inline Matrix resolve_fixed_noise(const ProxyNoiseSpec& spec, int k) {
  if (const auto* iso = std::get_if<IsoNoise>(&spec)) {
    if (!(iso->sigma2_e >= 0.0))
      throw Error(ErrorCode::kValidation, "iso sigma2_e must be >= 0");
    return iso->sigma2_e * Matrix::Identity(k, k);
  }
  if (const auto* cs = std::get_if<CompoundSymmetryNoise>(&spec)) {
    if (!(cs->sigma2 >= 0.0))
      throw Error(ErrorCode::kValidation, "compound_symmetry sigma2 must be >= 0");
    if (!(cs->rho >= 0.0 && cs->rho < 1.0))
      throw Error(ErrorCode::kValidation, "compound_symmetry rho must lie in [0, 1)");
    return compound_symmetry(k, cs->sigma2, cs->rho);
  }
  throw Error(ErrorCode::kValidation, "snr_calibrated noise requires loadings to resolve");
}

// ---------------------------------------------------------------------------
// Configuration validation. Collects every violation; never throws.

inline std::vector<Violation> validate(const DgpConfig& config) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string message) {
    out.push_back({std::move(code), std::move(message)});
  };

  if (config.n_obs <= 0) add("nonpositive_size", "n_obs must be positive");
  if (config.n_exp <= 0) add("nonpositive_size", "n_exp must be positive");
  if (config.p <= 0) add("nonpositive_size", "p must be positive");
  if (config.k <= 0) add("nonpositive_size", "k must be positive");

  if (config.gamma.size() != config.p)
    add("dimension_mismatch", "len(gamma) = " + std::to_string(config.gamma.size()) +
                                  " but p = " + std::to_string(config.p));
  if (config.beta.size() != config.p)
    add("dimension_mismatch", "len(beta) = " + std::to_string(config.beta.size()) +
                                  " but p = " + std::to_string(config.p));
  if (!config.gamma.allFinite() || !config.beta.allFinite())
    add("nonfinite_value", "gamma and beta must be finite");
  if (!(config.sigma_eta >= 0.0) || !std::isfinite(config.sigma_eta))
    add("invalid_variance", "sigma_eta must be a finite value >= 0");
  if (!(config.treat_prob > 0.0 && config.treat_prob < 1.0))
    add("invalid_probability", "treat_prob must lie in (0, 1)");

  if (config.p > 0) {
    try {
      resolve_covariance(config.surrogate_cov, config.p);
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::kNotPositiveDefinite: add("not_positive_definite", e.what()); break;
        case ErrorCode::kDimensionMismatch: add("dimension_mismatch", e.what()); break;
        default: add("invalid_covariance", e.what());
      }
    }
  }

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BalancedLoadings>) {
          if (!(s.c > 0.0) || !std::isfinite(s.c)) add("invalid_loading", "balanced c must be > 0");
          if (config.k < config.p) add("rank_error", "balanced loadings need k >= p");
        } else if constexpr (std::is_same_v<T, BlockLoadings>) {
          if (s.per_surrogate <= 0) add("invalid_loading", "per_surrogate must be positive");
          if (!std::isfinite(s.base)) add("nonfinite_value", "block base must be finite");
          if (!(s.jitter_sd >= 0.0) || !std::isfinite(s.jitter_sd))
            add("invalid_loading", "jitter_sd must be >= 0");
          if (s.per_surrogate > 0 && config.k != s.per_surrogate * config.p)
            add("dimension_mismatch", "block loadings need k = per_surrogate * p (" +
                                          std::to_string(s.per_surrogate * config.p) +
                                          "), got k = " + std::to_string(config.k));
        } else {
          if (s.matrix.rows() != config.k || s.matrix.cols() != config.p)
            add("dimension_mismatch", "explicit loadings must be k x p");
          if (!all_finite(s.matrix)) add("nonfinite_value", "explicit loadings must be finite");
        }
      },
      config.loading_spec);

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IsoNoise>) {
          if (!(s.sigma2_e >= 0.0) || !std::isfinite(s.sigma2_e))
            add("invalid_variance", "iso sigma2_e must be >= 0");
        } else if constexpr (std::is_same_v<T, CompoundSymmetryNoise>) {
          if (!(s.sigma2 >= 0.0) || !std::isfinite(s.sigma2))
            add("invalid_variance", "compound_symmetry sigma2 must be >= 0");
          if (!(s.rho >= 0.0 && s.rho < 1.0))
            add("invalid_correlation", "compound_symmetry rho must lie in [0, 1)");
        } else {
          if (!(s.target_snr > 0.0) || !std::isfinite(s.target_snr))
            add("invalid_snr", "target_snr must be > 0");
          if (!(s.rho >= 0.0 && s.rho < 1.0))
            add("invalid_correlation", "snr_calibrated rho must lie in [0, 1)");
        }
      },
      config.proxy_noise);

  return out;
}

inline void require_valid(const DgpConfig& config) {
  const auto violations = validate(config);
  if (violations.empty()) return;
  std::string msg;
  for (const auto& v : violations) {
    if (!msg.empty()) msg += "; ";
    msg += v.code + " (" + v.message + ")";
  }
  throw Error(ErrorCode::kValidation, msg);
}

// ---------------------------------------------------------------------------
// Sample checks used before estimation.

inline void check_sample(const ExperimentalSample& exp) {
  if (exp.w.size() != exp.proxies.rows())
    throw Error(ErrorCode::kDimensionMismatch, "experimental w and proxies disagree on rows");
  if (!exp.proxies.allFinite() || !exp.w.allFinite())
    throw Error(ErrorCode::kSchema, "experimental sample has non-finite entries");
  for (Eigen::Index i = 0; i < exp.w.size(); ++i)
    if (exp.w[i] != 0.0 && exp.w[i] != 1.0)
      throw Error(ErrorCode::kSchema, "column 'w' must be 0 or 1 (row " + std::to_string(i) + ")");
}

inline void check_sample(const ObservationalSample& obs) {
  if (obs.y.size() != obs.proxies.rows())
    throw Error(ErrorCode::kDimensionMismatch, "observational y and proxies disagree on rows");
  if (!obs.proxies.allFinite() || !obs.y.allFinite())
    throw Error(ErrorCode::kSchema, "observational sample has non-finite entries");
}

}  // namespace surrogate_index
