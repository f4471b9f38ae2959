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

// Synthetic two-sample worlds drawn from the linear latent-surrogate model.

#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "surrogate_index/core_model.hpp"
#include "surrogate_index/random.hpp"

namespace surrogate_index {

// Population quantities a config resolves to.
struct ResolvedModel {
  Matrix loadings;         // k x p
  Matrix surrogate_cov;    // p x p
  Matrix proxy_noise_cov;  // k x k
};

// (W, Y) observed jointly on the experimental units; only the infeasible
// oracle regression uses it.
struct OracleJoint {
  Vector w;
  Vector y;
};

struct SimulatedWorld {
  ExperimentalSample experimental;
  ObservationalSample observational;
  Matrix latent_exp;  // n_exp x p true surrogates
  Matrix latent_obs;  // n_obs x p
  double tau_star = 0.0;
  std::optional<OracleJoint> oracle_joint;
  ResolvedModel model;
};

inline Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Engine& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(rows, cols);
  // Row-major fill: unit i's draws are contiguous in the stream.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) z(i, j) = normal(rng);
  return z;
}

// Returns L = sqrt(c) Q, Q the thin orthonormal factor of a seeded Gaussian
// k x p matrix, so L'L = c I_p.
inline Matrix make_balanced_loadings(int k, int p, double c, std::uint64_t seed) {
  if (p <= 0 || k < p)
    throw Error(ErrorCode::kRankError, "balanced loadings need k >= p >= 1 (k = " +
                                           std::to_string(k) + ", p = " + std::to_string(p) + ")");
  if (!(c > 0.0)) throw Error(ErrorCode::kValidation, "balanced loadings need c > 0");
  Engine rng(seed);
  const Matrix g = standard_normal_matrix(k, p, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(k, p);
  return std::sqrt(c) * q;
}

inline Matrix make_block_loadings(const BlockLoadings& spec, int p, Engine& rng) {
  const int k = spec.per_surrogate * p;
  Matrix l = Matrix::Zero(k, p);
  for (int r = 0; r < k; ++r) l(r, r / spec.per_surrogate) = spec.base;
  if (spec.jitter_sd > 0.0) l += spec.jitter_sd * standard_normal_matrix(k, p, rng);
  return l;
}

inline Matrix resolve_loadings(const LoadingSpec& spec, int k, int p, std::uint64_t master_seed) {
  Engine rng = make_stream(master_seed, Stream::kLoadings);
  return std::visit(
      [&](const auto& s) -> Matrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BalancedLoadings>) {
          return make_balanced_loadings(k, p, s.c, rng());
        } else if constexpr (std::is_same_v<T, BlockLoadings>) {
          if (s.per_surrogate * p != k)
            throw Error(ErrorCode::kDimensionMismatch, "block loadings need k = per_surrogate * p");
          return make_block_loadings(s, p, rng);
        } else {
          if (s.matrix.rows() != k || s.matrix.cols() != p)
            throw Error(ErrorCode::kDimensionMismatch, "explicit loadings must be k x p");
          return s.matrix;
        }
      },
      spec);
}

// sigma_E^2 such that trace(L Sigma_S L') / (k sigma_E^2) = target_snr.
inline double calibrate_snr(const Matrix& loadings, const Matrix& surrogate_cov,
                            double target_snr) {
  if (!(target_snr > 0.0) || !std::isfinite(target_snr))
    throw Error(ErrorCode::kValidation, "target_snr must be > 0");
  const double signal = (loadings * surrogate_cov * loadings.transpose()).trace();
  if (!(signal > 0.0))
    throw Error(ErrorCode::kDegenerateSignal, "trace(L Sigma_S L') is zero");
  return signal / (static_cast<double>(loadings.rows()) * target_snr);
}

inline Matrix resolve_proxy_noise(const ProxyNoiseSpec& spec, const Matrix& loadings,
                                  const Matrix& surrogate_cov) {
  const auto k = static_cast<int>(loadings.rows());
  if (const auto* snr = std::get_if<SnrCalibratedNoise>(&spec)) {
    if (!(snr->rho >= 0.0 && snr->rho < 1.0))
      throw Error(ErrorCode::kValidation, "snr_calibrated rho must lie in [0, 1)");
    return compound_symmetry(k, calibrate_snr(loadings, surrogate_cov, snr->target_snr),
                             snr->rho);
  }
  return resolve_fixed_noise(spec, k);
}

inline ResolvedModel resolve_model(const DgpConfig& config) {
  require_valid(config);
  ResolvedModel m;
  m.surrogate_cov = resolve_covariance(config.surrogate_cov, config.p);
  m.loadings = resolve_loadings(config.loading_spec, config.k, config.p, config.seed);
  m.proxy_noise_cov = resolve_proxy_noise(config.proxy_noise, m.loadings, m.surrogate_cov);
  return m;
}

// Covariance of S among observational units. Randomizing W there adds
// pi (1 - pi) gamma gamma' to Sigma_S; the population theory uses this matrix.
inline Matrix observational_surrogate_cov(const DgpConfig& config, const ResolvedModel& model) {
  Matrix cov = model.surrogate_cov;
  if (config.obs_treated)
    cov += config.treat_prob * (1.0 - config.treat_prob) * config.gamma * config.gamma.transpose();
  return cov;
}

// F with F F' = cov for a PSD covariance. Cholesky when it succeeds, otherwise
// the symmetric square root with negative eigenvalues clipped.
inline Matrix psd_factor(const Matrix& cov) {
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

namespace detail {

struct UnitDraws {
  Vector w;
  Matrix s;
  Matrix proxies;
  Vector y;
};

struct SampleStreams {
  Stream treatment, surrogate, proxy_noise, outcome_noise;
};

inline UnitDraws draw_units(int n, const DgpConfig& config, const ResolvedModel& model,
                            const SampleStreams& streams, bool treated) {
  Engine treat_rng = make_stream(config.seed, streams.treatment);
  Engine surr_rng = make_stream(config.seed, streams.surrogate);
  Engine noise_rng = make_stream(config.seed, streams.proxy_noise);
  Engine outcome_rng = make_stream(config.seed, streams.outcome_noise);

  UnitDraws d;
  d.w = Vector::Zero(n);
  std::bernoulli_distribution coin(config.treat_prob);
  if (treated)
    for (int i = 0; i < n; ++i) d.w[i] = coin(treat_rng) ? 1.0 : 0.0;

  const Matrix surr_factor = psd_factor(model.surrogate_cov);
  const Matrix noise_factor = psd_factor(model.proxy_noise_cov);

  d.s = standard_normal_matrix(n, config.p, surr_rng) * surr_factor.transpose();
  d.s += d.w * config.gamma.transpose();
  d.proxies = d.s * model.loadings.transpose() +
              standard_normal_matrix(n, config.k, noise_rng) * noise_factor.transpose();

  std::normal_distribution<double> eta(0.0, 1.0);
  d.y = d.s * config.beta;
  if (config.sigma_eta > 0.0)
    for (int i = 0; i < n; ++i) d.y[i] += config.sigma_eta * eta(outcome_rng);
  return d;
}

}  // namespace detail

// Deterministic in config (including config.seed).
inline SimulatedWorld simulate(const DgpConfig& config) {
  SimulatedWorld world;
  world.model = resolve_model(config);
  world.tau_star = config.tau_star();

  auto exp = detail::draw_units(config.n_exp, config, world.model,
                                {Stream::kExpTreatment, Stream::kExpSurrogate,
                                 Stream::kExpProxyNoise, Stream::kExpOutcomeNoise},
                                true);
  auto obs = detail::draw_units(config.n_obs, config, world.model,
                                {Stream::kObsTreatment, Stream::kObsSurrogate,
                                 Stream::kObsProxyNoise, Stream::kObsOutcomeNoise},
                                config.obs_treated);

  world.oracle_joint = OracleJoint{exp.w, exp.y};
  world.experimental = ExperimentalSample{std::move(exp.w), std::move(exp.proxies)};
  world.latent_exp = std::move(exp.s);
  world.observational = ObservationalSample{std::move(obs.proxies), std::move(obs.y)};
  world.latent_obs = std::move(obs.s);
  return world;
}

// OLS slope of Y on (1, W) over the joint sample: the difference in arm means.
inline double oracle_effect(const SimulatedWorld& world) {
  if (!world.oracle_joint)
    throw Error(ErrorCode::kOracleUnavailable, "world carries no joint (W, Y) sample");
  const auto& joint = *world.oracle_joint;
  double sum1 = 0.0, sum0 = 0.0;
  Eigen::Index n1 = 0, n0 = 0;
  for (Eigen::Index i = 0; i < joint.w.size(); ++i) {
    if (joint.w[i] == 1.0) {
      sum1 += joint.y[i];
      ++n1;
    } else {
      sum0 += joint.y[i];
      ++n0;
    }
  }
  if (n1 == 0 || n0 == 0)
    throw Error(ErrorCode::kInsufficientArm, "oracle regression needs both arms");
  return sum1 / static_cast<double>(n1) - sum0 / static_cast<double>(n0);
}

}  // namespace surrogate_index
