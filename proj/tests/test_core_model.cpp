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


#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "test_support.hpp"

namespace si = surrogate_index;
using si::testing::error_code_of;

namespace {

bool has_code(const std::vector<si::Violation>& v, const std::string& code) {
  return std::any_of(v.begin(), v.end(), [&](const si::Violation& x) { return x.code == code; });
}

TEST(Validate, BlockDesignIsValid) {
  const si::DgpConfig cfg = si::testing::block_design_config();
  EXPECT_TRUE(si::validate(cfg).empty());
}

TEST(Validate, BetaLengthMismatch) {
  si::DgpConfig cfg = si::testing::block_design_config();
  cfg.beta = si::Vector::Ones(4);
  const auto v = si::validate(cfg);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, "dimension_mismatch");
}

TEST(Validate, ToeplitzIsValidAndCornerEntry) {
  si::DgpConfig cfg;
  cfg.p = 3;
  cfg.k = 3;
  cfg.gamma = si::Vector::Ones(3);
  cfg.beta = si::Vector::Ones(3);
  cfg.surrogate_cov = si::Toeplitz{0.5, 1.0};
  EXPECT_TRUE(si::validate(cfg).empty());
  const si::Matrix s = si::resolve_covariance(cfg.surrogate_cov, 3);
  EXPECT_DOUBLE_EQ(s(0, 2), 0.25);
}

TEST(Validate, CollectsEveryViolationWithoutThrowing) {
  si::DgpConfig cfg;
  cfg.n_obs = 0;
  cfg.p = 2;
  cfg.k = 1;
  cfg.gamma = si::Vector::Ones(3);
  cfg.beta = si::Vector::Ones(2);
  cfg.sigma_eta = -1.0;
  cfg.treat_prob = 1.0;
  cfg.surrogate_cov = si::ExplicitCovariance{si::Matrix::Identity(3, 3)};
  cfg.proxy_noise = si::CompoundSymmetryNoise{1.0, 1.5};
  std::vector<si::Violation> v;
  ASSERT_NO_THROW(v = si::validate(cfg));
  for (const char* code : {"nonpositive_size", "dimension_mismatch", "invalid_variance",
                           "invalid_probability", "rank_error", "invalid_correlation"})
    EXPECT_TRUE(has_code(v, code)) << code;
  EXPECT_EQ(error_code_of([&] { si::require_valid(cfg); }), si::ErrorCode::kValidation);
}

TEST(Validate, NonPositiveDefiniteSurrogateCov) {
  si::DgpConfig cfg;
  cfg.p = 2;
  cfg.k = 2;
  cfg.gamma = si::Vector::Ones(2);
  cfg.beta = si::Vector::Ones(2);
  si::Matrix m(2, 2);
  m << 1, 2, 2, 1;
  cfg.surrogate_cov = si::ExplicitCovariance{m};
  EXPECT_TRUE(has_code(si::validate(cfg), "not_positive_definite"));
}

TEST(ResolveCovariance, IdentityScaled) {
  EXPECT_TRUE(si::resolve_covariance(si::IdentityScaled{1.0}, 2).isApprox(si::Matrix::Identity(2, 2)));
}

TEST(ResolveCovariance, Toeplitz) {
  si::Matrix expected(2, 2);
  expected << 2, 1, 1, 2;
  EXPECT_TRUE(si::resolve_covariance(si::Toeplitz{0.5, 2.0}, 2).isApprox(expected));
}

TEST(ResolveCovariance, ExplicitIndefiniteThrows) {
  si::Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_EQ(error_code_of([&] { si::resolve_covariance(si::ExplicitCovariance{m}, 2); }),
            si::ErrorCode::kNotPositiveDefinite);
}

TEST(ResolveCovariance, ExplicitAsymmetricThrows) {
  si::Matrix m(2, 2);
  m << 1, 0.1, 0, 1;
  EXPECT_EQ(error_code_of([&] { si::resolve_covariance(si::ExplicitCovariance{m}, 2); }),
            si::ErrorCode::kNotPositiveDefinite);
}

TEST(ResolveCovariance, ExplicitWrongDimension) {
  EXPECT_EQ(error_code_of([&] {
              si::resolve_covariance(si::ExplicitCovariance{si::Matrix::Identity(3, 3)}, 2);
            }),
            si::ErrorCode::kDimensionMismatch);
}

TEST(ResolveCovariance, ToeplitzEigenvaluesPositive) {
  for (double rho : {0.0, 0.3, 0.6, 0.9, 0.99})
    for (int dim : {1, 2, 5, 20}) {
      const si::Matrix s = si::resolve_covariance(si::Toeplitz{rho, 1.5}, dim);
      EXPECT_GT(si::min_eigenvalue(s), 0.0) << rho << " " << dim;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) EXPECT_NEAR(s(i, j), 1.5 * std::pow(rho, std::abs(i - j)), 1e-15);
    }
}

TEST(ProxyNoise, CompoundSymmetryEntriesAndPsd) {
  for (double rho : {0.0, 0.2, 0.7, 0.95}) {
    const si::Matrix e = si::resolve_fixed_noise(si::CompoundSymmetryNoise{2.0, rho}, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(e(i, j), i == j ? 2.0 : 2.0 * rho);
    EXPECT_GE(si::min_eigenvalue(e), -1e-12);
  }
  EXPECT_GE(si::min_eigenvalue(si::resolve_fixed_noise(si::IsoNoise{0.0}, 4)), 0.0);
}

TEST(ProxyNoise, SnrNeedsLoadings) {
  EXPECT_EQ(error_code_of([] { si::resolve_fixed_noise(si::SnrCalibratedNoise{1.0, 0.0}, 3); }),
            si::ErrorCode::kValidation);
}

TEST(SampleChecks, RejectsNonBinaryTreatmentAndNonFinite) {
  si::ExperimentalSample exp{si::Vector::Zero(3), si::Matrix::Zero(3, 2)};
  exp.w[1] = 0.5;
  EXPECT_EQ(error_code_of([&] { si::check_sample(exp); }), si::ErrorCode::kSchema);
  si::ObservationalSample obs{si::Matrix::Zero(3, 2), si::Vector::Zero(3)};
  obs.y[2] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_code_of([&] { si::check_sample(obs); }), si::ErrorCode::kSchema);
  obs.y = si::Vector::Zero(2);
  EXPECT_EQ(error_code_of([&] { si::check_sample(obs); }), si::ErrorCode::kDimensionMismatch);
}

TEST(ConfigIo, RoundTripThroughFileIsIdentity) {
  std::vector<si::DgpConfig> configs = {si::testing::block_design_config(),
                                        si::testing::balanced_config(2, 6, 3.0, 1.0, 1.0, 5000)};
  si::DgpConfig explicit_cfg;
  explicit_cfg.p = 2;
  explicit_cfg.k = 3;
  explicit_cfg.gamma = si::Vector::LinSpaced(2, 0.1, 0.3);
  explicit_cfg.beta = si::Vector::LinSpaced(2, -1.0 / 3.0, 2.0 / 7.0);
  si::Matrix l(3, 2);
  l << 1, 0.1, 0.3, 1, 1.0 / 3.0, 0.5;
  explicit_cfg.loading_spec = si::ExplicitLoadings{l};
  si::Matrix s(2, 2);
  s << 1.1, 0.2, 0.2, 0.9;
  explicit_cfg.surrogate_cov = si::ExplicitCovariance{s};
  explicit_cfg.proxy_noise = si::CompoundSymmetryNoise{0.7, 0.1};
  explicit_cfg.seed = 18446744073709551615ull;
  explicit_cfg.treat_prob = 0.3;
  configs.push_back(explicit_cfg);

  const auto path = std::filesystem::temp_directory_path() / "si_config_roundtrip.json";
  for (const auto& cfg : configs) {
    si::write_config(path.string(), cfg);
    const si::DgpConfig back = si::read_config(path.string());
    EXPECT_EQ(si::to_json(back).dump(), si::to_json(cfg).dump());
    EXPECT_EQ(back.seed, cfg.seed);
    EXPECT_EQ(back.gamma, cfg.gamma);
    EXPECT_EQ(back.beta, cfg.beta);
  }
  std::filesystem::remove(path);
}

TEST(ConfigIo, UnknownKeyAndMissingFieldsAreSchemaErrors) {
  si::Json j = si::to_json(si::testing::block_design_config());
  j["surprise"] = 1;
  EXPECT_EQ(error_code_of([&] { si::config_from_json(j); }), si::ErrorCode::kSchema);
  si::Json k = si::to_json(si::testing::block_design_config());
  k.erase("beta");
  EXPECT_EQ(error_code_of([&] { si::config_from_json(k); }), si::ErrorCode::kSchema);
  si::Json v = si::to_json(si::testing::block_design_config());
  v["surrogate_cov"]["variant"] = "wishart";
  EXPECT_EQ(error_code_of([&] { si::config_from_json(v); }), si::ErrorCode::kSchema);
}

}  // namespace
