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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace si = surrogate_index;
using si::testing::error_code_of;

namespace {

si::ReplicationMethod method(si::HarnessMethod kind, std::optional<double> lambda = std::nullopt) {
  si::ReplicationMethod m;
  m.kind = kind;
  m.lambda = lambda;
  return m;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string csv_text(const si::SweepResult& r) {
  std::ostringstream os;
  si::write_sweep_csv(os, r);
  return os.str();
}

// One scalar surrogate measured by per_surrogate unit-loading proxies.
si::DgpConfig single_surrogate_config(int n) {
  si::DgpConfig cfg = si::testing::balanced_config(1, 2, 2.0, 1.0, 1.0, n);
  cfg.loading_spec = si::BlockLoadings{2, 1.0, 0.0};
  cfg.gamma << 0.5;
  return cfg;
}

TEST(Replication, OracleWithDeterministicOutcome) {
  si::DgpConfig cfg = si::testing::balanced_config(2, 4, 2.0, 0.0, 1.0, 400, 0.0);
  cfg.gamma << 0.2, 0.9;
  EXPECT_NEAR(si::run_replication(cfg, method(si::HarnessMethod::kOracle), 5), cfg.tau_star(), 1e-12);
}

TEST(Replication, NoiselessRidgeIdentifies) {
  const si::DgpConfig cfg = si::testing::balanced_config(2, 6, 3.0, 0.25, 0.0, 50000);
  const double v = si::run_replication(cfg, method(si::HarnessMethod::kRidge, 1e-8), 21);
  EXPECT_LT(std::abs(v - cfg.tau_star()) / cfg.tau_star(), 0.01);
}

TEST(Replication, Deterministic) {
  const si::DgpConfig cfg = si::testing::block_design_config(800);
  for (auto kind : {si::HarnessMethod::kOracle, si::HarnessMethod::kRidge, si::HarnessMethod::kLasso,
                    si::HarnessMethod::kPls, si::HarnessMethod::kOlsScreen}) {
    const double a = si::run_replication(cfg, method(kind), 99);
    const double b = si::run_replication(cfg, method(kind), 99);
    EXPECT_EQ(a, b) << si::to_string(kind);
  }
}

TEST(Replication, PropagatesEstimatorErrors) {
  si::DgpConfig cfg = si::testing::block_design_config(20);
  EXPECT_EQ(error_code_of([&] { si::run_replication(cfg, method(si::HarnessMethod::kOlsScreen), 1); }),
            si::ErrorCode::kSingularDesign);
}

// ---------------------------------------------------------------------------

TEST(Sweep, RidgeRmseNonIncreasingInProxyCount) {
  si::SweepSpec spec;
  spec.base = single_surrogate_config(2000);
  spec.points = si::grid_points({1}, {2, 4, 8, 16, 32});
  spec.methods = {method(si::HarnessMethod::kRidge)};
  spec.n_reps = 100;
  spec.master_seed = 3;
  const auto r = si::run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 5u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].k, 2 << i);
    EXPECT_LE(*r.rows[i].rmse, *r.rows[i - 1].rmse + 2.0 * *r.rows[i].mc_se) << r.rows[i].k;
  }
}

TEST(Sweep, OracleOnlyHasUnitRelativeRmse) {
  si::SweepSpec spec;
  spec.base = single_surrogate_config(300);
  spec.points = si::grid_points({1, 2}, {2, 3});
  spec.methods = {method(si::HarnessMethod::kOracle)};
  spec.n_reps = 20;
  const auto r = si::run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.rel_rmse_vs_oracle.has_value());
    EXPECT_EQ(*row.rel_rmse_vs_oracle, 1.0);
    EXPECT_EQ(*row.bias_diff_vs_oracle, 0.0);
  }
}

TEST(Sweep, RelativeColumnsAbsentWithoutOracle) {
  si::SweepSpec spec;
  spec.base = single_surrogate_config(300);
  spec.points = {{1, 3}};
  spec.methods = {method(si::HarnessMethod::kRidge, 0.1)};
  spec.n_reps = 5;
  const auto r = si::run_sweep(spec);
  EXPECT_FALSE(r.rows[0].rel_rmse_vs_oracle.has_value());
  EXPECT_FALSE(r.rows[0].bias_diff_vs_oracle.has_value());
}

TEST(Sweep, InvariantToExecutionOrderAndThreads) {
  si::SweepSpec spec;
  spec.base = si::testing::block_design_config(600);
  spec.points = si::grid_points({2, 3}, {3, 4});
  spec.methods = {method(si::HarnessMethod::kOracle), method(si::HarnessMethod::kRidge),
                  method(si::HarnessMethod::kPls)};
  spec.n_reps = 6;
  spec.master_seed = 77;
  spec.threads = 1;
  const auto serial = si::run_sweep(spec);
  spec.threads = 4;
  const auto threaded = si::run_sweep(spec);
  EXPECT_EQ(csv_text(serial), csv_text(threaded));

  si::SweepSpec reversed = spec;
  std::reverse(reversed.points.begin(), reversed.points.end());
  const auto rev = si::run_sweep(reversed);
  for (const auto& row : serial.rows) {
    const auto it = std::find_if(rev.rows.begin(), rev.rows.end(), [&](const si::SweepRow& o) {
      return o.method == row.method && o.p == row.p && o.k == row.k;
    });
    ASSERT_NE(it, rev.rows.end());
    EXPECT_EQ(*it->mean_estimate, *row.mean_estimate);
    EXPECT_EQ(*it->rmse, *row.rmse);
  }
}

TEST(Sweep, BiasBoundedByRmse) {
  si::SweepSpec spec;
  spec.base = si::testing::block_design_config(500);
  spec.points = si::grid_points({1, 5}, {2, 6});
  spec.methods = {method(si::HarnessMethod::kOracle), method(si::HarnessMethod::kOlsScreen),
                  method(si::HarnessMethod::kLasso), method(si::HarnessMethod::kRidge),
                  method(si::HarnessMethod::kPls)};
  spec.n_reps = 8;
  for (const auto& row : si::run_sweep(spec).rows) {
    ASSERT_EQ(row.status, "ok") << row.error;
    EXPECT_LE(std::abs(*row.bias), *row.rmse + 1e-12);
    EXPECT_GE(*row.rmse * *row.rmse, *row.bias * *row.bias - 1e-12);
  }
}

TEST(Sweep, BalancedRidgeMatchesClosedForm) {
  si::SweepSpec spec;
  spec.base = si::testing::balanced_config(2, 6, 3.0, 1.0, 1.0, 2000);
  spec.points = si::grid_points({2}, {2, 3, 5});
  spec.methods = {method(si::HarnessMethod::kRidge, 0.5)};
  spec.n_reps = 150;
  spec.master_seed = 8;
  for (const auto& row : si::run_sweep(spec).rows) {
    si::TheoryParams t;
    t.c = row.k / row.p;
    t.lambda = 0.5;
    t.gamma = si::Vector::Ones(2);
    t.beta = si::Vector::Ones(2);
    const double expected = row.tau_star + si::bias_balanced(t);
    EXPECT_LT(std::abs(*row.mean_estimate - expected), 3.0 * *row.mc_se) << row.k;
  }
}

TEST(Sweep, FailedCellsAreReportedNotDropped) {
  si::SweepSpec spec;
  spec.base = si::testing::block_design_config(25);
  spec.points = {{5, 6}, {1, 6}};
  spec.methods = {method(si::HarnessMethod::kOracle), method(si::HarnessMethod::kOlsScreen)};
  spec.n_reps = 3;
  const auto r = si::run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_EQ(r.rows[0].status, "ok");
  EXPECT_EQ(r.rows[1].status, "failed");
  EXPECT_EQ(r.rows[1].n_failed, 3);
  EXPECT_EQ(r.rows[1].rep_count, 0);
  EXPECT_NE(r.rows[1].error.find("SingularDesign"), std::string::npos);
  EXPECT_FALSE(r.rows[1].rmse.has_value());
  EXPECT_EQ(r.rows[3].status, "ok");
}

TEST(Sweep, SpecValidation) {
  si::SweepSpec spec;
  spec.base = single_surrogate_config(100);
  spec.points = {{1, 2}};
  EXPECT_EQ(error_code_of([&] { si::run_sweep(spec); }), si::ErrorCode::kValidation);
  spec.methods = {method(si::HarnessMethod::kOracle)};
  spec.points.clear();
  EXPECT_EQ(error_code_of([&] { si::run_sweep(spec); }), si::ErrorCode::kValidation);
}

TEST(Sweep, PointConfigTracksDesign) {
  si::SweepSpec spec;
  spec.base = si::testing::block_design_config();
  const si::DgpConfig c = si::point_config(spec, {3, 4});
  EXPECT_EQ(c.p, 3);
  EXPECT_EQ(c.k, 12);
  EXPECT_EQ(std::get<si::BlockLoadings>(c.loading_spec).per_surrogate, 4);
  EXPECT_DOUBLE_EQ(c.beta[2], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(c.gamma[1], 0.5);
  EXPECT_TRUE(si::validate(c).empty());
}

TEST(SweepJson, ParsesAllVaryForms) {
  const si::Json base = si::to_json(si::testing::block_design_config());
  si::Json j = {{"base", base},
                {"vary", {{"proxies_per_surrogate", {2, 4}}}},
                {"methods", {"oracle", "ols_screen", {{"method", "ridge"}, {"lambda", 0.5}, {"label", "ridge_fixed"}}}},
                {"n_reps", 12},
                {"master_seed", 4},
                {"cv", {{"n_folds", 3}}}};
  si::SweepSpec s = si::sweep_from_json(j);
  EXPECT_EQ(s.points.size(), 2u);
  EXPECT_EQ(s.points[1].per_surrogate, 4);
  EXPECT_EQ(s.points[1].p, 5);
  ASSERT_EQ(s.methods.size(), 3u);
  EXPECT_EQ(s.methods[2].display(), "ridge_fixed");
  EXPECT_EQ(*s.methods[2].lambda, 0.5);
  EXPECT_EQ(s.n_reps, 12);
  EXPECT_EQ(s.cv.n_folds, 3);

  j["vary"] = {{"n_surrogates", {1, 2, 5}}};
  s = si::sweep_from_json(j);
  EXPECT_EQ(s.points.size(), 3u);
  EXPECT_EQ(s.points[0].per_surrogate, 6);

  j["vary"] = {{"grid", {{"p", {1, 5}}, {"per_surrogate", {2, 6, 10}}}}};
  EXPECT_EQ(si::sweep_from_json(j).points.size(), 6u);

  j["vary"] = {{"sideways", {1}}};
  EXPECT_EQ(error_code_of([&] { si::sweep_from_json(j); }), si::ErrorCode::kSchema);
  j["vary"] = {{"n_surrogates", {1}}};
  j["methods"] = {"ridge", "boosting"};
  EXPECT_EQ(error_code_of([&] { si::sweep_from_json(j); }), si::ErrorCode::kSchema);
}

// ---------------------------------------------------------------------------

TEST(SweepCsv, RoundTripPreservesValues) {
  si::SweepResult r;
  for (int i = 0; i < 3; ++i) {
    si::SweepRow row;
    row.method = i == 0 ? "oracle" : "ridge";
    row.p = 5;
    row.k = 10 * (i + 1);
    row.rep_count = 200 - i;
    row.n_failed = i;
    row.tau_star = 1.0 / 3.0 + i;
    row.mean_estimate = std::exp(-1.0 * i) / 7.0;
    row.bias = -0.1234567890123456789 * (i + 1);
    row.rmse = std::sqrt(2.0) * (i + 1);
    row.mc_se = 1e-17 * (i + 1);
    if (i > 0) row.rel_rmse_vs_oracle = std::acos(-1.0) / i;
    if (i > 0) row.bias_diff_vs_oracle = -std::exp(1.0) * i;
    row.status = i == 2 ? "partial" : "ok";
    row.error = i == 2 ? "SingularDesign: n_obs <= k" : "";
    r.rows.push_back(row);
  }
  const auto path = temp_dir("si_sweep_csv") / "results.csv";
  si::export_csv(r, path.string());
  const si::SweepResult back = si::read_sweep_csv(path.string());
  ASSERT_EQ(back.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto &a = r.rows[i], &b = back.rows[i];
    EXPECT_EQ(a.method, b.method);
    EXPECT_EQ(a.k, b.k);
    EXPECT_EQ(a.rep_count, b.rep_count);
    EXPECT_EQ(a.n_failed, b.n_failed);
    EXPECT_EQ(a.tau_star, b.tau_star);
    EXPECT_EQ(a.mean_estimate, b.mean_estimate);
    EXPECT_EQ(a.bias, b.bias);
    EXPECT_EQ(a.rmse, b.rmse);
    EXPECT_EQ(a.mc_se, b.mc_se);
    EXPECT_EQ(a.rel_rmse_vs_oracle, b.rel_rmse_vs_oracle);
    EXPECT_EQ(a.bias_diff_vs_oracle, b.bias_diff_vs_oracle);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.error, b.error);
  }
}

TEST(Ingest, SimulatedFilesReEstimateIdentically) {
  si::DgpConfig cfg = si::testing::block_design_config(700);
  cfg.seed = 123;
  const auto w = si::simulate(cfg);
  const auto dir = temp_dir("si_ingest");
  si::write_experimental_csv((dir / "experimental.csv").string(), w.experimental);
  si::write_observational_csv((dir / "observational.csv").string(), w.observational);
  si::IngestReport report;
  const auto [exp, obs] = si::ingest_samples((dir / "experimental.csv").string(),
                                             (dir / "observational.csv").string(), &report);
  EXPECT_EQ(report.exp_rows, 700);
  EXPECT_EQ(report.obs_rows, 700);
  EXPECT_EQ(report.k, 30);
  EXPECT_EQ(exp.proxies, w.experimental.proxies);
  EXPECT_EQ(obs.y, w.observational.y);
  si::MethodSpec spec;
  const auto a = si::estimate_long_term(w.experimental, w.observational, spec);
  const auto b = si::estimate_long_term(exp, obs, spec);
  EXPECT_EQ(a.estimate.tau_hat, b.estimate.tau_hat);
  EXPECT_EQ(*a.estimate.se, *b.estimate.se);
}

TEST(Ingest, ProxyCountMismatch) {
  const auto w = si::simulate(si::testing::block_design_config(50));
  const auto dir = temp_dir("si_ingest_mismatch");
  si::write_experimental_csv((dir / "experimental.csv").string(), w.experimental);
  si::ObservationalSample obs{w.observational.proxies.leftCols(29), w.observational.y};
  si::write_observational_csv((dir / "observational.csv").string(), obs);
  EXPECT_EQ(error_code_of([&] {
              si::ingest_samples((dir / "experimental.csv").string(),
                                 (dir / "observational.csv").string());
            }),
            si::ErrorCode::kDimensionMismatch);
}

TEST(Ingest, SchemaErrorsNameTheColumn) {
  const auto dir = temp_dir("si_ingest_schema");
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  auto message_of = [](const std::function<void()>& fn) -> std::string {
    try {
      fn();
    } catch (const si::Error& e) {
      EXPECT_EQ(e.code(), si::ErrorCode::kSchema);
      return e.what();
    }
    return "";
  };
  const auto bad_header = write("a.csv", "w,p_1,q_2\n1,0.5,0.2\n");
  EXPECT_NE(message_of([&] { si::read_experimental_csv(bad_header); }).find("p_2"), std::string::npos);
  const auto nan_value = write("b.csv", "p_1,p_2,y\n0.1,nan,3\n");
  EXPECT_NE(message_of([&] { si::read_observational_csv(nan_value); }).find("'p_2'"), std::string::npos);
  const auto text_value = write("c.csv", "p_1,y\n0.1,abc\n");
  EXPECT_NE(message_of([&] { si::read_observational_csv(text_value); }).find("'y'"), std::string::npos);
  const auto bad_w = write("d.csv", "w,p_1\n2,0.1\n");
  EXPECT_NE(message_of([&] { si::read_experimental_csv(bad_w); }).find("'w'"), std::string::npos);
  const auto ragged = write("e.csv", "p_1,y\n0.1\n");
  EXPECT_FALSE(message_of([&] { si::read_observational_csv(ragged); }).empty());
}

}  // namespace
