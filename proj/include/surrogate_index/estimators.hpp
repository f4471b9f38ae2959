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

// Second-stage surrogate index fits Y ~ P.
//
// Every fit centers Y and the proxy columns and reports an intercept, so the
// prediction is intercept + P alpha. The ridge and lasso penalties are on the
// population (mean) scale:
//
//   ridge:  alpha = (Pc'Pc / n + lambda I)^{-1} Pc'yc / n
//   lasso:  argmin (1/2n) |yc - Zc b|^2 + lambda |b|_1   (Zc = standardized Pc)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "surrogate_index/core_model.hpp"
#include "surrogate_index/random.hpp"

namespace surrogate_index {

enum class Method { kRidge, kLasso, kPls, kOls, kOlsScreen };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kRidge: return "ridge";
    case Method::kLasso: return "lasso";
    case Method::kPls: return "pls";
    case Method::kOls: return "ols";
    case Method::kOlsScreen: return "ols_screen";
  }
  return "unknown";
}

struct Hyperparameters {
  std::optional<double> lambda;
  std::optional<int> n_components;
  std::optional<int> top_m;
  bool cv_selected = false;
};

struct IndexFit {
  Method method = Method::kRidge;
  Vector alpha;  // length k; zeros for proxies a method did not use
  Hyperparameters hyper;
  double intercept = 0.0;
  Vector residuals;  // length n_obs
  // Sandwich covariance of alpha. Only ridge, ols and ols_screen carry one.
  std::optional<Matrix> coef_cov;
  // A_lambda = (Pc'Pc / n + lambda I)^{-1} / n, embedded in k x k with zero
  // rows/columns for unselected proxies. Present for ridge, ols, ols_screen.
  std::optional<Matrix> ridge_smoother;
  // Proxies used by ols_screen, in selection order.
  std::vector<int> selected;

  Vector predict(const Matrix& proxies) const {
    return (proxies * alpha).array() + intercept;
  }
};

struct CvSpec {
  int n_folds = 5;
  std::vector<double> lambda_grid = default_lambda_grid();
  // Empty means 1..min(k, 15).
  std::vector<int> component_grid;
  std::uint64_t seed = 0;

  static std::vector<double> default_lambda_grid(int points = 50, double lo = 1e-4,
                                                 double hi = 1e4) {
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < points; ++i)
      grid[static_cast<std::size_t>(i)] =
          points == 1 ? lo : std::pow(10.0, a + (b - a) * i / (points - 1));
    return grid;
  }
};

inline void validate_cv_spec(const CvSpec& spec) {
  if (spec.n_folds < 2) throw Error(ErrorCode::kValidation, "n_folds must be >= 2");
  if (spec.lambda_grid.empty()) throw Error(ErrorCode::kValidation, "lambda_grid is empty");
  if (!std::is_sorted(spec.lambda_grid.begin(), spec.lambda_grid.end()))
    throw Error(ErrorCode::kValidation, "lambda_grid must be sorted ascending");
  for (double l : spec.lambda_grid)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw Error(ErrorCode::kValidation, "lambda_grid entries must be finite and >= 0");
  if (!std::is_sorted(spec.component_grid.begin(), spec.component_grid.end()))
    throw Error(ErrorCode::kValidation, "component_grid must be sorted ascending");
  for (int m : spec.component_grid)
    if (m < 1) throw Error(ErrorCode::kValidation, "component_grid entries must be >= 1");
}

namespace detail {

struct Centered {
  Matrix x;
  Vector y;
  Vector x_mean;
  double y_mean = 0.0;
};

inline Centered center(const Matrix& x, const Vector& y) {
  Centered c;
  c.x_mean = x.colwise().mean().transpose();
  c.y_mean = y.mean();
  c.x = x.rowwise() - c.x_mean.transpose();
  c.y = y.array() - c.y_mean;
  return c;
}

inline void require_obs(const ObservationalSample& obs, Eigen::Index min_rows) {
  check_sample(obs);
  if (obs.proxies.rows() < min_rows)
    throw Error(ErrorCode::kValidation, "observational sample needs at least " +
                                            std::to_string(min_rows) + " rows");
  if (obs.proxies.cols() < 1)
    throw Error(ErrorCode::kValidation, "observational sample has no proxies");
}

// X' diag(e^2) X.
inline Matrix meat(const Matrix& x, const Vector& e) {
  const Matrix weighted = x.array().colwise() * e.array().square();
  return x.transpose() * weighted;
}

// Solves (G + lambda I) a = b on the mean-scaled Gram. At lambda = 0 a
// numerically rank-deficient G is refused rather than pseudo-inverted.
inline Matrix regularized_inverse(const Matrix& gram, double lambda) {
  const auto k = gram.rows();
  Matrix g = gram;
  g.diagonal().array() += lambda;
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(gram);
    qr.setThreshold(1e-10);
    if (qr.rank() < k)
      throw Error(ErrorCode::kSingularDesign, "proxy design is rank deficient at lambda = 0");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kSingularDesign,
                "regularized Gram matrix is not positive definite at lambda = " +
                    std::to_string(lambda));
  return llt.solve(Matrix::Identity(k, k));
}

// Fits ridge (or OLS when lambda = 0) on a subset of proxy columns and embeds
// the result back into k dimensions.
inline IndexFit linear_fit(const ObservationalSample& obs, double lambda,
                           const std::vector<int>& columns, Method method) {
  const auto n = obs.proxies.rows();
  const auto k = obs.proxies.cols();
  const auto m = static_cast<Eigen::Index>(columns.size());
  Matrix sub(n, m);
  for (Eigen::Index j = 0; j < m; ++j) sub.col(j) = obs.proxies.col(columns[j]);
  const Centered c = center(sub, obs.y);
  const double dn = static_cast<double>(n);

  const Matrix inv = regularized_inverse(c.x.transpose() * c.x / dn, lambda);
  const Matrix smoother = inv / dn;
  const Vector a = smoother * (c.x.transpose() * c.y);
  const Vector resid = c.y - c.x * a;
  const Matrix cov = smoother * meat(c.x, resid) * smoother;

  IndexFit fit;
  fit.method = method;
  fit.alpha = Vector::Zero(k);
  Matrix smoother_full = Matrix::Zero(k, k);
  Matrix cov_full = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    fit.alpha[columns[i]] = a[i];
    for (Eigen::Index j = 0; j < m; ++j) {
      smoother_full(columns[i], columns[j]) = smoother(i, j);
      cov_full(columns[i], columns[j]) = cov(i, j);
    }
  }
  fit.intercept = c.y_mean - obs.proxies.colwise().mean().dot(fit.alpha);
  fit.residuals = resid;
  fit.ridge_smoother = std::move(smoother_full);
  fit.coef_cov = std::move(cov_full);
  fit.hyper.lambda = lambda;
  return fit;
}

inline std::vector<int> all_columns(Eigen::Index k) {
  std::vector<int> cols(static_cast<std::size_t>(k));
  std::iota(cols.begin(), cols.end(), 0);
  return cols;
}

// Fold label for every row: a seeded shuffle dealt round-robin.
inline std::vector<int> fold_labels(Eigen::Index n, int n_folds, std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Engine rng(hash_combine({seed, 0xF01D5ULL}));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> label(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i)
    label[static_cast<std::size_t>(order[i])] = static_cast<int>(i % static_cast<std::size_t>(n_folds));
  return label;
}

struct Split {
  Matrix x_train, x_test;
  Vector y_train, y_test;
};

inline Split split_fold(const ObservationalSample& obs, const std::vector<int>& labels,
                        int fold) {
  const auto n = obs.proxies.rows();
  const auto test_n = std::count(labels.begin(), labels.end(), fold);
  Split s;
  s.x_train.resize(n - test_n, obs.proxies.cols());
  s.y_train.resize(n - test_n);
  s.x_test.resize(test_n, obs.proxies.cols());
  s.y_test.resize(test_n);
  Eigen::Index tr = 0, te = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[static_cast<std::size_t>(i)] == fold) {
      s.x_test.row(te) = obs.proxies.row(i);
      s.y_test[te++] = obs.y[i];
    } else {
      s.x_train.row(tr) = obs.proxies.row(i);
      s.y_train[tr++] = obs.y[i];
    }
  }
  return s;
}

// Index of the smallest error; near-ties (relative 1e-12) go to the entry
// preferred by `prefer_later`.
inline std::size_t argmin_with_ties(const std::vector<double>& err, bool prefer_later) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double tol = 1e-12 * std::max(std::abs(err[best]), std::abs(err[i]));
    if (err[i] < err[best] - tol || (prefer_later && std::abs(err[i] - err[best]) <= tol))
      best = i;
  }
  return best;
}

inline void require_cv_rows(const ObservationalSample& obs, int n_folds) {
  if (obs.proxies.rows() < 2 * n_folds)
    throw Error(ErrorCode::kValidation, "cross-validation needs at least 2 rows per fold");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ridge and OLS.

inline IndexFit ridge_fit(const ObservationalSample& obs, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::kValidation, "ridge lambda must be finite and >= 0");
  detail::require_obs(obs, 2);
  return detail::linear_fit(obs, lambda, detail::all_columns(obs.proxies.cols()), Method::kRidge);
}

inline IndexFit ols_fit(const ObservationalSample& obs) {
  detail::require_obs(obs, 2);
  if (obs.proxies.rows() <= obs.proxies.cols())
    throw Error(ErrorCode::kSingularDesign, "OLS needs n_obs > k");
  return detail::linear_fit(obs, 0.0, detail::all_columns(obs.proxies.cols()), Method::kOls);
}

// K-fold CV over spec.lambda_grid; ties go to the larger lambda.
inline IndexFit ridge_cv(const ObservationalSample& obs, const CvSpec& spec) {
  validate_cv_spec(spec);
  detail::require_obs(obs, 2);
  detail::require_cv_rows(obs, spec.n_folds);
  const auto labels = detail::fold_labels(obs.proxies.rows(), spec.n_folds, spec.seed);
  std::vector<double> sse(spec.lambda_grid.size(), 0.0);

  for (int fold = 0; fold < spec.n_folds; ++fold) {
    const auto s = detail::split_fold(obs, labels, fold);
    const auto c = detail::center(s.x_train, s.y_train);
    const double dn = static_cast<double>(s.x_train.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c.x.transpose() * c.x / dn);
    const Vector ev = eig.eigenvalues().cwiseMax(0.0);
    const Vector rotated_xy = eig.eigenvectors().transpose() * (c.x.transpose() * c.y / dn);
    const Matrix test_rot = (s.x_test.rowwise() - c.x_mean.transpose()) * eig.eigenvectors();
    for (std::size_t g = 0; g < spec.lambda_grid.size(); ++g) {
      const double lambda = spec.lambda_grid[g];
      Vector coef_rot(ev.size());
      for (Eigen::Index j = 0; j < ev.size(); ++j) {
        const double d = ev[j] + lambda;
        coef_rot[j] = d > 0.0 ? rotated_xy[j] / d : 0.0;
      }
      const Vector pred = (test_rot * coef_rot).array() + c.y_mean;
      sse[g] += (s.y_test - pred).squaredNorm();
    }
  }

  const std::size_t best = detail::argmin_with_ties(sse, /*prefer_later=*/true);
  IndexFit fit = ridge_fit(obs, spec.lambda_grid[best]);
  fit.hyper.cv_selected = true;
  return fit;
}

// ---------------------------------------------------------------------------
// Lasso by cyclic coordinate descent on standardized proxies.

struct LassoSettings {
  double tolerance = 1e-7;
  std::int64_t max_sweeps = 100000;
};

namespace detail {

struct Standardized {
  Centered centered;
  Vector scale;  // column SD (1/n); zero for constant columns
  Matrix gram;   // Z'Z / n
  Vector xy;     // Z'y / n
};

inline Standardized standardize(const Matrix& x, const Vector& y) {
  Standardized s;
  s.centered = center(x, y);
  const double dn = static_cast<double>(x.rows());
  s.scale = (s.centered.x.colwise().squaredNorm() / dn).cwiseSqrt().transpose();
  Matrix z = s.centered.x;
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    if (s.scale[j] > 0.0)
      z.col(j) /= s.scale[j];
    else
      z.col(j).setZero();
  }
  s.gram = z.transpose() * z / dn;
  s.xy = z.transpose() * s.centered.y / dn;
  return s;
}

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Covariance-form coordinate descent; b is the warm start and the result.
inline void lasso_descent(const Matrix& gram, const Vector& xy, double lambda, Vector& b,
                          const LassoSettings& settings) {
  const auto k = gram.rows();
  Vector grad = xy - gram * b;  // Z'(y - Z b)/n
  for (std::int64_t sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double gjj = gram(j, j);
      if (!(gjj > 0.0)) continue;
      const double old = b[j];
      const double updated = soft_threshold(grad[j] + gjj * old, lambda) / gjj;
      const double delta = updated - old;
      if (delta != 0.0) {
        b[j] = updated;
        grad -= gram.col(j) * delta;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < settings.tolerance) return;
  }
  throw ConvergenceError("lasso coordinate descent did not converge at lambda = " +
                             std::to_string(lambda),
                         settings.max_sweeps);
}

inline IndexFit lasso_from_standardized(const ObservationalSample& obs, const Standardized& s,
                                        const Vector& b, double lambda) {
  IndexFit fit;
  fit.method = Method::kLasso;
  fit.alpha = Vector::Zero(b.size());
  for (Eigen::Index j = 0; j < b.size(); ++j)
    if (s.scale[j] > 0.0) fit.alpha[j] = b[j] / s.scale[j];
  fit.intercept = s.centered.y_mean - s.centered.x_mean.dot(fit.alpha);
  fit.residuals = obs.y - fit.predict(obs.proxies);
  fit.hyper.lambda = lambda;
  return fit;
}

}  // namespace detail

inline IndexFit lasso_fit(const ObservationalSample& obs, double lambda,
                          const LassoSettings& settings = {}) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::kValidation, "lasso lambda must be finite and >= 0");
  detail::require_obs(obs, 2);
  const auto s = detail::standardize(obs.proxies, obs.y);
  Vector b = Vector::Zero(obs.proxies.cols());
  detail::lasso_descent(s.gram, s.xy, lambda, b, settings);
  return detail::lasso_from_standardized(obs, s, b, lambda);
}

// K-fold CV with a warm-started path from the largest lambda down. Ties go to
// the larger lambda.
inline IndexFit lasso_cv(const ObservationalSample& obs, const CvSpec& spec,
                         const LassoSettings& settings = {}) {
  validate_cv_spec(spec);
  detail::require_obs(obs, 2);
  detail::require_cv_rows(obs, spec.n_folds);
  const auto labels = detail::fold_labels(obs.proxies.rows(), spec.n_folds, spec.seed);
  const auto& grid = spec.lambda_grid;
  std::vector<double> sse(grid.size(), 0.0);

  for (int fold = 0; fold < spec.n_folds; ++fold) {
    const auto split = detail::split_fold(obs, labels, fold);
    const auto s = detail::standardize(split.x_train, split.y_train);
    Vector b = Vector::Zero(split.x_train.cols());
    for (std::size_t g = grid.size(); g-- > 0;) {
      detail::lasso_descent(s.gram, s.xy, grid[g], b, settings);
      Vector alpha = Vector::Zero(b.size());
      for (Eigen::Index j = 0; j < b.size(); ++j)
        if (s.scale[j] > 0.0) alpha[j] = b[j] / s.scale[j];
      const Vector pred =
          ((split.x_test.rowwise() - s.centered.x_mean.transpose()) * alpha).array() +
          s.centered.y_mean;
      sse[g] += (split.y_test - pred).squaredNorm();
    }
  }

  const std::size_t best = detail::argmin_with_ties(sse, /*prefer_later=*/true);
  IndexFit fit = lasso_fit(obs, grid[best], settings);
  fit.hyper.cv_selected = true;
  return fit;
}

// ---------------------------------------------------------------------------
// Partial least squares (PLS1, NIPALS with X deflation).

namespace detail {

// Coefficient vectors (on centered data) for 1..m components, m <= max
// components; extraction stops early once X'y vanishes.
inline std::vector<Vector> pls_path(const Matrix& xc, const Vector& yc, int max_components) {
  Matrix e = xc;
  Vector f = yc;
  const auto k = xc.cols();
  Matrix w_all(k, max_components), p_all(k, max_components);
  Vector q_all(max_components);
  std::vector<Vector> coefs;
  double first_norm = 0.0;

  for (int a = 0; a < max_components; ++a) {
    Vector w = e.transpose() * f;
    const double norm = w.norm();
    if (a == 0) first_norm = norm;
    if (!(norm > 1e-12 * first_norm) || !(norm > 0.0)) break;
    w /= norm;
    const Vector t = e * w;
    const double tt = t.squaredNorm();
    if (!(tt > 0.0)) break;
    const Vector p = e.transpose() * t / tt;
    const double q = f.dot(t) / tt;
    e -= t * p.transpose();
    f -= q * t;
    w_all.col(a) = w;
    p_all.col(a) = p;
    q_all[a] = q;

    const int m = a + 1;
    const Matrix pw = p_all.leftCols(m).transpose() * w_all.leftCols(m);
    coefs.push_back(w_all.leftCols(m) * pw.partialPivLu().solve(q_all.head(m)));
  }
  return coefs;
}

inline std::vector<int> resolve_component_grid(const CvSpec& spec, Eigen::Index k,
                                               Eigen::Index n_train) {
  const int cap = static_cast<int>(std::min<Eigen::Index>(k, n_train - 1));
  std::vector<int> grid;
  if (spec.component_grid.empty()) {
    for (int m = 1; m <= std::min(cap, 15); ++m) grid.push_back(m);
  } else {
    for (int m : spec.component_grid)
      if (m <= cap) grid.push_back(m);
  }
  if (grid.empty()) throw Error(ErrorCode::kValidation, "no admissible PLS component count");
  return grid;
}

}  // namespace detail

inline IndexFit pls_fit(const ObservationalSample& obs, int n_components) {
  detail::require_obs(obs, 2);
  const auto n = obs.proxies.rows();
  const auto k = obs.proxies.cols();
  if (n_components < 1 || n_components > std::min<Eigen::Index>(k, n - 1))
    throw Error(ErrorCode::kValidation, "n_components must lie in [1, min(k, n - 1)]");
  const auto c = detail::center(obs.proxies, obs.y);
  const auto path = detail::pls_path(c.x, c.y, n_components);

  IndexFit fit;
  fit.method = Method::kPls;
  fit.alpha = path.empty() ? Vector::Zero(k) : path.back();
  fit.intercept = c.y_mean - c.x_mean.dot(fit.alpha);
  fit.residuals = obs.y - fit.predict(obs.proxies);
  fit.hyper.n_components = static_cast<int>(path.size());
  return fit;
}

// Ties go to fewer components.
inline IndexFit pls_cv(const ObservationalSample& obs, const CvSpec& spec) {
  validate_cv_spec(spec);
  detail::require_obs(obs, 2);
  detail::require_cv_rows(obs, spec.n_folds);
  const auto labels = detail::fold_labels(obs.proxies.rows(), spec.n_folds, spec.seed);
  const auto smallest_train =
      obs.proxies.rows() - (obs.proxies.rows() + spec.n_folds - 1) / spec.n_folds;
  const auto grid = detail::resolve_component_grid(spec, obs.proxies.cols(), smallest_train);
  std::vector<double> sse(grid.size(), 0.0);

  for (int fold = 0; fold < spec.n_folds; ++fold) {
    const auto split = detail::split_fold(obs, labels, fold);
    const auto c = detail::center(split.x_train, split.y_train);
    const auto path = detail::pls_path(c.x, c.y, grid.back());
    const Matrix test_c = split.x_test.rowwise() - c.x_mean.transpose();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      Vector pred = Vector::Constant(split.y_test.size(), c.y_mean);
      if (!path.empty()) {
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(grid[g]), path.size()) - 1;
        pred += test_c * path[idx];
      }
      sse[g] += (split.y_test - pred).squaredNorm();
    }
  }

  const std::size_t best = detail::argmin_with_ties(sse, /*prefer_later=*/false);
  IndexFit fit = pls_fit(obs, grid[best]);
  fit.hyper.cv_selected = true;
  return fit;
}

// ---------------------------------------------------------------------------
// OLS screening: joint OLS pilot, keep the top_m proxies by |alpha_j|
// (ties to the lower index), refit OLS on those.

inline IndexFit ols_screen_fit(const ObservationalSample& obs, int top_m) {
  detail::require_obs(obs, 2);
  const auto k = obs.proxies.cols();
  if (top_m < 1 || top_m > k) throw Error(ErrorCode::kValidation, "top_m must lie in [1, k]");
  if (obs.proxies.rows() <= k)
    throw Error(ErrorCode::kSingularDesign,
                "screening pilot needs n_obs > k (n_obs = " + std::to_string(obs.proxies.rows()) +
                    ", k = " + std::to_string(k) + ")");
  const IndexFit pilot = detail::linear_fit(obs, 0.0, detail::all_columns(k), Method::kOls);

  std::vector<int> order = detail::all_columns(k);
  std::stable_sort(order.begin(), order.end(), [&pilot](int a, int b) {
    return std::abs(pilot.alpha[a]) > std::abs(pilot.alpha[b]);
  });
  order.resize(static_cast<std::size_t>(top_m));
  std::vector<int> columns = order;
  std::sort(columns.begin(), columns.end());

  IndexFit fit = detail::linear_fit(obs, 0.0, columns, Method::kOlsScreen);
  fit.hyper.lambda.reset();
  fit.hyper.top_m = top_m;
  fit.selected = std::move(order);
  return fit;
}

// ---------------------------------------------------------------------------
// Method dispatch used by the pipeline and the experiment harness.

struct MethodSpec {
  Method method = Method::kRidge;
  std::optional<double> lambda;        // ridge/lasso; nullopt selects by CV
  std::optional<int> n_components;     // pls; nullopt selects by CV
  int top_m = 10;                      // ols_screen
};

inline IndexFit fit_index(const ObservationalSample& obs, const MethodSpec& spec,
                          const CvSpec& cv = {}) {
  switch (spec.method) {
    case Method::kRidge: return spec.lambda ? ridge_fit(obs, *spec.lambda) : ridge_cv(obs, cv);
    case Method::kLasso: return spec.lambda ? lasso_fit(obs, *spec.lambda) : lasso_cv(obs, cv);
    case Method::kPls:
      return spec.n_components ? pls_fit(obs, *spec.n_components) : pls_cv(obs, cv);
    case Method::kOls: return ols_fit(obs);
    case Method::kOlsScreen:
      return ols_screen_fit(obs, static_cast<int>(std::min<Eigen::Index>(spec.top_m, obs.proxies.cols())));
  }
  throw Error(ErrorCode::kValidation, "unknown method");
}

}  // namespace surrogate_index
