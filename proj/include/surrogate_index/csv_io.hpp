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

// Sample files:
//   experimental.csv   header w,p_1,...,p_k
//   observational.csv  header p_1,...,p_k,y
// Numbers are written with 17 significant digits so a round trip is exact.

#pragma once

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "surrogate_index/core_model.hpp"

namespace surrogate_index {

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& field, const std::string& file,
                           const std::string& column, std::size_t row) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t')) ++end;
  if (field.empty() || end == begin || *end != '\0' || errno == ERANGE)
    throw Error(ErrorCode::kSchema, file + ": column '" + column + "' row " +
                                        std::to_string(row) + " is not a number");
  if (!std::isfinite(v))
    throw Error(ErrorCode::kSchema, file + ": column '" + column + "' row " +
                                        std::to_string(row) + " is not finite");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline Table read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchema, "cannot open '" + path + "'");
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchema, path + ": empty file");
  t.header = split_csv_line(line);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != t.header.size())
      throw Error(ErrorCode::kSchema, path + ": row " + std::to_string(row) + " has " +
                                          std::to_string(fields.size()) + " fields, header has " +
                                          std::to_string(t.header.size()));
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c)
      values[c] = parse_number(fields[c], path, t.header[c], row);
    t.rows.push_back(std::move(values));
  }
  return t;
}

inline void expect_column(const std::string& file, const std::vector<std::string>& header,
                          std::size_t index, const std::string& expected) {
  if (index >= header.size() || header[index] != expected)
    throw Error(ErrorCode::kSchema,
                file + ": expected column '" + expected + "' at position " +
                    std::to_string(index + 1) + ", found '" +
                    (index < header.size() ? header[index] : std::string("<none>")) + "'");
}

inline std::string proxy_name(Eigen::Index j) { return "p_" + std::to_string(j + 1); }

}  // namespace detail

struct IngestReport {
  Eigen::Index exp_rows = 0;
  Eigen::Index obs_rows = 0;
  Eigen::Index k = 0;
};

inline ExperimentalSample read_experimental_csv(const std::string& path) {
  const auto t = detail::read_numeric_csv(path);
  if (t.header.size() < 2)
    throw Error(ErrorCode::kSchema, path + ": expected header w,p_1..p_k");
  detail::expect_column(path, t.header, 0, "w");
  const auto k = static_cast<Eigen::Index>(t.header.size() - 1);
  for (Eigen::Index j = 0; j < k; ++j)
    detail::expect_column(path, t.header, static_cast<std::size_t>(j + 1), detail::proxy_name(j));
  ExperimentalSample s;
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  s.w.resize(n);
  s.proxies.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = t.rows[static_cast<std::size_t>(i)];
    s.w[i] = r[0];
    for (Eigen::Index j = 0; j < k; ++j) s.proxies(i, j) = r[static_cast<std::size_t>(j + 1)];
  }
  check_sample(s);
  return s;
}

inline ObservationalSample read_observational_csv(const std::string& path) {
  const auto t = detail::read_numeric_csv(path);
  if (t.header.size() < 2)
    throw Error(ErrorCode::kSchema, path + ": expected header p_1..p_k,y");
  const auto k = static_cast<Eigen::Index>(t.header.size() - 1);
  for (Eigen::Index j = 0; j < k; ++j)
    detail::expect_column(path, t.header, static_cast<std::size_t>(j), detail::proxy_name(j));
  detail::expect_column(path, t.header, static_cast<std::size_t>(k), "y");
  ObservationalSample s;
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  s.proxies.resize(n, k);
  s.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = t.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < k; ++j) s.proxies(i, j) = r[static_cast<std::size_t>(j)];
    s.y[i] = r[static_cast<std::size_t>(k)];
  }
  check_sample(s);
  return s;
}

// Reads and cross-checks both sample files.
inline std::pair<ExperimentalSample, ObservationalSample> ingest_samples(
    const std::string& exp_path, const std::string& obs_path, IngestReport* report = nullptr) {
  auto exp = read_experimental_csv(exp_path);
  auto obs = read_observational_csv(obs_path);
  if (exp.proxies.cols() != obs.proxies.cols())
    throw Error(ErrorCode::kDimensionMismatch,
                "experimental file has k = " + std::to_string(exp.proxies.cols()) +
                    " proxies, observational file has k = " + std::to_string(obs.proxies.cols()));
  if (report) {
    report->exp_rows = exp.proxies.rows();
    report->obs_rows = obs.proxies.rows();
    report->k = exp.proxies.cols();
  }
  return {std::move(exp), std::move(obs)};
}

inline void write_experimental_csv(const std::string& path, const ExperimentalSample& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kSchema, "cannot write '" + path + "'");
  out << "w";
  for (Eigen::Index j = 0; j < s.proxies.cols(); ++j) out << ',' << detail::proxy_name(j);
  out << '\n';
  for (Eigen::Index i = 0; i < s.proxies.rows(); ++i) {
    out << (s.w[i] == 1.0 ? "1" : "0");
    for (Eigen::Index j = 0; j < s.proxies.cols(); ++j) out << ',' << format_double(s.proxies(i, j));
    out << '\n';
  }
}

inline void write_observational_csv(const std::string& path, const ObservationalSample& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kSchema, "cannot write '" + path + "'");
  for (Eigen::Index j = 0; j < s.proxies.cols(); ++j) out << detail::proxy_name(j) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < s.proxies.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.proxies.cols(); ++j) out << format_double(s.proxies(i, j)) << ',';
    out << format_double(s.y[i]) << '\n';
  }
}

}  // namespace surrogate_index
