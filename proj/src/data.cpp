//
// Copyright 2026 The poisonsep Authors
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

#include "poisonsep/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "poisonsep/errors.hpp"
#include "poisonsep/rng.hpp"

namespace poisonsep {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void GaussianDistribution::validate() const {
  if (n < 1 || d < 1) throw InputError("gaussian distribution: n and d must be positive");
  if (!(sigma_x > 0.0)) throw InputError("gaussian distribution: sigma_x must be positive");
  if (!(sigma_w >= 0.0)) throw InputError("gaussian distribution: sigma_w must be nonnegative");
  if (theta_star.size() != 0 && static_cast<std::size_t>(theta_star.size()) != d) {
    throw InputError("gaussian distribution: theta_star has the wrong length");
  }
  if (!column_scale.empty() && column_scale.size() != d) {
    throw InputError("gaussian distribution: column_scale has the wrong length");
  }
  for (double s : column_scale) {
    if (!(s > 0.0)) throw InputError("gaussian distribution: column_scale entries must be positive");
  }
}

FeatureSet GaussianDistribution::true_support() const {
  FeatureSet s;
  for (Eigen::Index i = 0; i < theta_star.size(); ++i) {
    if (theta_star[i] != 0.0) s.push_back(static_cast<std::size_t>(i));
  }
  return s;
}

Eigen::VectorXd make_theta_star(std::size_t d, std::size_t s, double value,
                                std::uint64_t seed) {
  if (s > d) throw InputError("make_theta_star: s exceeds d");
  std::vector<std::size_t> ids(d);
  std::iota(ids.begin(), ids.end(), 0);
  Engine eng = make_engine(seed);
  // Partial Fisher-Yates on the first s slots.
  for (std::size_t k = 0; k < s; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, d - 1);
    std::swap(ids[k], ids[pick(eng)]);
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < s; ++k) theta[static_cast<Eigen::Index>(ids[k])] = value;
  return theta;
}

Eigen::VectorXd leading_theta_star(std::size_t d, std::size_t s, double value) {
  if (s > d) throw InputError("leading_theta_star: s exceeds d");
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  theta.head(static_cast<Eigen::Index>(s)).setConstant(value);
  return theta;
}

GaussianSpec design_noise_quarter(std::size_t n, std::size_t d, double sigma,
                                  Eigen::VectorXd theta_star, std::uint64_t seed) {
  GaussianSpec spec;
  spec.n = n;
  spec.d = d;
  spec.sigma_x = sigma;
  spec.sigma_w = 0.5;
  spec.theta_star = std::move(theta_star);
  spec.seed = seed;
  return spec;
}

GaussianSpec quarter_design(std::size_t n, std::size_t d, double sigma,
                            Eigen::VectorXd theta_star, std::uint64_t seed) {
  GaussianSpec spec;
  spec.n = n;
  spec.d = d;
  spec.sigma_x = 0.5;
  spec.sigma_w = sigma;
  spec.theta_star = std::move(theta_star);
  spec.seed = seed;
  return spec;
}

RegressionDataset sample_dataset(const GaussianSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);
  RegressionDataset data;
  data.x.resize(n, d);
  Engine design = make_engine(spec.seed, Stream::kDesign);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double scale =
        spec.sigma_x * (spec.column_scale.empty() ? 1.0 : spec.column_scale[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < n; ++i) data.x(i, j) = scale * gauss(design);
  }
  Eigen::VectorXd w(n);
  Engine noise = make_engine(spec.seed, Stream::kNoise);
  std::normal_distribution<double> noise_gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = spec.sigma_w * noise_gauss(noise);
  if (spec.theta_star.size() == 0) {
    data.y = w;
  } else {
    data.y = data.x * spec.theta_star + w;
  }
  return data;
}

RegressionDataset parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: empty input", 1, 0);
  const auto header = split_commas(line);
  if (header.size() < 2) throw ParseError("csv: header needs at least x1,y", 1, 0);
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "x" + std::to_string(j + 1)) {
      throw ParseError("csv: header column " + std::to_string(j + 1) + " should be x" +
                           std::to_string(j + 1) + ", got '" + std::string(header[j]) + "'",
                       1, j + 1);
    }
  }
  if (header[d] != "y") throw ParseError("csv: last header column must be y", 1, d + 1);

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != d + 1) {
      throw ParseError("csv: row " + std::to_string(line_no) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(d + 1),
                       line_no, 0);
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0.0;
      const auto cell = cells[j];
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw ParseError("csv: non-numeric cell '" + std::string(cell) + "' at row " +
                             std::to_string(line_no) + ", column " + std::to_string(j + 1),
                         line_no, j + 1);
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("csv: no data rows", line_no, 0);

  RegressionDataset data;
  data.x.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
  data.y.resize(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * (d + 1) + j];
    }
    data.y[static_cast<Eigen::Index>(i)] = values[i * (d + 1) + d];
  }
  return data;
}

RegressionDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("csv: cannot open " + path, 0, 0);
  return parse_csv(in);
}

void write_csv(std::ostream& out, const RegressionDataset& data) {
  data.validate();
  out << std::setprecision(17);
  for (std::size_t j = 0; j < data.d(); ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) out << data.x(i, j) << ',';
    out << data.y[i] << '\n';
  }
}

void write_csv(const std::string& path, const RegressionDataset& data) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_csv(out, data);
}

Standardization standardize(const RegressionDataset& data, bool center_y) {
  data.validate();
  if (data.n() < 2) throw InputError("standardize: need at least two rows");
  const double n = static_cast<double>(data.n());
  Standardization out;
  std::vector<Eigen::VectorXd> cols;
  for (Eigen::Index j = 0; j < data.x.cols(); ++j) {
    const double mean = data.x.col(j).sum() / n;
    const Eigen::VectorXd centered = data.x.col(j).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / n);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      out.dropped.push_back(static_cast<std::size_t>(j));
      continue;
    }
    out.kept.push_back(static_cast<std::size_t>(j));
    out.mean.push_back(mean);
    out.stddev.push_back(sd);
    cols.push_back(centered / sd);
  }
  if (cols.empty()) throw InputError("standardize: every column is constant");
  out.data.x.resize(data.x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.data.x.col(static_cast<Eigen::Index>(k)) = cols[k];
  out.data.y = data.y;
  if (center_y) {
    out.y_mean = data.y.sum() / n;
    out.data.y.array() -= out.y_mean;
  }
  return out;
}

std::size_t visible_count(double p, std::size_t n) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("visible fraction must lie in [0, 1]");
  const double raw = p * static_cast<double>(n);
  const double rounded = std::round(raw);
  const double count = std::abs(raw - rounded) < 1e-9 ? rounded : std::ceil(raw);
  return std::min(n, static_cast<std::size_t>(count));
}

VisibleSplit split_visible(const RegressionDataset& data, double p, std::uint64_t seed) {
  data.validate();
  const std::size_t m = visible_count(p, data.n());
  std::vector<std::size_t> ids(data.n());
  std::iota(ids.begin(), ids.end(), 0);
  Engine eng = make_engine(seed, Stream::kSplit);
  for (std::size_t k = 0; k < m; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, ids.size() - 1);
    std::swap(ids[k], ids[pick(eng)]);
  }
  VisibleSplit out;
  out.visible_rows.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m));
  out.hidden_rows.assign(ids.begin() + static_cast<std::ptrdiff_t>(m), ids.end());
  std::sort(out.visible_rows.begin(), out.visible_rows.end());
  std::sort(out.hidden_rows.begin(), out.hidden_rows.end());
  out.visible = select_rows(data, out.visible_rows);
  return out;
}

}  // namespace poisonsep
