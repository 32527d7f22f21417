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

#ifndef POISONSEP_DATA_HPP_
#define POISONSEP_DATA_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "poisonsep/lasso.hpp"

namespace poisonsep {

// The sampling distribution D: X entries N(0, (sigma_x·scale_j)²),
// W ~ N(0, sigma_w²)ⁿ, Y = Xθ* + W.
//
// Two presets cover the Gaussian conventions in use:
//   design_noise_quarter: X ~ N(0, σ²), noise variance 1/4
//   quarter_design:       X ~ N(0, 1/4), noise N(0, σ²)
struct GaussianDistribution {
  std::size_t n = 100;
  std::size_t d = 10;
  double sigma_x = 1.0;
  double sigma_w = 1.0;
  Eigen::VectorXd theta_star;        // length d; empty means all zeros
  std::vector<double> column_scale;  // optional per-column std multiplier

  void validate() const;
  FeatureSet true_support() const;
  std::size_t sparsity() const { return true_support().size(); }
};

// A distribution plus the seed that fixes one draw from it. Adversaries that
// must stay oblivious are handed only the GaussianDistribution base.
struct GaussianSpec : GaussianDistribution {
  std::uint64_t seed = 0;
};

// θ* with `s` coordinates chosen uniformly (seeded) set to `value`.
Eigen::VectorXd make_theta_star(std::size_t d, std::size_t s, double value,
                                std::uint64_t seed);
// θ* with the first `s` coordinates set to `value`.
Eigen::VectorXd leading_theta_star(std::size_t d, std::size_t s, double value);

GaussianSpec design_noise_quarter(std::size_t n, std::size_t d, double sigma,
                                  Eigen::VectorXd theta_star, std::uint64_t seed);
GaussianSpec quarter_design(std::size_t n, std::size_t d, double sigma,
                            Eigen::VectorXd theta_star, std::uint64_t seed);

// Design and noise come from independent streams of spec.seed.
RegressionDataset sample_dataset(const GaussianSpec& spec);

// CSV: header x1,...,xd,y then numeric rows. Throws ParseError.
RegressionDataset load_csv(const std::string& path);
RegressionDataset parse_csv(std::istream& in);
void write_csv(std::ostream& out, const RegressionDataset& data);
void write_csv(const std::string& path, const RegressionDataset& data);

struct Standardization {
  RegressionDataset data;            // kept columns only
  std::vector<std::size_t> kept;     // original ids of kept columns
  std::vector<std::size_t> dropped;  // constant columns
  std::vector<double> mean;          // per kept column
  std::vector<double> stddev;        // population std (divisor n)
  double y_mean = 0.0;               // subtracted from y iff center_y
};

Standardization standardize(const RegressionDataset& data, bool center_y = false);

struct VisibleSplit {
  RegressionDataset visible;
  std::vector<std::size_t> visible_rows;  // ascending
  std::vector<std::size_t> hidden_rows;   // ascending
};

// Uniformly random ⌈p·n⌉ rows without replacement.
VisibleSplit split_visible(const RegressionDataset& data, double p, std::uint64_t seed);

// ⌈p·n⌉ with a guard against p·n landing one ulp above an integer.
std::size_t visible_count(double p, std::size_t n);

}  // namespace poisonsep

#endif  // POISONSEP_DATA_HPP_
