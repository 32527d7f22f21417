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

// Preflight diagnostics for support recovery: the four "typical system"
// conditions and the penalty / sample-size rules built on them.
//
// With I = Supp(θ*), O its complement and W = Y − Xθ*:
//   1. column normalization   max_j ‖X_j‖₂ ≤ √n
//   2. incoherence            ‖X_Oᵀ X_I (X_Iᵀ X_I)⁻¹ sign(θ*_I)‖_∞ ≤ 1/4
//   3. restricted convexity   λ_min(X_Iᵀ X_I) ≥ ψ
//   4. bounded noise          ‖X_Oᵀ (I − X_I (X_Iᵀ X_I)⁻¹ X_Iᵀ) W‖_∞ ≤ 2σ√(n log d)

#ifndef POISONSEP_TYPICALITY_HPP_
#define POISONSEP_TYPICALITY_HPP_

#include <optional>
#include <string>

#include "poisonsep/lasso.hpp"

namespace poisonsep {

struct TypicalityReport {
  double col_norm_max = 0.0;
  std::optional<double> incoherence_value;  // empty when X_IᵀX_I is singular
  double min_eigenvalue = 0.0;
  std::optional<double> noise_value;  // empty when X_IᵀX_I is singular

  double col_norm_threshold = 0.0;     // √n
  double incoherence_threshold = 0.25;
  double eigenvalue_threshold = 0.0;   // ψ
  double noise_threshold = 0.0;        // 2σ√(n log d)

  bool column_normalization = false;
  bool incoherence = false;
  bool restricted_convexity = false;
  bool bounded_noise = false;
  bool passed = false;

  // Fixed-order CSV row; header() gives the matching column names.
  static std::string header();
  std::string csv_row() const;
};

TypicalityReport check_typical(const Eigen::VectorXd& theta_star, const RegressionDataset& data,
                               double psi, double sigma);

enum class LambdaRuleKind {
  kD2,         // 4σ√(n log d)
  kD4,         // 4σ√(n log d), Gaussian-design instantiation
  kSynthetic,  // 2σ√(n log d)
  kOblivious,  // 2k + σ√(2(n+k) ln(2/ε))
  kFixed,      // constant
};

// A penalty rule evaluated at a row count; the partial-knowledge adversary
// re-evaluates the defender's rule at its own visible row count.
struct LambdaRule {
  LambdaRuleKind kind = LambdaRuleKind::kD4;
  double sigma = 1.0;
  std::size_t k = 0;    // oblivious rule only
  double eps = 0.05;    // oblivious rule only
  double fixed = 1.0;   // fixed rule only

  double operator()(std::size_t n, std::size_t d) const;
  std::string describe() const;
};

LambdaRule parse_lambda_rule(const std::string& name);

double lambda_rule(LambdaRuleKind kind, std::size_t n, std::size_t d, double sigma,
                   std::size_t k = 0, double eps = 0.05);

// n / (s log d), the margin reported for the n = ω(s log d) requirement.
double sample_ratio(std::size_t n, std::size_t s, std::size_t d);

// max(16σ/(ψα)·√(s log d), 4s⁴k²(1/ψ + 1)² / (log(d) σ²))
double min_sample_rule_D3(double s, double d, double k, double psi, double sigma, double alpha);
// Same first term alone (the non-robust recovery requirement).
double min_sample_rule_D2(double s, double d, double psi, double sigma, double alpha);

// min over i ∈ Supp(θ*) of min(θ*_i, 1 − θ*_i); θ* entries must lie in (0,1).
double theta_margin(const Eigen::VectorXd& theta_star);

}  // namespace poisonsep

#endif  // POISONSEP_TYPICALITY_HPP_
