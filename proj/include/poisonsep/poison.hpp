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

#ifndef POISONSEP_POISON_HPP_
#define POISONSEP_POISON_HPP_

#include <optional>
#include <string>

#include "poisonsep/lasso.hpp"

namespace poisonsep {

enum class FeatureNorm { kL1, kL2, kLinf };

// The admission filter F applied to each injected row [x' | y'].
struct NormFilter {
  FeatureNorm feature_norm = FeatureNorm::kLinf;
  double feature_bound = 1.0;
  double label_bound = 1.0;
  bool entry_box = true;  // every entry, label included, in [−1, 1]

  // ℓ∞ ≤ 1 on features, |y| ≤ 1, entries boxed: the default.
  static NormFilter linf_unit() { return {}; }
  static NormFilter l1_unit() { return {FeatureNorm::kL1, 1.0, 1.0, true}; }
  static NormFilter l2_unit() { return {FeatureNorm::kL2, 1.0, 1.0, false}; }
  // ℓ∞ ≤ 1 on features with labels bounded by s (no entry box on the label).
  static NormFilter label_bound_s(double s) { return {FeatureNorm::kLinf, 1.0, s, false}; }

  bool admits(const Eigen::Ref<const Eigen::RowVectorXd>& features, double label) const;
  std::string describe() const;
};

// k injected rows [X' | Y'] and the filter they claim to satisfy. Compliance
// is checked by first_violation(), never assumed.
struct PoisonSet {
  Eigen::MatrixXd x;  // k × d
  Eigen::VectorXd y;  // k
  NormFilter declared_filter;

  std::size_t k() const { return static_cast<std::size_t>(x.rows()); }

  static PoisonSet empty(std::size_t d, NormFilter filter = NormFilter::linf_unit());

  // Index of the first row rejected by `filter`, or nothing.
  std::optional<std::size_t> first_violation(const NormFilter& filter) const;
  bool complies(const NormFilter& filter) const { return !first_violation(filter); }
  bool complies() const { return complies(declared_filter); }
};

RegressionDataset stack(const RegressionDataset& clean, const PoisonSet& poison);

// k copies of the row [e_i | b].
PoisonSet feature_injection_attack(std::size_t i, std::size_t k, int b, std::size_t d);

}  // namespace poisonsep

#endif  // POISONSEP_POISON_HPP_
