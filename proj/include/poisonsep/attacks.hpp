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


// Feature selection for the canonical injection, at three knowledge levels.
// The oblivious selectors take only the distribution and a seed.

#ifndef POISONSEP_ATTACKS_HPP_
#define POISONSEP_ATTACKS_HPP_

#include <cstdint>

#include "poisonsep/data.hpp"
#include "poisonsep/lasso.hpp"
#include "poisonsep/parallel.hpp"
#include "poisonsep/typicality.hpp"

namespace poisonsep {

struct FeatureChoice {
  std::size_t feature = 0;
  int sign = 1;

  bool operator==(const FeatureChoice&) const = default;
};

struct AdversaryReport {
  std::size_t chosen_feature = 0;
  std::size_t budget_used = 0;
  double knowledge_fraction = 0.0;  // 0 oblivious, 1 data-aware
  bool won = false;
};

// argmax over non-support i of |α_i|, smallest index on ties, b = sign(α_i)
// with sign(0) = +1. Throws NoTargetError if every feature is selected.
FeatureChoice aware_select(const RegressionDataset& data, const LassoConfig& cfg);
FeatureChoice aware_select(const RegressionDataset& data, const SparseModel& clean_fit);

// aware_select on the visible rows with λ = rule(visible n, d). Falls back to
// the uniform oblivious choice when nothing is visible or every feature of
// the visible fit is selected.
FeatureChoice partial_select(const RegressionDataset& visible, std::size_t d,
                             const LambdaRule& rule, double p, std::uint64_t seed,
                             const LassoConfig& base = {});

// Uniform over the features outside `known_relevant` (over all of [0, d) when
// it is empty or covers everything); sign +1.
FeatureChoice oblivious_select_uniform(std::size_t d, const FeatureSet& known_relevant,
                                       std::uint64_t seed);

// Samples `probes` datasets from `dist`, runs aware_select on each and
// returns the modal feature (smallest index on ties) with its modal sign.
FeatureChoice oblivious_select_vote(const GaussianDistribution& dist, const LambdaRule& rule,
                                    std::size_t probes, std::uint64_t seed,
                                    const LassoConfig& base = {},
                                    Execution exec = default_execution());

}  // namespace poisonsep

#endif  // POISONSEP_ATTACKS_HPP_
