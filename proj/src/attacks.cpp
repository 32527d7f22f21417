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


#include "poisonsep/attacks.hpp"

#include <cmath>
#include <map>
#include <optional>

#include "poisonsep/errors.hpp"
#include "poisonsep/rng.hpp"
#include "poisonsep/stability.hpp"

namespace poisonsep {

FeatureChoice aware_select(const RegressionDataset& data, const SparseModel& clean_fit) {
  const Eigen::VectorXd a = alphas(data, clean_fit);
  std::optional<FeatureChoice> best;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < data.d(); ++i) {
    if (clean_fit.in_support(i)) continue;
    const double v = a[static_cast<Eigen::Index>(i)];
    if (std::abs(v) > best_abs) {
      best_abs = std::abs(v);
      best = FeatureChoice{i, sign_pm(v)};
    }
  }
  if (!best) throw NoTargetError("aware_select: every feature is in the support");
  return *best;
}

FeatureChoice aware_select(const RegressionDataset& data, const LassoConfig& cfg) {
  data.validate();
  return aware_select(data, lasso_fit(data, cfg));
}

FeatureChoice partial_select(const RegressionDataset& visible, std::size_t d,
                             const LambdaRule& rule, double p, std::uint64_t seed,
                             const LassoConfig& base) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("partial_select: p must lie in [0, 1]");
  if (d < 1) throw InputError("partial_select: d must be positive");
  const auto fallback = [&] { return oblivious_select_uniform(d, {}, seed); };
  if (visible.n() == 0 || p == 0.0) return fallback();
  if (visible.d() != d) throw InputError("partial_select: visible data has the wrong width");
  try {
    return aware_select(visible, base.with_lambda(rule(visible.n(), d)));
  } catch (const NoTargetError&) {
    return fallback();
  }
}

FeatureChoice oblivious_select_uniform(std::size_t d, const FeatureSet& known_relevant,
                                       std::uint64_t seed) {
  if (d < 1) throw InputError("oblivious_select_uniform: d must be positive");
  std::vector<char> excluded(d, 0);
  for (std::size_t j : known_relevant) {
    if (j >= d) throw InputError("oblivious_select_uniform: relevant feature out of range");
    excluded[j] = 1;
  }
  FeatureSet pool;
  for (std::size_t j = 0; j < d; ++j) {
    if (!excluded[j]) pool.push_back(j);
  }
  Engine eng = make_engine(seed, Stream::kAdversary);
  if (pool.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, d - 1);
    return {pick(eng), 1};
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return {pool[pick(eng)], 1};
}

FeatureChoice oblivious_select_vote(const GaussianDistribution& dist, const LambdaRule& rule,
                                    std::size_t probes, std::uint64_t seed,
                                    const LassoConfig& base, Execution exec) {
  if (probes < 1) throw InputError("oblivious_select_vote: need at least one probe");
  dist.validate();
  const LassoConfig cfg = base.with_lambda(rule(dist.n, dist.d));
  const auto votes = map_indices<std::optional<FeatureChoice>>(
      probes,
      [&](std::size_t t) -> std::optional<FeatureChoice> {
        GaussianSpec spec;
        static_cast<GaussianDistribution&>(spec) = dist;
        spec.seed = derive_seed(seed, t);
        try {
          return aware_select(sample_dataset(spec), cfg);
        } catch (const NoTargetError&) {
          return std::nullopt;
        }
      },
      exec);

  std::map<std::size_t, std::pair<std::size_t, long>> tally;  // feature -> (count, sign sum)
  for (const auto& v : votes) {
    if (!v) continue;
    auto& t = tally[v->feature];
    ++t.first;
    t.second += v->sign;
  }
  if (tally.empty()) return oblivious_select_uniform(dist.d, {}, seed);
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    if (it->second.first > best->second.first) best = it;
  }
  return {best->first, best->second.second < 0 ? -1 : 1};
}

}  // namespace poisonsep
