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

// Per-feature stability of a LASSO fit.
//
// α_i = X[:,i]ᵀ(Y − Xθ̂) is the correlation of column i with the clean
// residual. For a feature outside the support |α_i| ≤ λ, and λ − |α_i| rows of
// the canonical injection [e_i | sign(α_i)] are enough to push it over the
// activation threshold. β_i is the same quantity measured against a fit that
// is restricted to the clean support but trained on clean + poison rows.

#ifndef POISONSEP_STABILITY_HPP_
#define POISONSEP_STABILITY_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "poisonsep/data.hpp"
#include "poisonsep/lasso.hpp"
#include "poisonsep/parallel.hpp"
#include "poisonsep/poison.hpp"

namespace poisonsep {

struct FeatureStat {
  std::size_t index = 0;
  double alpha = 0.0;
  bool in_support = false;
  std::optional<std::size_t> theoretical_budget;  // empty for support features
};

struct ResilienceEstimate {
  double empirical_prob = 0.0;
  std::size_t wins = 0;
  std::size_t trials = 0;
  double confidence_halfwidth = 0.0;
  double analytic_bound = 0.0;
};

double alpha(const RegressionDataset& data, const SparseModel& model, std::size_t i);
Eigen::VectorXd alphas(const RegressionDataset& data, const SparseModel& model);

std::vector<FeatureStat> feature_stats(const RegressionDataset& data, const SparseModel& model,
                                       double lambda);

// Minimizes the objective with θ_i = 0 outside `support`.
SparseModel restricted_fit(const RegressionDataset& stacked, const FeatureSet& support,
                           const LassoConfig& cfg);

// β_i with the restricted fit trained on clean + poison and the residual
// taken over the clean rows only. Throws InputError if i ∈ support.
double beta(const RegressionDataset& clean, const PoisonSet& poison, const FeatureSet& support,
            std::size_t i, const LassoConfig& cfg);
// β_j for every j (entries for j ∈ support are the active correlations).
Eigen::VectorXd betas(const RegressionDataset& clean, const PoisonSet& poison,
                      const FeatureSet& support, const LassoConfig& cfg);

// floor(λ − |α_i|) + 1, or 0 when |α_i| ≥ λ. Throws InputError if i is in
// the support of `model`.
std::size_t theoretical_budget(const RegressionDataset& data, const SparseModel& model,
                               std::size_t i, double lambda);
std::size_t budget_from_alpha(double alpha_i, double lambda);

// Refits with k rows of [e_i | b] appended and reports whether i is selected.
bool injection_adds_feature(const RegressionDataset& data, const SparseModel& clean_fit,
                            std::size_t i, std::size_t k, int b, const LassoConfig& cfg);

// Smallest k ≤ k_max for which the canonical injection on feature i (sign b,
// default sign(α_i)) puts i into the poisoned support. Binary search, with the
// boundary re-verified and a linear scan if success turns out non-monotone.
// Empty when k_max rows are not enough.
std::optional<std::size_t> empirical_budget(const RegressionDataset& data, std::size_t i,
                                            const LassoConfig& cfg, std::size_t k_max,
                                            std::optional<int> sign = std::nullopt,
                                            const SparseModel* clean_fit = nullptr);

// R(X, I, σ): the listed columns replaced with fresh N(0, σ²) draws.
RegressionDataset resample_columns(const RegressionDataset& data, const FeatureSet& ids,
                                   double sigma, std::uint64_t seed);

// 2·exp(−(λ − 2k)² / (2(n + k)σ²)); the gap λ − 2k is floored at 0, so the
// bound is vacuous (2) when λ ≤ 2k.
double resilience_bound(double lambda, std::size_t k, std::size_t n, double sigma);

// Same bound with the per-dataset variance σ₂² = ‖Y − Xθ̂'‖²σ², θ̂' the
// support-restricted fit on clean + poison rows.
double tight_resilience_bound(const RegressionDataset& clean, const PoisonSet& poison,
                              const LassoConfig& cfg, double sigma);

// Two-sided 95% Hoeffding halfwidth sqrt(ln(2/0.05) / (2·trials)).
double hoeffding_halfwidth(std::size_t trials, double confidence_alpha = 0.05);

// Monte Carlo Pr over S ← D that appending `poison` changes Supp(Lasso(S)).
ResilienceEstimate resilience_estimate(const GaussianDistribution& dist, const PoisonSet& poison,
                                       const LassoConfig& cfg, std::size_t trials,
                                       std::uint64_t seed,
                                       Execution exec = default_execution());

// Looks for j ∉ Supp(clean fit) with 2‖X'[:,j]‖₁ ≥ λ − |β_j|. Throws
// PreconditionError unless the poison adds a feature to the support.
std::optional<std::size_t> lower_bound_witness(const RegressionDataset& clean,
                                               const PoisonSet& poison, const LassoConfig& cfg);
bool lower_bound_check(const RegressionDataset& clean, const PoisonSet& poison,
                       const LassoConfig& cfg);

}  // namespace poisonsep

#endif  // POISONSEP_STABILITY_HPP_
