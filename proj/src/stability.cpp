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

#include "poisonsep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "poisonsep/errors.hpp"
#include "poisonsep/rng.hpp"

namespace poisonsep {
namespace {

void check_feature(std::size_t i, std::size_t d) {
  if (i >= d) throw InputError("feature id out of range");
}

bool contains(const FeatureSet& s, std::size_t i) {
  return std::binary_search(s.begin(), s.end(), i);
}

FeatureSet normalized(FeatureSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Clean-row residual of the support-restricted fit on clean + poison.
Eigen::VectorXd restricted_clean_residual(const RegressionDataset& clean, const PoisonSet& poison,
                                          const FeatureSet& support, const LassoConfig& cfg) {
  const SparseModel fit = restricted_fit(stack(clean, poison), support, cfg);
  return residual(fit.theta, clean);
}

}  // namespace

double alpha(const RegressionDataset& data, const SparseModel& model, std::size_t i) {
  check_feature(i, data.d());
  return data.x.col(static_cast<Eigen::Index>(i)).dot(residual(model.theta, data));
}

Eigen::VectorXd alphas(const RegressionDataset& data, const SparseModel& model) {
  return correlate_columns(data.x, residual(model.theta, data));
}

std::size_t budget_from_alpha(double alpha_i, double lambda) {
  const double gap = lambda - std::abs(alpha_i);
  if (gap <= 0.0) return 0;
  return static_cast<std::size_t>(std::floor(gap)) + 1;
}

std::vector<FeatureStat> feature_stats(const RegressionDataset& data, const SparseModel& model,
                                       double lambda) {
  const Eigen::VectorXd a = alphas(data, model);
  std::vector<FeatureStat> out(data.d());
  for (std::size_t i = 0; i < data.d(); ++i) {
    out[i].index = i;
    out[i].alpha = a[static_cast<Eigen::Index>(i)];
    out[i].in_support = model.in_support(i);
    if (!out[i].in_support) out[i].theoretical_budget = budget_from_alpha(out[i].alpha, lambda);
  }
  return out;
}

SparseModel restricted_fit(const RegressionDataset& stacked, const FeatureSet& support,
                           const LassoConfig& cfg) {
  return lasso_fit_restricted(stacked, normalized(support), cfg);
}

double beta(const RegressionDataset& clean, const PoisonSet& poison, const FeatureSet& support,
            std::size_t i, const LassoConfig& cfg) {
  check_feature(i, clean.d());
  const FeatureSet s = normalized(support);
  if (contains(s, i)) throw InputError("beta: feature is inside the restricted support");
  const Eigen::VectorXd r = restricted_clean_residual(clean, poison, s, cfg);
  return clean.x.col(static_cast<Eigen::Index>(i)).dot(r);
}

Eigen::VectorXd betas(const RegressionDataset& clean, const PoisonSet& poison,
                      const FeatureSet& support, const LassoConfig& cfg) {
  return correlate_columns(clean.x, restricted_clean_residual(clean, poison, normalized(support), cfg));
}

std::size_t theoretical_budget(const RegressionDataset& data, const SparseModel& model,
                               std::size_t i, double lambda) {
  check_feature(i, data.d());
  if (model.in_support(i)) throw InputError("theoretical_budget: feature is already selected");
  return budget_from_alpha(alpha(data, model, i), lambda);
}

bool injection_adds_feature(const RegressionDataset& data, const SparseModel& clean_fit,
                            std::size_t i, std::size_t k, int b, const LassoConfig& cfg) {
  if (k == 0) return clean_fit.in_support(i);
  const RegressionDataset poisoned = stack(data, feature_injection_attack(i, k, b, data.d()));
  const SparseModel fit = lasso_fit(poisoned, cfg, &clean_fit.theta);
  return fit.in_support(i);
}

std::optional<std::size_t> empirical_budget(const RegressionDataset& data, std::size_t i,
                                            const LassoConfig& cfg, std::size_t k_max,
                                            std::optional<int> sign,
                                            const SparseModel* clean_fit) {
  check_feature(i, data.d());
  SparseModel own;
  if (clean_fit == nullptr) {
    own = lasso_fit(data, cfg);
    clean_fit = &own;
  }
  if (clean_fit->in_support(i)) {
    throw InputError("empirical_budget: feature is already in the clean support");
  }
  if (k_max == 0) return std::nullopt;
  const int b = sign ? *sign : sign_pm(alpha(data, *clean_fit, i));

  std::map<std::size_t, bool> seen;
  auto succeeds = [&](std::size_t k) {
    auto it = seen.find(k);
    if (it != seen.end()) return it->second;
    const bool ok = injection_adds_feature(data, *clean_fit, i, k, b, cfg);
    seen.emplace(k, ok);
    return ok;
  };
  auto linear_scan = [&]() -> std::optional<std::size_t> {
    for (std::size_t k = 1; k <= k_max; ++k) {
      if (succeeds(k)) return k;
    }
    return std::nullopt;
  };

  if (succeeds(1)) return 1;
  if (!succeeds(k_max)) return std::nullopt;
  std::size_t lo = 1, hi = k_max;  // fails at lo, succeeds at hi
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (succeeds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Success is expected to be monotone in k. Probe just above the boundary
  // and fall back to a scan if that expectation fails.
  if (hi < k_max && !succeeds(hi + 1)) return linear_scan();
  return hi;
}

RegressionDataset resample_columns(const RegressionDataset& data, const FeatureSet& ids,
                                   double sigma, std::uint64_t seed) {
  data.validate();
  if (!(sigma > 0.0)) throw InputError("resample_columns: sigma must be positive");
  RegressionDataset out = data;
  for (std::size_t i : ids) {
    check_feature(i, data.d());
    // One stream per column so the draw for column i does not depend on
    // which other columns are resampled alongside it.
    Engine eng = make_engine(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(Stream::kResample)), i));
    std::normal_distribution<double> gauss(0.0, sigma);
    for (Eigen::Index r = 0; r < out.x.rows(); ++r) {
      out.x(r, static_cast<Eigen::Index>(i)) = gauss(eng);
    }
  }
  return out;
}

double resilience_bound(double lambda, std::size_t k, std::size_t n, double sigma) {
  if (!(sigma > 0.0)) throw InputError("resilience_bound: sigma must be positive");
  const double kk = static_cast<double>(k);
  const double gap = std::max(0.0, lambda - 2.0 * kk);
  return 2.0 * std::exp(-gap * gap / (2.0 * (static_cast<double>(n) + kk) * sigma * sigma));
}

double tight_resilience_bound(const RegressionDataset& clean, const PoisonSet& poison,
                              const LassoConfig& cfg, double sigma) {
  const SparseModel clean_fit = lasso_fit(clean, cfg);
  const RegressionDataset stacked = stack(clean, poison);
  const SparseModel restricted = restricted_fit(stacked, clean_fit.support(), cfg);
  const double sigma2_sq = residual(restricted.theta, stacked).squaredNorm() * sigma * sigma;
  const double gap = std::max(0.0, cfg.lambda - 2.0 * static_cast<double>(poison.k()));
  if (sigma2_sq == 0.0) return gap > 0.0 ? 0.0 : 2.0;
  return 2.0 * std::exp(-gap * gap / (2.0 * sigma2_sq));
}

double hoeffding_halfwidth(std::size_t trials, double confidence_alpha) {
  if (trials == 0) throw InputError("hoeffding_halfwidth: need at least one trial");
  return std::sqrt(std::log(2.0 / confidence_alpha) / (2.0 * static_cast<double>(trials)));
}

ResilienceEstimate resilience_estimate(const GaussianDistribution& dist, const PoisonSet& poison,
                                       const LassoConfig& cfg, std::size_t trials,
                                       std::uint64_t seed, Execution exec) {
  if (trials == 0) throw InputError("resilience_estimate: need at least one trial");
  dist.validate();
  if (poison.k() > 0 && static_cast<std::size_t>(poison.x.cols()) != dist.d) {
    throw InputError("resilience_estimate: poison dimension does not match the distribution");
  }
  const auto changed = map_indices<char>(
      trials,
      [&](std::size_t t) -> char {
        GaussianSpec spec;
        static_cast<GaussianDistribution&>(spec) = dist;
        spec.seed = derive_seed(seed, t);
        const RegressionDataset s = sample_dataset(spec);
        const SparseModel clean_fit = lasso_fit(s, cfg);
        if (poison.k() == 0) return 0;
        const SparseModel poisoned = lasso_fit(stack(s, poison), cfg, &clean_fit.theta);
        return poisoned.support() != clean_fit.support() ? 1 : 0;
      },
      exec);

  ResilienceEstimate est;
  est.trials = trials;
  for (char c : changed) est.wins += static_cast<std::size_t>(c);
  est.empirical_prob = static_cast<double>(est.wins) / static_cast<double>(trials);
  est.confidence_halfwidth = hoeffding_halfwidth(trials);
  double scale = 1.0;
  for (double s : dist.column_scale) scale = std::max(scale, s);
  est.analytic_bound = resilience_bound(cfg.lambda, poison.k(), dist.n, dist.sigma_x * scale);
  return est;
}

std::optional<std::size_t> lower_bound_witness(const RegressionDataset& clean,
                                               const PoisonSet& poison, const LassoConfig& cfg) {
  const SparseModel clean_fit = lasso_fit(clean, cfg);
  const FeatureSet support = clean_fit.support();
  const RegressionDataset stacked = stack(clean, poison);
  const SparseModel poisoned = lasso_fit(stacked, cfg, &clean_fit.theta);
  bool adds = false;
  for (std::size_t j : poisoned.support()) {
    if (!contains(support, j)) adds = true;
  }
  if (!adds) throw PreconditionError("lower_bound_check: the poison does not add a feature");

  const Eigen::VectorXd b = betas(clean, poison, support, cfg);
  for (std::size_t j = 0; j < clean.d(); ++j) {
    if (contains(support, j)) continue;
    const auto jj = static_cast<Eigen::Index>(j);
    const double invest = poison.k() == 0 ? 0.0 : poison.x.col(jj).lpNorm<1>();
    if (2.0 * invest >= cfg.lambda - std::abs(b[jj])) return j;
  }
  return std::nullopt;
}

bool lower_bound_check(const RegressionDataset& clean, const PoisonSet& poison,
                       const LassoConfig& cfg) {
  return lower_bound_witness(clean, poison, cfg).has_value();
}

}  // namespace poisonsep
