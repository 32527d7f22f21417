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


#include <gtest/gtest.h>

#include <cmath>

#include "poisonsep/data.hpp"
#include "poisonsep/errors.hpp"
#include "poisonsep/poison.hpp"
#include "poisonsep/stability.hpp"

namespace poisonsep {
namespace {

RegressionDataset identity_example() {
  return {Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(3.0, -0.5)};
}

RegressionDataset gaussian_instance(std::size_t n, std::size_t d, std::uint64_t seed,
                                    double sigma_x = 1.0) {
  GaussianSpec spec;
  spec.n = n;
  spec.d = d;
  spec.sigma_x = sigma_x;
  spec.sigma_w = 0.5;
  spec.theta_star = leading_theta_star(d, 2, 0.75);
  spec.seed = seed;
  return sample_dataset(spec);
}

LassoConfig cfg_with(double lambda) {
  LassoConfig c;
  c.lambda = lambda;
  return c;
}

TEST(Alpha, IdentityExample) {
  const auto data = identity_example();
  const SparseModel fit = lasso_fit(data, cfg_with(1.0));
  EXPECT_NEAR(alpha(data, fit, 0), 1.0, 1e-12);
  EXPECT_NEAR(alpha(data, fit, 1), -0.5, 1e-12);
  EXPECT_THROW(alpha(data, fit, 2), InputError);
}

TEST(Alpha, OrthogonalColumnIsZero) {
  RegressionDataset data;
  data.x.resize(3, 2);
  data.x << 1, 0, 0, 1, 0, 0;
  data.y = Eigen::Vector3d(2.0, 0.0, 0.0);
  SparseModel fit;
  fit.theta = Eigen::Vector2d::Zero();
  EXPECT_EQ(alpha(data, fit, 1), 0.0);
}

TEST(Budget, Arithmetic) {
  EXPECT_EQ(budget_from_alpha(-0.5, 1.0), 1u);
  EXPECT_EQ(budget_from_alpha(0.0, 10.0), 11u);
  EXPECT_EQ(budget_from_alpha(2.0, 2.0), 0u);
  EXPECT_EQ(budget_from_alpha(-3.0, 2.0), 0u);
}

TEST(Budget, IdentityExampleRefitOracle) {
  const auto data = identity_example();
  const LassoConfig cfg = cfg_with(1.0);
  const SparseModel fit = lasso_fit(data, cfg);
  EXPECT_EQ(theoretical_budget(data, fit, 1, 1.0), 1u);
  EXPECT_THROW(theoretical_budget(data, fit, 0, 1.0), InputError);
  EXPECT_TRUE(injection_adds_feature(data, fit, 1, 1, -1, cfg));
  EXPECT_EQ(empirical_budget(data, 1, cfg, 5), std::optional<std::size_t>(1));
  EXPECT_EQ(empirical_budget(data, 1, cfg, 0), std::nullopt);
}

TEST(Budget, EmpiricalNeverExceedsTheoretical) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto data = gaussian_instance(40, 12, seed);
    const LassoConfig cfg = cfg_with(6.0);
    const SparseModel fit = lasso_fit(data, cfg);
    for (const FeatureStat& st : feature_stats(data, fit, cfg.lambda)) {
      if (st.in_support) {
        EXPECT_NEAR(std::abs(st.alpha), cfg.lambda, 1e-6);
        continue;
      }
      EXPECT_LE(std::abs(st.alpha), cfg.lambda + 1e-6);
      const auto emp = empirical_budget(data, st.index, cfg, *st.theoretical_budget, std::nullopt, &fit);
      ASSERT_TRUE(emp.has_value()) << "seed " << seed << " feature " << st.index;
      EXPECT_LE(*emp, *st.theoretical_budget);
    }
  }
}

TEST(Budget, LargestAlphaIsUsuallyCheapest) {
  int hits = 0, trials = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = gaussian_instance(30, 8, 500 + seed);
    const LassoConfig cfg = cfg_with(5.0);
    const SparseModel fit = lasso_fit(data, cfg);
    const auto stats = feature_stats(data, fit, cfg.lambda);
    std::size_t best_alpha = stats.size(), cheapest = 0;
    double top = -1.0;
    std::size_t min_budget = SIZE_MAX;
    for (const auto& st : stats) {
      if (st.in_support) continue;
      if (std::abs(st.alpha) > top) {
        top = std::abs(st.alpha);
        best_alpha = st.index;
      }
      const auto emp = empirical_budget(data, st.index, cfg, 20, std::nullopt, &fit);
      if (emp && *emp < min_budget) min_budget = *emp;
    }
    if (best_alpha == stats.size()) continue;
    ++trials;
    const auto chosen = empirical_budget(data, best_alpha, cfg, 20, std::nullopt, &fit);
    cheapest = chosen ? *chosen : SIZE_MAX;
    if (cheapest == min_budget) ++hits;
  }
  ASSERT_GT(trials, 0);
  EXPECT_GE(hits, static_cast<int>(0.9 * trials));
}

TEST(Beta, EmptyAndZeroPoisonMatchRestrictedClean) {
  const auto data = gaussian_instance(40, 10, 7);
  const LassoConfig cfg = cfg_with(4.0);
  const FeatureSet support = lasso_fit(data, cfg).support();
  const SparseModel restricted = restricted_fit(data, support, cfg);
  const std::size_t j = 9;
  ASSERT_FALSE(std::binary_search(support.begin(), support.end(), j));
  const double expected = alpha(data, restricted, j);
  EXPECT_NEAR(beta(data, PoisonSet::empty(10), support, j, cfg), expected, 1e-12);
  PoisonSet zeros;
  zeros.x = Eigen::MatrixXd::Zero(3, 10);
  zeros.y = Eigen::VectorXd::Zero(3);
  EXPECT_NEAR(beta(data, zeros, support, j, cfg), expected, 1e-9);
  if (!support.empty()) {
    EXPECT_THROW(beta(data, zeros, support, support.front(), cfg), InputError);
  }
}

TEST(RestrictedFit, EdgeSupports) {
  const auto data = gaussian_instance(30, 6, 2);
  const LassoConfig cfg = cfg_with(3.0);
  const SparseModel full = lasso_fit(data, cfg);
  const SparseModel all = restricted_fit(data, {0, 1, 2, 3, 4, 5}, cfg);
  EXPECT_LE((full.theta - all.theta).lpNorm<Eigen::Infinity>(), 1e-8);
  EXPECT_EQ(restricted_fit(data, {}, cfg).theta.norm(), 0.0);
  const SparseModel same = restricted_fit(data, full.support(), cfg);
  EXPECT_LE((full.theta - same.theta).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Beta, ResampledColumnHasPredictedVariance) {
  const double sigma = 0.5;
  const auto data = gaussian_instance(60, 8, 13, sigma);
  const LassoConfig cfg = cfg_with(3.0);
  const FeatureSet support = lasso_fit(data, cfg).support();
  std::size_t j = 7;
  while (std::binary_search(support.begin(), support.end(), j)) --j;
  const SparseModel restricted = restricted_fit(data, support, cfg);
  const double predicted = residual(restricted.theta, data).squaredNorm() * sigma * sigma;
  const int reps = 2000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < reps; ++t) {
    const auto resampled = resample_columns(data, {j}, sigma, static_cast<std::uint64_t>(t));
    const double b = beta(resampled, PoisonSet::empty(8), support, j, cfg);
    sum += b;
    sq += b * b;
  }
  const double mean = sum / reps;
  const double var = sq / reps - mean * mean;
  EXPECT_NEAR(mean, 0.0, 4.0 * std::sqrt(predicted / reps));
  EXPECT_NEAR(var / predicted, 1.0, 0.15);
}

TEST(Resample, ContractAndMoments) {
  const auto data = gaussian_instance(10000, 3, 1);
  EXPECT_EQ(resample_columns(data, {}, 2.0, 5).x, data.x);
  const auto a = resample_columns(data, {1}, 2.0, 5);
  const auto b = resample_columns(data, {1}, 2.0, 5);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, data.y);
  EXPECT_EQ(a.x.col(0), data.x.col(0));
  EXPECT_EQ(a.x.col(2), data.x.col(2));
  const Eigen::VectorXd c = a.x.col(1);
  const double mean = c.mean();
  const double var = (c.array() - mean).square().sum() / (c.size() - 1);
  EXPECT_NEAR(mean, 0.0, 4.0 * 2.0 / 100.0);
  // Var of the sample variance is 2σ⁴/(n−1).
  EXPECT_NEAR(var, 4.0, 4.0 * 4.0 * std::sqrt(2.0 / 9999.0));
}

TEST(Resilience, BoundAndEstimateContracts) {
  EXPECT_GE(resilience_bound(4.0, 2, 100, 1.0), 1.0);
  EXPECT_GE(resilience_bound(1.0, 3, 100, 1.0), 1.0);
  EXPECT_NEAR(resilience_bound(12.0, 1, 99, 1.0), 2.0 * std::exp(-100.0 / 200.0), 1e-12);
  EXPECT_NEAR(hoeffding_halfwidth(200), std::sqrt(std::log(40.0) / 400.0), 1e-15);

  GaussianDistribution dist;
  dist.n = 30;
  dist.d = 6;
  dist.sigma_w = 0.5;
  dist.theta_star = leading_theta_star(6, 2, 0.75);
  const auto est = resilience_estimate(dist, PoisonSet::empty(6), cfg_with(3.0), 10, 1);
  EXPECT_EQ(est.empirical_prob, 0.0);
  EXPECT_EQ(est.trials, 10u);
}

TEST(Resilience, CalibratedLambdaKeepsWinRateLow) {
  GaussianDistribution dist;
  dist.n = 60;
  dist.d = 20;
  dist.sigma_x = 1.0;
  dist.sigma_w = 0.5;
  dist.theta_star = leading_theta_star(20, 2, 0.75);
  const std::size_t k = 2;
  const double lambda = 2.0 * k + std::sqrt(2.0 * (60 + k) * std::log(2.0 / 0.05));
  const PoisonSet poison = feature_injection_attack(19, k, 1, 20);
  const auto est = resilience_estimate(dist, poison, cfg_with(lambda), 100, 3);
  EXPECT_LE(est.empirical_prob, 0.05 + est.confidence_halfwidth);
  EXPECT_LT(est.analytic_bound, 1.0);
}

TEST(LowerBound, HoldsOnSuccessfulAttacks) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60 && checked < 30; ++seed) {
    const auto data = gaussian_instance(30, 10, 900 + seed);
    const LassoConfig cfg = cfg_with(4.0);
    const SparseModel fit = lasso_fit(data, cfg);
    for (const auto& st : feature_stats(data, fit, cfg.lambda)) {
      if (st.in_support) continue;
      const PoisonSet p = feature_injection_attack(st.index, *st.theoretical_budget,
                                                   sign_pm(st.alpha), 10);
      if (!injection_adds_feature(data, fit, st.index, p.k(), sign_pm(st.alpha), cfg)) continue;
      EXPECT_TRUE(lower_bound_check(data, p, cfg)) << "seed " << seed;
      ++checked;
      break;
    }
  }
  EXPECT_EQ(checked, 30);
}

TEST(LowerBound, ZeroRowsFailPrecondition) {
  const auto data = gaussian_instance(30, 6, 3);
  PoisonSet zeros;
  zeros.x = Eigen::MatrixXd::Zero(4, 6);
  zeros.y = Eigen::VectorXd::Zero(4);
  EXPECT_THROW(lower_bound_check(data, zeros, cfg_with(3.0)), PreconditionError);
}

}  // namespace
}  // namespace poisonsep
