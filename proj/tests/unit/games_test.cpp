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

#include <memory>
#include <numeric>

#include "poisonsep/data.hpp"
#include "poisonsep/errors.hpp"
#include "poisonsep/games.hpp"
#include "poisonsep/typicality.hpp"

namespace poisonsep {
namespace {

GameSpec small_spec(std::size_t k, double lambda) {
  GameSpec spec;
  spec.budget_k = k;
  spec.distribution.n = 40;
  spec.distribution.d = 30;
  spec.distribution.sigma_w = 0.5;
  spec.distribution.theta_star = leading_theta_star(30, 3, 0.75);
  spec.selector.lambda = lambda;
  return spec;
}

TEST(WinPredicate, Kinds) {
  const FeatureSet clean{1, 3}, added{1, 3, 5}, removed{1}, swapped{1, 4};
  EXPECT_FALSE(WinPredicate::support_changed()(clean, clean));
  EXPECT_TRUE(WinPredicate::support_changed()(clean, added));
  EXPECT_TRUE(WinPredicate::feature_added()(clean, added));
  EXPECT_FALSE(WinPredicate::feature_added()(clean, removed));
  EXPECT_TRUE(WinPredicate::feature_removed()(clean, removed));
  EXPECT_TRUE(WinPredicate::feature_added()(clean, swapped));
  EXPECT_TRUE(WinPredicate::feature_removed()(clean, swapped));
  EXPECT_TRUE(WinPredicate::targeted_add(5)(clean, added));
  EXPECT_FALSE(WinPredicate::targeted_add(4)(clean, added));
  EXPECT_TRUE(WinPredicate::targeted_add()(clean, added, 5));
  EXPECT_FALSE(WinPredicate::targeted_add()(clean, added, 2));
}

TEST(Game, ZeroBudgetNeverWins) {
  const GameSpec spec = small_spec(0, 3.0);
  const CanonicalAwareAdversary aware;
  const UniformCanonicalAdversary uniform;
  for (std::uint64_t s = 0; s < 10; ++s) {
    EXPECT_FALSE(run_awr_ftr_sel(spec, aware, s).won);
    EXPECT_FALSE(run_obl_ftr_sel(spec, uniform, s).won);
  }
}

TEST(Game, OversizedRowIsDisqualified) {
  const GameSpec spec = small_spec(3, 3.0);
  PoisonSet p = feature_injection_attack(10, 2, 1, 30);
  p.x(0, 4) = 2.0;
  const FixedPoisonAdversary adv(p, 10);
  const GameOutcome out = run_obl_ftr_sel(spec, adv, 1);
  EXPECT_TRUE(out.disqualified);
  EXPECT_FALSE(out.won);
  EXPECT_FALSE(out.disqualification.empty());

  const FixedPoisonAdversary too_many(feature_injection_attack(10, 4, 1, 30), 10);
  EXPECT_TRUE(run_obl_ftr_sel(spec, too_many, 1).disqualified);
}

TEST(Game, EmptyPoisonHasZeroAdvantage) {
  const GameSpec spec = small_spec(3, 3.0);
  const FixedPoisonAdversary adv(PoisonSet::empty(30));
  const AdvantageEstimate est = estimate_advantage(spec, adv, 20, 4);
  EXPECT_EQ(est.advantage, 0.0);
  EXPECT_EQ(est.outcomes.size(), 20u);
  const AdvantageEstimate one = estimate_advantage(spec, UniformCanonicalAdversary{}, 1, 4);
  EXPECT_TRUE(one.advantage == 0.0 || one.advantage == 1.0);
}

TEST(Game, AwareWithSufficientBudgetAlwaysWins) {
  const GameSpec spec = small_spec(12, 5.0);
  const CanonicalAwareAdversary aware;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GameOutcome out = run_awr_ftr_sel(spec, aware, s);
    ASSERT_FALSE(out.disqualified);
    EXPECT_TRUE(out.won) << "seed " << s;
    ASSERT_TRUE(out.chosen_feature.has_value());
    EXPECT_TRUE(std::binary_search(out.poisoned_support.begin(), out.poisoned_support.end(),
                                   *out.chosen_feature));
  }
}

TEST(Game, CommittingFirstLosesMoreOften) {
  GameSpec spec;
  spec.budget_k = 5;
  spec.distribution.n = 100;
  spec.distribution.d = 200;
  spec.distribution.sigma_x = 1.0;
  spec.distribution.sigma_w = 0.5;
  spec.distribution.theta_star = leading_theta_star(200, 4, 0.75);
  spec.selector.lambda = lambda_rule(LambdaRuleKind::kOblivious, 100, 200, 1.0, 5, 0.05);
  auto aware = std::make_shared<CanonicalAwareAdversary>();
  const AwareAsOblivious blind(aware);
  const auto a = estimate_advantage(spec, *aware, 100, 8);
  const auto b = estimate_advantage(spec, blind, 100, 8);
  EXPECT_LT(b.advantage, a.advantage);
  EXPECT_LE(b.advantage, 0.05 + b.halfwidth);
}

TEST(Game, SeedDeterminismAcrossThreads) {
  const GameSpec spec = small_spec(4, 3.0);
  const CanonicalAwareAdversary aware;
  const auto serial = estimate_advantage(spec, aware, 16, 5, 0.5, Execution::kSerial);
  const auto parallel = estimate_advantage(spec, aware, 16, 5, 0.5, Execution::kParallel);
  ASSERT_EQ(serial.outcomes.size(), parallel.outcomes.size());
  for (std::size_t t = 0; t < serial.outcomes.size(); ++t) {
    EXPECT_EQ(outcome_csv_row(serial.outcomes[t], 4), outcome_csv_row(parallel.outcomes[t], 4));
    EXPECT_EQ(serial.outcomes[t].poisoned_support, parallel.outcomes[t].poisoned_support);
  }
  const VoteCanonicalAdversary vote(LambdaRule{}, 4);
  EXPECT_EQ(outcome_csv_row(run_obl_ftr_sel(spec, vote, 9), 4),
            outcome_csv_row(run_obl_ftr_sel(spec, vote, 9), 4));
}

TEST(Game, PoisonPlacementDoesNotMatter) {
  // Reversed row order, poison first.
  GaussianSpec gs;
  static_cast<GaussianDistribution&>(gs) = small_spec(0, 0).distribution;
  gs.seed = 3;
  const RegressionDataset clean = sample_dataset(gs);
  const PoisonSet p = feature_injection_attack(20, 6, -1, 30);
  const RegressionDataset appended = stack(clean, p);
  std::vector<std::size_t> order(appended.n());
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  const RegressionDataset reversed = select_rows(appended, order);
  LassoConfig cfg;
  cfg.lambda = 3.0;
  EXPECT_EQ(lasso_fit(appended, cfg).support(), lasso_fit(reversed, cfg).support());
}

TEST(Game, CsvRowShape) {
  const GameSpec spec = small_spec(2, 3.0);
  const GameOutcome out = run_obl_ftr_sel(spec, UniformCanonicalAdversary{}, 2);
  const std::string row = outcome_csv_row(out, 2);
  const std::string header = outcome_csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}

}  // namespace
}  // namespace poisonsep
