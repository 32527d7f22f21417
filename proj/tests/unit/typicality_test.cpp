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
#include <numbers>

#include "poisonsep/errors.hpp"
#include "poisonsep/typicality.hpp"

namespace poisonsep {
namespace {

TEST(Typical, ScaledIdentityBlockPassesEverything) {
  const std::size_t n = 16, d = 6;
  RegressionDataset data;
  data.x = std::sqrt(static_cast<double>(n)) * Eigen::MatrixXd::Identity(n, d);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  theta[0] = 0.5;
  data.y = data.x * theta;
  const TypicalityReport rep = check_typical(theta, data, 8.0, 1.0);
  EXPECT_TRUE(rep.column_normalization);
  EXPECT_TRUE(rep.restricted_convexity);
  ASSERT_TRUE(rep.incoherence_value.has_value());
  ASSERT_TRUE(rep.noise_value.has_value());
  EXPECT_EQ(*rep.incoherence_value, 0.0);
  EXPECT_EQ(*rep.noise_value, 0.0);
  EXPECT_TRUE(rep.passed);
}

TEST(Typical, NoOutsideColumnsIsVacuous) {
  RegressionDataset data;
  data.x = Eigen::MatrixXd::Identity(4, 2) * 2.0;
  data.y = Eigen::Vector4d(1.0, -2.0, 0.3, 0.1);
  const TypicalityReport rep = check_typical(Eigen::Vector2d(0.5, 0.5), data, 1.0, 1.0);
  EXPECT_EQ(rep.incoherence_value, std::optional<double>(0.0));
  EXPECT_EQ(rep.noise_value, std::optional<double>(0.0));
  EXPECT_TRUE(rep.incoherence);
  EXPECT_TRUE(rep.bounded_noise);
}

TEST(Typical, SingularGramReportsNotComputable) {
  RegressionDataset data;
  data.x = Eigen::MatrixXd::Zero(4, 3);
  data.x.col(0).setOnes();
  data.x.col(1).setOnes();
  data.y = Eigen::VectorXd::Ones(4);
  const TypicalityReport rep = check_typical(Eigen::Vector3d(0.5, 0.5, 0.0), data, 1.0, 1.0);
  EXPECT_FALSE(rep.restricted_convexity);
  EXPECT_FALSE(rep.incoherence_value.has_value());
  EXPECT_FALSE(rep.noise_value.has_value());
  EXPECT_FALSE(rep.passed);
  EXPECT_THROW(check_typical(Eigen::Vector3d::Zero(), data, 1.0, 1.0), PreconditionError);
}

TEST(LambdaRules, Arithmetic) {
  // log d = 1 at d = e, which an integer dimension cannot express; check the
  // formula at d = 20 and the scalar arithmetic separately.
  EXPECT_NEAR(4.0 * 1.0 * std::sqrt(100.0 * std::log(std::numbers::e)), 40.0, 1e-12);
  EXPECT_NEAR(lambda_rule(LambdaRuleKind::kD2, 100, 20, 1.0), 40.0 * std::sqrt(std::log(20.0)), 1e-12);
  EXPECT_NEAR(lambda_rule(LambdaRuleKind::kSynthetic, 100, 20, 1.0), 20.0 * std::sqrt(std::log(20.0)), 1e-12);
  EXPECT_EQ(lambda_rule(LambdaRuleKind::kOblivious, 100, 20, 1.0, 0, 2.0), 0.0);
  EXPECT_NEAR(lambda_rule(LambdaRuleKind::kOblivious, 100, 200, 1.0, 5, 0.05),
              10.0 + std::sqrt(2.0 * 105.0 * std::log(40.0)), 1e-12);
  LambdaRule fixed;
  fixed.kind = LambdaRuleKind::kFixed;
  fixed.fixed = 3.5;
  EXPECT_EQ(fixed(10, 10), 3.5);
  EXPECT_EQ(parse_lambda_rule("d2").kind, LambdaRuleKind::kD2);
  EXPECT_THROW(parse_lambda_rule("bogus"), InputError);
  EXPECT_THROW(lambda_rule(LambdaRuleKind::kD4, 0, 20, 1.0), InputError);
}

TEST(SampleRules, Arithmetic) {
  EXPECT_NEAR(min_sample_rule_D3(1, std::numbers::e, 0, 1, 1, 1), 16.0, 1e-12);
  EXPECT_NEAR(min_sample_rule_D2(4, std::numbers::e, 2, 1, 1), 16.0, 1e-12);
  EXPECT_NEAR(sample_ratio(400, 4, 64), 400.0 / (4.0 * std::log(64.0)), 1e-12);
  EXPECT_THROW(min_sample_rule_D2(0, 10, 1, 1, 1), InputError);
}

TEST(Margin, SmallestDistanceToTheUnitInterval) {
  EXPECT_NEAR(theta_margin(Eigen::Vector3d(0.75, 0.0, 0.4)), 0.25, 1e-15);
  EXPECT_THROW(theta_margin(Eigen::Vector2d(1.5, 0.0)), InputError);
  EXPECT_THROW(theta_margin(Eigen::Vector2d::Zero()), PreconditionError);
}

}  // namespace
}  // namespace poisonsep
