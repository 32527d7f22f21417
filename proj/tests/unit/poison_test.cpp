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

#include "poisonsep/errors.hpp"
#include "poisonsep/poison.hpp"

namespace poisonsep {
namespace {

TEST(Injection, ThreeRowsOnFeatureOne) {
  const PoisonSet p = feature_injection_attack(1, 3, 1, 3);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 1, 0, 0, 1, 0, 0, 1, 0;
  EXPECT_EQ(p.x, expected);
  EXPECT_EQ(p.y, Eigen::Vector3d::Ones());
}

TEST(Injection, SingleNegativeRow) {
  const PoisonSet p = feature_injection_attack(0, 1, -1, 2);
  EXPECT_EQ(p.x, (Eigen::MatrixXd(1, 2) << 1, 0).finished());
  EXPECT_EQ(p.y[0], -1.0);
}

TEST(Injection, RowsAreUnitBasisVectors) {
  const PoisonSet p = feature_injection_attack(4, 5, -1, 7);
  for (Eigen::Index r = 0; r < p.x.rows(); ++r) {
    EXPECT_EQ(p.x.row(r).lpNorm<Eigen::Infinity>(), 1.0);
    EXPECT_EQ(p.x.row(r).lpNorm<1>(), 1.0);
  }
  EXPECT_TRUE(p.complies(NormFilter::linf_unit()));
  EXPECT_TRUE(p.complies(NormFilter::l1_unit()));
  EXPECT_TRUE(p.complies(NormFilter::l2_unit()));
}

TEST(Injection, RejectsBadArguments) {
  EXPECT_THROW(feature_injection_attack(3, 1, 1, 3), InputError);
  EXPECT_THROW(feature_injection_attack(0, 0, 1, 3), InputError);
  EXPECT_THROW(feature_injection_attack(0, 1, 0, 3), InputError);
}

TEST(Filter, FlagsOversizedRows) {
  PoisonSet p = feature_injection_attack(0, 2, 1, 3);
  p.x(1, 2) = 1.5;
  EXPECT_EQ(p.first_violation(NormFilter::linf_unit()), std::optional<std::size_t>(1));
  p.x(1, 2) = 0.0;
  p.y[0] = 2.0;
  EXPECT_FALSE(p.complies(NormFilter::linf_unit()));
  EXPECT_TRUE(p.complies(NormFilter::label_bound_s(2.0)));
}

TEST(Stack, AppendsRows) {
  RegressionDataset clean{Eigen::MatrixXd::Ones(2, 3), Eigen::Vector2d(1, 2)};
  const auto stacked = stack(clean, feature_injection_attack(2, 2, -1, 3));
  EXPECT_EQ(stacked.n(), 4u);
  EXPECT_EQ(stacked.x(3, 2), 1.0);
  EXPECT_EQ(stacked.y[3], -1.0);
  EXPECT_EQ(stack(clean, PoisonSet::empty(3)).x, clean.x);
}

}  // namespace
}  // namespace poisonsep
