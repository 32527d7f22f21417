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
#include "poisonsep/lasso.hpp"
#include "poisonsep/rng.hpp"

namespace poisonsep {
namespace {

RegressionDataset identity_example() {
  RegressionDataset d;
  d.x = Eigen::MatrixXd::Identity(2, 2);
  d.y = Eigen::Vector2d(3.0, -0.5);
  return d;
}

RegressionDataset random_instance(std::size_t n, std::size_t d, std::uint64_t seed) {
  GaussianSpec spec;
  spec.n = n;
  spec.d = d;
  spec.sigma_x = 1.0;
  spec.sigma_w = 0.5;
  spec.theta_star = make_theta_star(d, std::min<std::size_t>(3, d), 1.0, seed);
  spec.seed = seed;
  return sample_dataset(spec);
}

TEST(SoftThreshold, Examples) {
  EXPECT_DOUBLE_EQ(soft_threshold(3.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(soft_threshold(-0.5, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(soft_threshold(-3.0, 1.0), -2.0);
  EXPECT_DOUBLE_EQ(soft_threshold(0.7, 0.0), 0.7);
}

TEST(LassoFit, IdentityDesignClosedForm) {
  const auto data = identity_example();
  LassoConfig cfg;
  cfg.lambda = 1.0;
  const SparseModel fit = lasso_fit(data, cfg);
  EXPECT_NEAR(fit.theta[0], 2.0, 1e-12);
  EXPECT_NEAR(fit.theta[1], 0.0, 1e-12);
  EXPECT_EQ(fit.support(), FeatureSet({0}));
  EXPECT_NEAR(risk(fit, data, 1.0), 5.25, 1e-12);

  const SparseModel zero = lasso_fit(data, cfg.with_lambda(10.0));
  EXPECT_EQ(zero.theta.norm(), 0.0);
}

TEST(LassoFit, RejectsBadInput) {
  RegressionDataset bad;
  bad.x = Eigen::MatrixXd::Identity(2, 2);
  bad.y = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(lasso_fit(bad, LassoConfig{}), InputError);
  LassoConfig cfg;
  cfg.lambda = -1.0;
  EXPECT_THROW(lasso_fit(identity_example(), cfg), InputError);
}

TEST(Risk, ZeroModelIsSquaredNorm) {
  const auto data = random_instance(20, 7, 3);
  EXPECT_NEAR(risk(Eigen::VectorXd::Zero(7), data, 2.5), data.y.squaredNorm(), 1e-12);
}

TEST(Kkt, ClosedFormAndZeroModel) {
  const auto data = identity_example();
  SparseModel exact;
  exact.theta = Eigen::Vector2d(2.0, 0.0);
  const KktReport ok = kkt_check(exact, data, 1.0, 1e-12);
  EXPECT_TRUE(ok.passed);
  EXPECT_LE(ok.active_violation, 1e-12);
  EXPECT_LE(ok.inactive_violation, 1e-12);

  SparseModel zero;
  zero.theta = Eigen::Vector2d::Zero();
  const KktReport below = kkt_check(zero, data, 1.0, 1e-9);
  EXPECT_FALSE(below.passed);
  EXPECT_GT(below.inactive_violation, 0.0);
  EXPECT_TRUE(kkt_check(zero, data, lambda_max(data), 1e-12).passed);
}

TEST(LassoFit, KktCertificateOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Engine eng = make_engine(seed);
    const std::size_t n = 10 + eng() % 91;
    const std::size_t d = 2 + eng() % 199;
    const auto data = random_instance(n, d, seed);
    LassoConfig cfg;
    cfg.lambda = 0.3 * lambda_max(data);
    const SparseModel fit = lasso_fit(data, cfg);
    EXPECT_TRUE(kkt_check(fit, data, cfg.lambda, 1e-6).passed) << "seed " << seed;
  }
}

TEST(LassoFit, BeatsRandomCompetitors) {
  const auto data = random_instance(40, 12, 11);
  LassoConfig cfg;
  cfg.lambda = 0.2 * lambda_max(data);
  const SparseModel fit = lasso_fit(data, cfg);
  const double best = risk(fit, data, cfg.lambda);
  Engine eng = make_engine(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd other(12);
    for (int j = 0; j < 12; ++j) other[j] = fit.theta[j] + 0.5 * gauss(eng);
    EXPECT_LE(best, risk(other, data, cfg.lambda) + 1e-9);
  }
  EXPECT_LE(best, risk(Eigen::VectorXd::Zero(12), data, cfg.lambda) + 1e-12);
}

TEST(LassoFit, OrthonormalDesignMatchesSoftThreshold) {
  Engine eng = make_engine(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(30, 6);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = gauss(eng);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  RegressionDataset data;
  data.x = qr.householderQ() * Eigen::MatrixXd::Identity(30, 6);
  data.y.resize(30);
  for (int i = 0; i < 30; ++i) data.y[i] = 2.0 * gauss(eng);
  LassoConfig cfg;
  cfg.lambda = 0.8;
  const SparseModel fit = lasso_fit(data, cfg);
  const Eigen::VectorXd z = data.x.transpose() * data.y;
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(fit.theta[j], soft_threshold(z[j], 0.8), 1e-8);
}

TEST(LassoFit, ScaledObjectiveHasSameMinimizer) {
  // (1/n)‖Y − Xθ‖² + (2λ/n)‖θ‖₁ is the unscaled objective divided by n, so
  // fitting with rescaled columns and labels must agree after undoing it.
  const auto data = random_instance(50, 20, 21);
  LassoConfig cfg;
  cfg.lambda = 0.25 * lambda_max(data);
  const SparseModel fit = lasso_fit(data, cfg);
  const double c = 1.0 / std::sqrt(50.0);
  RegressionDataset scaled{data.x * c, data.y * c};
  const SparseModel scaled_fit = lasso_fit(scaled, cfg.with_lambda(cfg.lambda / 50.0));
  EXPECT_LE((fit.theta - scaled_fit.theta).lpNorm<Eigen::Infinity>(), 1e-7);
  EXPECT_EQ(fit.support(), scaled_fit.support());
}

TEST(LassoFit, ResidualLowerBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto data = random_instance(40, 30, 100 + seed);
    LassoConfig cfg;
    cfg.lambda = 0.4 * lambda_max(data);
    const SparseModel fit = lasso_fit(data, cfg);
    if (fit.support().empty()) continue;
    const double l = data.x.colwise().norm().maxCoeff();
    EXPECT_GE(residual(fit.theta, data).norm(), cfg.lambda / l - 1e-8);
  }
}

TEST(LassoFit, ZeroColumnStaysZeroAndDeterministic) {
  auto data = random_instance(30, 8, 4);
  data.x.col(3).setZero();
  LassoConfig cfg;
  cfg.lambda = 0.1 * lambda_max(data);
  const SparseModel a = lasso_fit(data, cfg);
  const SparseModel b = lasso_fit(data, cfg);
  EXPECT_EQ(a.theta[3], 0.0);
  EXPECT_EQ(a.theta, b.theta);
}

TEST(LassoFit, RestrictedFitKeepsOutsideAtZero) {
  const auto data = random_instance(30, 10, 8);
  LassoConfig cfg;
  cfg.lambda = 0.1 * lambda_max(data);
  const SparseModel fit = lasso_fit_restricted(data, {1, 4}, cfg);
  for (int j = 0; j < 10; ++j) {
    if (j != 1 && j != 4) {
      EXPECT_EQ(fit.theta[j], 0.0);
    }
  }
  EXPECT_TRUE(kkt_check_restricted(fit, data, {1, 4}, cfg.lambda, 1e-6).passed);
}

}  // namespace
}  // namespace poisonsep
