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

// Dense LASSO: the unscaled objective
//
//     Risk(θ) = ‖Y − Xθ‖₂² + 2λ‖θ‖₁
//
// minimized over all of ℝ^d by cyclic coordinate descent. Its minimizer is
// the same as that of the (1/n)-scaled form (1/n)‖Y − Xθ‖² + (2λ/n)‖θ‖₁.
//
// Optimality is certified by the subgradient conditions
//
//     x_jᵀ(Y − Xθ) = λ·sign(θ_j)   for θ_j ≠ 0,
//     |x_jᵀ(Y − Xθ)| ≤ λ           for θ_j = 0,
//
// which kkt_check evaluates and lasso_fit enforces before returning.

#ifndef POISONSEP_LASSO_HPP_
#define POISONSEP_LASSO_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace poisonsep {

using FeatureSet = std::vector<std::size_t>;  // sorted, unique feature ids

// An n×d design X and response Y.
struct RegressionDataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  std::size_t n() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(x.cols()); }

  // Throws InputError unless rows(x) == len(y), n ≥ 1, d ≥ 1 and all entries
  // are finite. allow_empty admits n = 0 (visible subsets of size zero).
  void validate(bool allow_empty = false) const;
};

// Rows of `top` followed by rows of `bottom`.
RegressionDataset stack(const RegressionDataset& top, const Eigen::MatrixXd& bottom_x,
                        const Eigen::VectorXd& bottom_y);

// Rows selected by index, in the given order.
RegressionDataset select_rows(const RegressionDataset& data,
                              const std::vector<std::size_t>& rows);

struct SparseModel {
  Eigen::VectorXd theta;
  double support_tol = 1e-6;

  std::size_t d() const { return static_cast<std::size_t>(theta.size()); }
  bool in_support(std::size_t i) const;
  FeatureSet support() const;
};

struct LassoConfig {
  double lambda = 1.0;
  int max_sweeps = 10000;
  double kkt_tol = 1e-9;
  double support_tol = 1e-6;

  LassoConfig with_lambda(double l) const {
    LassoConfig c = *this;
    c.lambda = l;
    return c;
  }
  void validate() const;
};

struct KktReport {
  double active_violation = 0.0;
  double inactive_violation = 0.0;
  bool passed = false;
};

// Thrown when the solver exhausts max_sweeps without a passing certificate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, KktReport report, int sweeps)
      : std::runtime_error(what), report_(report), sweeps_(sweeps) {}
  const KktReport& report() const { return report_; }
  int sweeps() const { return sweeps_; }

 private:
  KktReport report_;
  int sweeps_;
};

// sign(z)·max(|z| − λ, 0)
double soft_threshold(double z, double lambda);

// sign with sign(0) = +1, used everywhere a ±1 value is required.
inline int sign_pm(double v) { return v < 0.0 ? -1 : 1; }

// Minimizes Risk(θ). `warm_start`, when given, only changes the starting
// point; the returned model is certified optimal either way.
SparseModel lasso_fit(const RegressionDataset& data, const LassoConfig& cfg,
                      const Eigen::VectorXd* warm_start = nullptr);

// Minimizes Risk(θ) subject to θ_i = 0 for every i outside `allowed`.
SparseModel lasso_fit_restricted(const RegressionDataset& data, const FeatureSet& allowed,
                                 const LassoConfig& cfg,
                                 const Eigen::VectorXd* warm_start = nullptr);

double risk(const SparseModel& model, const RegressionDataset& data, double lambda);
double risk(const Eigen::VectorXd& theta, const RegressionDataset& data, double lambda);

KktReport kkt_check(const SparseModel& model, const RegressionDataset& data, double lambda,
                    double tol);

// Subgradient conditions restricted to the coordinates in `allowed`.
KktReport kkt_check_restricted(const SparseModel& model, const RegressionDataset& data,
                               const FeatureSet& allowed, double lambda, double tol);

Eigen::VectorXd residual(const Eigen::VectorXd& theta, const RegressionDataset& data);

// ‖XᵀY‖_∞: the smallest λ at which the zero model is optimal.
double lambda_max(const RegressionDataset& data);

}  // namespace poisonsep

#endif  // POISONSEP_LASSO_HPP_
