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

#include "poisonsep/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "poisonsep/errors.hpp"
#include "poisonsep/parallel.hpp"

namespace poisonsep {
namespace {

// Coordinate changes below this end an active-set pass.
constexpr double kChangeTol = 1e-10;
// Active-only passes between full sweeps.
constexpr int kMaxActivePasses = 200;

std::vector<char> full_mask(std::size_t d) { return std::vector<char>(d, 1); }

std::vector<char> mask_from(const FeatureSet& allowed, std::size_t d) {
  std::vector<char> mask(d, 0);
  for (std::size_t i : allowed) {
    if (i >= d) throw InputError("feature id out of range in restricted support");
    mask[i] = 1;
  }
  return mask;
}

KktReport kkt_masked(const Eigen::VectorXd& theta, const RegressionDataset& data,
                     const std::vector<char>& mask, double lambda, double support_tol,
                     double tol) {
  const Eigen::VectorXd c = correlate_columns(data.x, residual(theta, data));
  KktReport rep;
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (!mask[j]) continue;
    const auto jj = static_cast<Eigen::Index>(j);
    if (std::abs(theta[jj]) > support_tol) {
      rep.active_violation =
          std::max(rep.active_violation, std::abs(c[jj] - lambda * sign_pm(theta[jj])));
    } else {
      rep.inactive_violation =
          std::max(rep.inactive_violation, std::max(0.0, std::abs(c[jj]) - lambda));
    }
  }
  rep.passed = rep.active_violation <= tol && rep.inactive_violation <= tol;
  return rep;
}

// Solves the equality system of the current active set and sign pattern:
//     (X_Aᵀ X_A) θ_A = X_Aᵀ Y − λ s_A.
// Returns nothing when the system is singular or the signs do not persist.
std::optional<Eigen::VectorXd> polish(const RegressionDataset& data,
                                      const Eigen::VectorXd& theta, double lambda) {
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    if (theta[j] != 0.0) active.push_back(j);
  }
  if (active.empty() || active.size() > data.n()) return std::nullopt;
  const auto a = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd xa(data.x.rows(), a);
  Eigen::VectorXd rhs(a);
  for (Eigen::Index k = 0; k < a; ++k) {
    xa.col(k) = data.x.col(active[static_cast<std::size_t>(k)]);
  }
  for (Eigen::Index k = 0; k < a; ++k) {
    rhs[k] = xa.col(k).dot(data.y) - lambda * sign_pm(theta[active[static_cast<std::size_t>(k)]]);
  }
  const Eigen::MatrixXd gram = xa.transpose() * xa;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd sol = llt.solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(theta.size());
  for (Eigen::Index k = 0; k < a; ++k) {
    const Eigen::Index j = active[static_cast<std::size_t>(k)];
    if (sol[k] == 0.0 || sign_pm(sol[k]) != sign_pm(theta[j])) return std::nullopt;
    out[j] = sol[k];
  }
  return out;
}

SparseModel solve(const RegressionDataset& data, const std::vector<char>& mask,
                  const LassoConfig& cfg, const Eigen::VectorXd* warm_start) {
  data.validate();
  cfg.validate();
  const std::size_t d = data.d();
  const double lambda = cfg.lambda;

  Eigen::VectorXd col_sq(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    col_sq[static_cast<Eigen::Index>(j)] = data.x.col(static_cast<Eigen::Index>(j)).squaredNorm();
  }
  std::vector<std::size_t> coords;
  for (std::size_t j = 0; j < d; ++j) {
    // Zero columns stay at zero: their subgradient condition is vacuous.
    if (mask[j] && col_sq[static_cast<Eigen::Index>(j)] > 0.0) coords.push_back(j);
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  if (warm_start != nullptr) {
    if (static_cast<std::size_t>(warm_start->size()) != d) {
      throw InputError("lasso_fit: warm start has the wrong dimension");
    }
    for (std::size_t j : coords) {
      theta[static_cast<Eigen::Index>(j)] = (*warm_start)[static_cast<Eigen::Index>(j)];
    }
  }
  Eigen::VectorXd r = residual(theta, data);

  auto update = [&](std::size_t j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double old = theta[jj];
    const double z = data.x.col(jj).dot(r) + col_sq[jj] * old;
    const double next = soft_threshold(z, lambda) / col_sq[jj];
    if (next != old) {
      r.noalias() -= (next - old) * data.x.col(jj);
      theta[jj] = next;
    }
    return std::abs(next - old);
  };

  int sweeps = 0;
  KktReport last;
  while (sweeps < cfg.max_sweeps) {
    double full_change = 0.0;
    for (std::size_t j : coords) full_change = std::max(full_change, update(j));
    ++sweeps;

    std::vector<std::size_t> active;
    for (std::size_t j : coords) {
      if (theta[static_cast<Eigen::Index>(j)] != 0.0) active.push_back(j);
    }
    for (int pass = 0; pass < kMaxActivePasses && sweeps < cfg.max_sweeps; ++pass) {
      double change = 0.0;
      for (std::size_t j : active) change = std::max(change, update(j));
      ++sweeps;
      if (change < kChangeTol) break;
    }

    if (auto polished = polish(data, theta, lambda)) {
      const KktReport rep =
          kkt_masked(*polished, data, mask, lambda, cfg.support_tol, cfg.kkt_tol);
      if (rep.passed) return SparseModel{*polished, cfg.support_tol};
    }

    r = residual(theta, data);
    last = kkt_masked(theta, data, mask, lambda, cfg.support_tol, cfg.kkt_tol);
    if (last.passed) return SparseModel{theta, cfg.support_tol};
    if (full_change == 0.0) break;  // fixed point that cannot meet kkt_tol
  }
  std::ostringstream msg;
  msg << "lasso_fit did not converge after " << sweeps << " sweeps (active violation "
      << last.active_violation << ", inactive violation " << last.inactive_violation << ")";
  throw ConvergenceError(msg.str(), last, sweeps);
}

}  // namespace

void RegressionDataset::validate(bool allow_empty) const {
  if (x.rows() != y.size()) {
    throw InputError("dataset: row count of X does not match length of Y");
  }
  if (x.cols() < 1) throw InputError("dataset: need at least one feature");
  if (!allow_empty && x.rows() < 1) throw InputError("dataset: need at least one row");
  if (!x.allFinite() || !y.allFinite()) throw InputError("dataset: non-finite entry");
}

RegressionDataset stack(const RegressionDataset& top, const Eigen::MatrixXd& bottom_x,
                        const Eigen::VectorXd& bottom_y) {
  if (bottom_x.rows() != bottom_y.size()) {
    throw InputError("stack: poison rows and labels differ in length");
  }
  if (bottom_x.rows() > 0 && bottom_x.cols() != top.x.cols()) {
    throw InputError("stack: poison rows have the wrong dimension");
  }
  RegressionDataset out;
  out.x.resize(top.x.rows() + bottom_x.rows(), top.x.cols());
  out.y.resize(top.y.size() + bottom_y.size());
  out.x.topRows(top.x.rows()) = top.x;
  out.y.head(top.y.size()) = top.y;
  if (bottom_x.rows() > 0) {
    out.x.bottomRows(bottom_x.rows()) = bottom_x;
    out.y.tail(bottom_y.size()) = bottom_y;
  }
  return out;
}

RegressionDataset select_rows(const RegressionDataset& data,
                              const std::vector<std::size_t>& rows) {
  RegressionDataset out;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), data.x.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= data.n()) throw InputError("select_rows: row index out of range");
    out.x.row(static_cast<Eigen::Index>(k)) = data.x.row(static_cast<Eigen::Index>(rows[k]));
    out.y[static_cast<Eigen::Index>(k)] = data.y[static_cast<Eigen::Index>(rows[k])];
  }
  return out;
}

bool SparseModel::in_support(std::size_t i) const {
  if (i >= d()) throw InputError("feature id out of range");
  return std::abs(theta[static_cast<Eigen::Index>(i)]) > support_tol;
}

FeatureSet SparseModel::support() const {
  FeatureSet s;
  for (std::size_t i = 0; i < d(); ++i) {
    if (std::abs(theta[static_cast<Eigen::Index>(i)]) > support_tol) s.push_back(i);
  }
  return s;
}

void LassoConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lasso: lambda must be positive");
  if (max_sweeps < 1) throw InputError("lasso: max_sweeps must be positive");
  if (!(kkt_tol > 0.0)) throw InputError("lasso: kkt_tol must be positive");
  if (!(support_tol >= 0.0)) throw InputError("lasso: support_tol must be nonnegative");
}

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

SparseModel lasso_fit(const RegressionDataset& data, const LassoConfig& cfg,
                      const Eigen::VectorXd* warm_start) {
  return solve(data, full_mask(data.d()), cfg, warm_start);
}

SparseModel lasso_fit_restricted(const RegressionDataset& data, const FeatureSet& allowed,
                                 const LassoConfig& cfg, const Eigen::VectorXd* warm_start) {
  const auto mask = mask_from(allowed, data.d());
  if (allowed.empty()) {
    data.validate();
    return SparseModel{Eigen::VectorXd::Zero(data.x.cols()), cfg.support_tol};
  }
  return solve(data, mask, cfg, warm_start);
}

Eigen::VectorXd residual(const Eigen::VectorXd& theta, const RegressionDataset& data) {
  if (theta.size() != data.x.cols()) {
    throw InputError("model dimension does not match dataset");
  }
  return data.y - data.x * theta;
}

double risk(const Eigen::VectorXd& theta, const RegressionDataset& data, double lambda) {
  return residual(theta, data).squaredNorm() + 2.0 * lambda * theta.lpNorm<1>();
}

double risk(const SparseModel& model, const RegressionDataset& data, double lambda) {
  return risk(model.theta, data, lambda);
}

KktReport kkt_check(const SparseModel& model, const RegressionDataset& data, double lambda,
                    double tol) {
  return kkt_masked(model.theta, data, full_mask(data.d()), lambda, model.support_tol, tol);
}

KktReport kkt_check_restricted(const SparseModel& model, const RegressionDataset& data,
                               const FeatureSet& allowed, double lambda, double tol) {
  return kkt_masked(model.theta, data, mask_from(allowed, data.d()), lambda,
                    model.support_tol, tol);
}

double lambda_max(const RegressionDataset& data) {
  return correlate_columns(data.x, data.y).lpNorm<Eigen::Infinity>();
}

}  // namespace poisonsep
