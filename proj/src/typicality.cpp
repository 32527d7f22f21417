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

#include "poisonsep/typicality.hpp"

#include <cmath>
#include <sstream>

#include "poisonsep/errors.hpp"

namespace poisonsep {

std::string TypicalityReport::header() {
  return "col_norm_max,col_norm_threshold,incoherence_value,incoherence_threshold,"
         "min_eigenvalue,eigenvalue_threshold,noise_value,noise_threshold,"
         "column_normalization,incoherence,restricted_convexity,bounded_noise,passed";
}

std::string TypicalityReport::csv_row() const {
  std::ostringstream out;
  out.precision(10);
  auto opt = [&](const std::optional<double>& v) {
    if (v) {
      out << *v;
    } else {
      out << "NA";
    }
  };
  out << col_norm_max << ',' << col_norm_threshold << ',';
  opt(incoherence_value);
  out << ',' << incoherence_threshold << ',' << min_eigenvalue << ',' << eigenvalue_threshold
      << ',';
  opt(noise_value);
  out << ',' << noise_threshold << ',' << column_normalization << ',' << incoherence << ','
      << restricted_convexity << ',' << bounded_noise << ',' << passed;
  return out.str();
}

TypicalityReport check_typical(const Eigen::VectorXd& theta_star, const RegressionDataset& data,
                               double psi, double sigma) {
  data.validate();
  if (static_cast<std::size_t>(theta_star.size()) != data.d()) {
    throw InputError("check_typical: theta_star has the wrong length");
  }
  std::vector<Eigen::Index> in, out;
  for (Eigen::Index j = 0; j < theta_star.size(); ++j) {
    (theta_star[j] != 0.0 ? in : out).push_back(j);
  }
  if (in.empty()) throw PreconditionError("check_typical: theta_star has empty support");

  const auto n = static_cast<double>(data.n());
  const auto d = static_cast<double>(data.d());
  TypicalityReport rep;
  rep.col_norm_threshold = std::sqrt(n);
  rep.eigenvalue_threshold = psi;
  rep.noise_threshold = 2.0 * sigma * std::sqrt(n * std::log(d));

  rep.col_norm_max = data.x.colwise().norm().maxCoeff();
  rep.column_normalization = rep.col_norm_max <= rep.col_norm_threshold;

  const auto s = static_cast<Eigen::Index>(in.size());
  const auto o = static_cast<Eigen::Index>(out.size());
  Eigen::MatrixXd xi(data.x.rows(), s), xo(data.x.rows(), o);
  Eigen::VectorXd sgn(s);
  for (Eigen::Index k = 0; k < s; ++k) {
    xi.col(k) = data.x.col(in[static_cast<std::size_t>(k)]);
    sgn[k] = sign_pm(theta_star[in[static_cast<std::size_t>(k)]]);
  }
  for (Eigen::Index k = 0; k < o; ++k) xo.col(k) = data.x.col(out[static_cast<std::size_t>(k)]);

  const Eigen::MatrixXd gram = xi.transpose() * xi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  rep.restricted_convexity = rep.min_eigenvalue >= psi;

  // Singular (numerically or exactly) X_IᵀX_I leaves conditions 2 and 4
  // undefined.
  const double scale = std::max(1.0, eig.eigenvalues().maxCoeff());
  if (!(rep.min_eigenvalue > 1e-12 * scale)) {
    rep.passed = false;
    return rep;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd w = data.y - data.x * theta_star;

  const Eigen::VectorXd incoh = xo.transpose() * (xi * ldlt.solve(sgn));
  rep.incoherence_value = o == 0 ? 0.0 : incoh.lpNorm<Eigen::Infinity>();
  rep.incoherence = *rep.incoherence_value <= rep.incoherence_threshold;

  const Eigen::VectorXd projected = w - xi * ldlt.solve(xi.transpose() * w);
  const Eigen::VectorXd noise = xo.transpose() * projected;
  rep.noise_value = o == 0 ? 0.0 : noise.lpNorm<Eigen::Infinity>();
  rep.bounded_noise = *rep.noise_value <= rep.noise_threshold;

  rep.passed = rep.column_normalization && rep.incoherence && rep.restricted_convexity &&
               rep.bounded_noise;
  return rep;
}

double lambda_rule(LambdaRuleKind kind, std::size_t n, std::size_t d, double sigma,
                   std::size_t k, double eps) {
  if (n < 1 || d < 1) throw InputError("lambda_rule: n and d must be positive");
  if (!(sigma > 0.0)) throw InputError("lambda_rule: sigma must be positive");
  const auto nn = static_cast<double>(n);
  const auto dd = static_cast<double>(d);
  switch (kind) {
    case LambdaRuleKind::kD2:
    case LambdaRuleKind::kD4:
      return 4.0 * sigma * std::sqrt(nn * std::log(dd));
    case LambdaRuleKind::kSynthetic:
      return 2.0 * sigma * std::sqrt(nn * std::log(dd));
    case LambdaRuleKind::kOblivious: {
      if (!(eps > 0.0)) throw InputError("lambda_rule: eps must be positive");
      const double kk = static_cast<double>(k);
      return 2.0 * kk + sigma * std::sqrt(2.0 * (nn + kk) * std::log(2.0 / eps));
    }
    case LambdaRuleKind::kFixed:
      break;
  }
  throw InputError("lambda_rule: fixed rules carry their own value");
}

double LambdaRule::operator()(std::size_t n, std::size_t d) const {
  if (kind == LambdaRuleKind::kFixed) return fixed;
  return lambda_rule(kind, n, d, sigma, k, eps);
}

std::string LambdaRule::describe() const {
  std::ostringstream out;
  switch (kind) {
    case LambdaRuleKind::kD2: out << "d2(sigma=" << sigma << ")"; break;
    case LambdaRuleKind::kD4: out << "d4(sigma=" << sigma << ")"; break;
    case LambdaRuleKind::kSynthetic: out << "synthetic(sigma=" << sigma << ")"; break;
    case LambdaRuleKind::kOblivious:
      out << "oblivious(sigma=" << sigma << ",k=" << k << ",eps=" << eps << ")";
      break;
    case LambdaRuleKind::kFixed: out << "fixed(" << fixed << ")"; break;
  }
  return out.str();
}

LambdaRule parse_lambda_rule(const std::string& name) {
  LambdaRule rule;
  if (name == "d2" || name == "D2") {
    rule.kind = LambdaRuleKind::kD2;
  } else if (name == "d4" || name == "D4") {
    rule.kind = LambdaRuleKind::kD4;
  } else if (name == "synthetic" || name == "synth") {
    rule.kind = LambdaRuleKind::kSynthetic;
  } else if (name == "oblivious") {
    rule.kind = LambdaRuleKind::kOblivious;
  } else {
    throw InputError("unknown lambda rule '" + name + "' (expected d2, d4, synthetic, oblivious)");
  }
  return rule;
}

double sample_ratio(std::size_t n, std::size_t s, std::size_t d) {
  if (s < 1 || d < 2) throw InputError("sample_ratio: need s >= 1 and d >= 2");
  return static_cast<double>(n) / (static_cast<double>(s) * std::log(static_cast<double>(d)));
}

double min_sample_rule_D2(double s, double d, double psi, double sigma, double alpha) {
  if (!(s > 0 && d > 0 && psi > 0 && sigma > 0 && alpha > 0)) {
    throw InputError("min_sample_rule: parameters must be positive");
  }
  return 16.0 * sigma / (psi * alpha) * std::sqrt(s * std::log(d));
}

double min_sample_rule_D3(double s, double d, double k, double psi, double sigma, double alpha) {
  if (!(k >= 0)) throw InputError("min_sample_rule: k must be nonnegative");
  const double first = min_sample_rule_D2(s, d, psi, sigma, alpha);
  const double inv = 1.0 / psi + 1.0;
  const double second = 4.0 * std::pow(s, 4) * k * k * inv * inv / (std::log(d) * sigma * sigma);
  return std::max(first, second);
}

double theta_margin(const Eigen::VectorXd& theta_star) {
  double best = 1.0;
  bool any = false;
  for (Eigen::Index i = 0; i < theta_star.size(); ++i) {
    const double t = theta_star[i];
    if (t == 0.0) continue;
    if (!(t > 0.0 && t < 1.0)) throw InputError("theta_margin: entries must lie in (0, 1)");
    best = std::min(best, std::min(t, 1.0 - t));
    any = true;
  }
  if (!any) throw PreconditionError("theta_margin: theta_star has empty support");
  return best;
}

}  // namespace poisonsep
