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

#include "poisonsep/poison.hpp"

#include <cmath>
#include <sstream>

#include "poisonsep/errors.hpp"

namespace poisonsep {

bool NormFilter::admits(const Eigen::Ref<const Eigen::RowVectorXd>& features,
                        double label) const {
  if (!features.allFinite() || !std::isfinite(label)) return false;
  double norm = 0.0;
  switch (feature_norm) {
    case FeatureNorm::kL1: norm = features.lpNorm<1>(); break;
    case FeatureNorm::kL2: norm = features.norm(); break;
    case FeatureNorm::kLinf:
      norm = features.size() == 0 ? 0.0 : features.lpNorm<Eigen::Infinity>();
      break;
  }
  if (norm > feature_bound) return false;
  if (std::abs(label) > label_bound) return false;
  if (entry_box) {
    if (features.size() > 0 && features.cwiseAbs().maxCoeff() > 1.0) return false;
    if (std::abs(label) > 1.0) return false;
  }
  return true;
}

std::string NormFilter::describe() const {
  std::ostringstream out;
  switch (feature_norm) {
    case FeatureNorm::kL1: out << "l1"; break;
    case FeatureNorm::kL2: out << "l2"; break;
    case FeatureNorm::kLinf: out << "linf"; break;
  }
  out << "<=" << feature_bound << ",|y|<=" << label_bound;
  if (entry_box) out << ",box";
  return out.str();
}

PoisonSet PoisonSet::empty(std::size_t d, NormFilter filter) {
  PoisonSet p;
  p.x.resize(0, static_cast<Eigen::Index>(d));
  p.y.resize(0);
  p.declared_filter = filter;
  return p;
}

std::optional<std::size_t> PoisonSet::first_violation(const NormFilter& filter) const {
  if (x.rows() != y.size()) throw InputError("poison set: rows and labels differ in length");
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    if (!filter.admits(x.row(r), y[r])) return static_cast<std::size_t>(r);
  }
  return std::nullopt;
}

RegressionDataset stack(const RegressionDataset& clean, const PoisonSet& poison) {
  return stack(clean, poison.x, poison.y);
}

PoisonSet feature_injection_attack(std::size_t i, std::size_t k, int b, std::size_t d) {
  if (i >= d) throw InputError("feature_injection_attack: feature id out of range");
  if (k < 1) throw InputError("feature_injection_attack: need at least one row");
  if (b != 1 && b != -1) throw InputError("feature_injection_attack: sign must be +1 or -1");
  PoisonSet p;
  p.x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  p.x.col(static_cast<Eigen::Index>(i)).setOnes();
  p.y = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), static_cast<double>(b));
  p.declared_filter = NormFilter::linf_unit();
  return p;
}

}  // namespace poisonsep
