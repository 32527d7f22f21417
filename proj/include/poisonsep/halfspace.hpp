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


// Concentric halfspaces in the plane under N(0, I₂) data: exact ERM, the
// injection and elimination attacks, and the risk games built on them.

#ifndef POISONSEP_HALFSPACE_HPP_
#define POISONSEP_HALFSPACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "poisonsep/parallel.hpp"

namespace poisonsep {

// x ↦ sign(⟨w, x⟩) with sign(0) = +1 and w = (cos angle, sin angle).
struct Halfspace {
  double angle = 0.0;  // [0, 2π)

  static Halfspace from_angle(double a);
  static Halfspace from_vector(const Eigen::Vector2d& w);
  Eigen::Vector2d w() const;
  int predict(const Eigen::Vector2d& x) const;
};

struct ClassificationDataset {
  Eigen::MatrixX2d points;
  Eigen::VectorXd labels;  // ±1

  std::size_t m() const { return static_cast<std::size_t>(points.rows()); }
  void validate() const;
};

ClassificationDataset append(const ClassificationDataset& a, const ClassificationDataset& b);
ClassificationDataset remove_rows(const ClassificationDataset& data,
                                  const std::vector<std::size_t>& rows);

// m points from N(0, I₂) (exact zeros redrawn), labelled by w_star.
ClassificationDataset sample_labeled(std::size_t m, const Halfspace& w_star, std::uint64_t seed);
Halfspace random_halfspace(std::uint64_t seed);

std::size_t empirical_errors(const Halfspace& h, const ClassificationDataset& data);
double empirical_risk(const Halfspace& h, const ClassificationDataset& data);

// Exact 0-1 minimizer over all concentric halfspaces by an angular sweep of
// the 2m boundary angles. Optimal angles form arcs; the arc with the
// smallest start angle is chosen and its midpoint returned.
Halfspace erm_halfspace(const ClassificationDataset& data);

// angle(w, w*)/π.
double population_risk(const Halfspace& w, const Halfspace& w_star);

// ⌈ε·m⌉, with products within 1e-9 of an integer taken as that integer.
std::size_t poison_count(double eps, std::size_t m);

// ⌈ε·m⌉ copies of d = cos(επ)·v̂ + sin(επ)·ŵ*, v ⟂ w*, labelled
// −sign(⟨w*, d⟩).
ClassificationDataset aware_poison_formula(const Halfspace& w_star, double eps, std::size_t m);

// Fits w₁ = ERM(clean), rotates it counterclockwise to w₂ disagreeing with w₁
// on ⌈ε·m⌉ − 1 training points (fewer if not available), and places ⌈ε·m⌉
// points on the boundary of w₂ labelled −1.
ClassificationDataset aware_poison_rotation(const ClassificationDataset& clean, double eps);
// The rotated halfspace used by aware_poison_rotation.
Halfspace rotation_target(const ClassificationDataset& clean, double eps);

enum class BaselineKind { kRepeatedPoint = 1, kSharedLabel = 2, kCoinLabels = 3 };

// (1) one random point repeated with one random label, (2) i.i.d. points
// sharing one random label, (3) i.i.d. points with independent labels.
ClassificationDataset oblivious_baseline(BaselineKind kind, double eps, std::size_t m,
                                         std::uint64_t seed);

// Rows where w_star and the halfspace rotated by πε/2 disagree, at most
// ⌊ε·m⌋ of them, those closest to w_star's boundary first. Ascending.
std::vector<std::size_t> aware_elimination(const ClassificationDataset& clean, double eps,
                                           const Halfspace& w_star);
// ⌊ε·m⌋ uniformly random distinct rows. Ascending.
std::vector<std::size_t> oblivious_elimination(std::size_t m, double eps, std::uint64_t seed);

enum class AwareStrategy { kRotation, kFormula, kElimination };
enum class ObliviousStrategy { kRepeatedPoint, kSharedLabel, kCoinLabels, kElimination };
std::string to_string(AwareStrategy s);
std::string to_string(ObliviousStrategy s);

struct RiskGameSpec {
  std::size_t m = 1000;
  double eps = 0.0;
  void validate() const;
};

struct RiskReport {
  double population_risk = 0.0;
  double empirical_risk = 0.0;  // on m fresh test points
  double clean_population_risk = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string mode;
  std::string strategy;
};

// w* uniform on the circle, m labelled training points, the attack, ERM on
// the modified set. The oblivious runner builds its poison from (ε, m, seed)
// before any data is drawn.
RiskReport run_obl_risk(const RiskGameSpec& spec, ObliviousStrategy strategy, std::uint64_t seed);
RiskReport run_awr_risk(const RiskGameSpec& spec, AwareStrategy strategy, std::uint64_t seed);
// Both runners with ε = 0 reduce to this.
RiskReport run_clean_risk(const RiskGameSpec& spec, std::uint64_t seed);

// seed,mode,kind,eps,population_risk,empirical_risk
std::string risk_csv_header();
std::string risk_csv_row(const RiskReport& r);

}  // namespace poisonsep

#endif  // POISONSEP_HALFSPACE_HPP_
