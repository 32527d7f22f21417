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


// Executable feature-selection security games. The challenger samples
// S ← Dⁿ, the adversary contributes k filter-compliant rows, and the game is
// won when the LASSO support of S ∪ poison differs from that of S in the way
// the win predicate asks for.
//
// Oblivious adversaries commit before S exists and never see it; aware
// adversaries receive S (or a random ⌈p·n⌉-row part of it).

#ifndef POISONSEP_GAMES_HPP_
#define POISONSEP_GAMES_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poisonsep/attacks.hpp"
#include "poisonsep/data.hpp"
#include "poisonsep/lasso.hpp"
#include "poisonsep/parallel.hpp"
#include "poisonsep/poison.hpp"
#include "poisonsep/typicality.hpp"

namespace poisonsep {

enum class WinKind { kSupportChanged, kFeatureAdded, kFeatureRemoved, kTargetedAdd };

struct WinPredicate {
  WinKind kind = WinKind::kSupportChanged;
  // Targeted-add only. When empty the adversary's declared target is used.
  std::optional<std::size_t> target;

  static WinPredicate support_changed() { return {}; }
  static WinPredicate feature_added() { return {WinKind::kFeatureAdded, std::nullopt}; }
  static WinPredicate feature_removed() { return {WinKind::kFeatureRemoved, std::nullopt}; }
  static WinPredicate targeted_add(std::optional<std::size_t> i = std::nullopt) {
    return {WinKind::kTargetedAdd, i};
  }

  bool operator()(const FeatureSet& clean, const FeatureSet& poisoned,
                  std::optional<std::size_t> declared_target = std::nullopt) const;
  std::string describe() const;
};

struct GameSpec {
  std::size_t budget_k = 0;
  GaussianDistribution distribution;  // n is the challenger's sample size
  LassoConfig selector;
  NormFilter filter = NormFilter::linf_unit();
  WinPredicate win;

  void validate() const;
};

enum class GameMode { kOblivious, kPartial, kAware };
std::string to_string(GameMode mode);

// What the adversary produces: the rows and, optionally, the feature it aims at.
struct Attack {
  PoisonSet poison;
  std::optional<std::size_t> feature;
};

// Public game parameters. Holds no sampled data.
struct AdversaryContext {
  const GaussianDistribution& distribution;
  std::size_t budget_k;
  const LassoConfig& selector;
  std::uint64_t seed;
};

class ObliviousAdversary {
 public:
  virtual ~ObliviousAdversary() = default;
  virtual Attack commit(const AdversaryContext& ctx) const = 0;
  virtual std::string name() const = 0;
};

class AwareAdversary {
 public:
  virtual ~AwareAdversary() = default;
  // `observed` is the whole sample when fraction = 1, else a random subset.
  virtual Attack attack(const RegressionDataset& observed, double fraction,
                        const AdversaryContext& ctx) const = 0;
  virtual std::string name() const = 0;
};

// Always submits the same rows.
class FixedPoisonAdversary : public ObliviousAdversary {
 public:
  explicit FixedPoisonAdversary(PoisonSet poison, std::optional<std::size_t> feature = std::nullopt)
      : poison_(std::move(poison)), feature_(feature) {}
  Attack commit(const AdversaryContext& ctx) const override;
  std::string name() const override { return "fixed"; }

 private:
  PoisonSet poison_;
  std::optional<std::size_t> feature_;
};

// k canonical rows on a uniformly drawn feature outside Supp(θ*), label +1.
class UniformCanonicalAdversary : public ObliviousAdversary {
 public:
  Attack commit(const AdversaryContext& ctx) const override;
  std::string name() const override { return "uniform"; }
};

// k canonical rows on the feature that most often wins aware_select over
// `probes` private samples from D.
class VoteCanonicalAdversary : public ObliviousAdversary {
 public:
  VoteCanonicalAdversary(LambdaRule rule, std::size_t probes) : rule_(rule), probes_(probes) {}
  Attack commit(const AdversaryContext& ctx) const override;
  std::string name() const override { return "vote"; }

 private:
  LambdaRule rule_;
  std::size_t probes_;
};

// The canonical injection on the most vulnerable observed feature, using
// min(k, theoretical budget) rows. On a partial view λ is recomputed by
// `partial_rule` at the visible row count (the selector's λ if unset) and
// all k rows are spent.
class CanonicalAwareAdversary : public AwareAdversary {
 public:
  explicit CanonicalAwareAdversary(std::optional<LambdaRule> partial_rule = std::nullopt)
      : partial_rule_(partial_rule) {}
  Attack attack(const RegressionDataset& observed, double fraction,
                const AdversaryContext& ctx) const override;
  std::string name() const override { return "canonical"; }

 private:
  std::optional<LambdaRule> partial_rule_;
};

// Runs an aware adversary on a dataset it samples from D itself, then
// commits that poison. The same strategy deprived of the challenger's sample.
class AwareAsOblivious : public ObliviousAdversary {
 public:
  explicit AwareAsOblivious(std::shared_ptr<const AwareAdversary> inner)
      : inner_(std::move(inner)) {}
  Attack commit(const AdversaryContext& ctx) const override;
  std::string name() const override { return inner_->name() + "-blind"; }

 private:
  std::shared_ptr<const AwareAdversary> inner_;
};

struct GameOutcome {
  bool won = false;
  bool disqualified = false;
  std::string disqualification;
  FeatureSet clean_support;
  FeatureSet poisoned_support;
  PoisonSet poison;
  std::uint64_t seed = 0;
  GameMode mode = GameMode::kOblivious;
  AdversaryReport report;
  std::optional<std::size_t> chosen_feature;
};

GameOutcome run_obl_ftr_sel(const GameSpec& spec, const ObliviousAdversary& adversary,
                            std::uint64_t seed);
// fraction = 1 is the fully aware game; 0 < fraction < 1 reveals a random
// ⌈fraction·n⌉-row subset.
GameOutcome run_awr_ftr_sel(const GameSpec& spec, const AwareAdversary& adversary,
                            std::uint64_t seed, double fraction = 1.0);

struct AdvantageEstimate {
  double advantage = 0.0;
  std::size_t wins = 0;
  std::size_t disqualified = 0;
  std::size_t trials = 0;
  double halfwidth = 0.0;  // 95% Hoeffding
  std::vector<GameOutcome> outcomes;  // in trial order
};

// Trial t plays with seed derive_seed(seed, t).
AdvantageEstimate estimate_advantage(const GameSpec& spec, const ObliviousAdversary& adversary,
                                     std::size_t trials, std::uint64_t seed,
                                     Execution exec = default_execution());
AdvantageEstimate estimate_advantage(const GameSpec& spec, const AwareAdversary& adversary,
                                     std::size_t trials, std::uint64_t seed,
                                     double fraction = 1.0,
                                     Execution exec = default_execution());

// seed,mode,k,won,chosen_feature,budget_used
std::string outcome_csv_header();
std::string outcome_csv_row(const GameOutcome& outcome, std::size_t budget_k);

}  // namespace poisonsep

#endif  // POISONSEP_GAMES_HPP_
