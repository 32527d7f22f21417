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


#include "poisonsep/games.hpp"

#include <algorithm>
#include <sstream>

#include "poisonsep/errors.hpp"
#include "poisonsep/rng.hpp"
#include "poisonsep/stability.hpp"

namespace poisonsep {
namespace {

bool contains(const FeatureSet& s, std::size_t i) {
  return std::binary_search(s.begin(), s.end(), i);
}

std::uint64_t adversary_seed(std::uint64_t seed) {
  return derive_seed(seed, static_cast<std::uint64_t>(Stream::kAdversary));
}

RegressionDataset challenger_sample(const GaussianDistribution& dist, std::uint64_t seed) {
  GaussianSpec spec;
  static_cast<GaussianDistribution&>(spec) = dist;
  spec.seed = seed;
  return sample_dataset(spec);
}

PoisonSet canonical_rows(const FeatureChoice& choice, std::size_t k, std::size_t d) {
  if (k == 0) return PoisonSet::empty(d);
  return feature_injection_attack(choice.feature, k, choice.sign, d);
}

GameOutcome play(const GameSpec& spec, const RegressionDataset& data, Attack attack,
                 GameMode mode, double fraction, std::uint64_t seed) {
  GameOutcome out;
  out.seed = seed;
  out.mode = mode;
  out.chosen_feature = attack.feature;
  const std::size_t d = spec.distribution.d;

  const SparseModel clean = lasso_fit(data, spec.selector);
  out.clean_support = clean.support();

  if (attack.poison.k() > spec.budget_k) {
    out.disqualified = true;
    out.disqualification = "poison exceeds the budget";
  } else if (attack.poison.k() > 0 && static_cast<std::size_t>(attack.poison.x.cols()) != d) {
    out.disqualified = true;
    out.disqualification = "poison has the wrong width";
  } else if (attack.poison.x.rows() != attack.poison.y.size()) {
    out.disqualified = true;
    out.disqualification = "poison rows and labels differ in length";
  } else if (auto bad = attack.poison.first_violation(spec.filter)) {
    out.disqualified = true;
    out.disqualification = "row " + std::to_string(*bad) + " violates " + spec.filter.describe();
  }

  if (out.disqualified || attack.poison.k() == 0) {
    out.poisoned_support = out.clean_support;
  } else {
    const SparseModel poisoned = lasso_fit(stack(data, attack.poison), spec.selector, &clean.theta);
    out.poisoned_support = poisoned.support();
  }
  out.won = !out.disqualified && spec.win(out.clean_support, out.poisoned_support, attack.feature);
  out.poison = std::move(attack.poison);

  out.report.chosen_feature = out.chosen_feature.value_or(0);
  out.report.budget_used = out.disqualified ? 0 : out.poison.k();
  out.report.knowledge_fraction = fraction;
  out.report.won = out.won;
  return out;
}

}  // namespace

bool WinPredicate::operator()(const FeatureSet& clean, const FeatureSet& poisoned,
                              std::optional<std::size_t> declared_target) const {
  switch (kind) {
    case WinKind::kSupportChanged:
      return clean != poisoned;
    case WinKind::kFeatureAdded:
      return std::any_of(poisoned.begin(), poisoned.end(),
                         [&](std::size_t j) { return !contains(clean, j); });
    case WinKind::kFeatureRemoved:
      return std::any_of(clean.begin(), clean.end(),
                         [&](std::size_t j) { return !contains(poisoned, j); });
    case WinKind::kTargetedAdd: {
      const auto t = target ? target : declared_target;
      return t && contains(poisoned, *t) && !contains(clean, *t);
    }
  }
  return false;
}

std::string WinPredicate::describe() const {
  switch (kind) {
    case WinKind::kSupportChanged: return "support-changed";
    case WinKind::kFeatureAdded: return "feature-added";
    case WinKind::kFeatureRemoved: return "feature-removed";
    case WinKind::kTargetedAdd:
      return target ? "targeted-add(" + std::to_string(*target) + ")" : "targeted-add";
  }
  return "?";
}

void GameSpec::validate() const {
  distribution.validate();
  selector.validate();
  if (win.target && *win.target >= distribution.d) {
    throw InputError("game: targeted feature out of range");
  }
}

std::string to_string(GameMode mode) {
  switch (mode) {
    case GameMode::kOblivious: return "oblivious";
    case GameMode::kPartial: return "partial";
    case GameMode::kAware: return "aware";
  }
  return "?";
}

Attack FixedPoisonAdversary::commit(const AdversaryContext&) const {
  return {poison_, feature_};
}

Attack UniformCanonicalAdversary::commit(const AdversaryContext& ctx) const {
  const std::size_t d = ctx.distribution.d;
  if (ctx.budget_k == 0) return {PoisonSet::empty(d), std::nullopt};
  const FeatureChoice c = oblivious_select_uniform(d, ctx.distribution.true_support(), ctx.seed);
  return {canonical_rows(c, ctx.budget_k, d), c.feature};
}

Attack VoteCanonicalAdversary::commit(const AdversaryContext& ctx) const {
  const std::size_t d = ctx.distribution.d;
  if (ctx.budget_k == 0) return {PoisonSet::empty(d), std::nullopt};
  const FeatureChoice c = oblivious_select_vote(ctx.distribution, rule_, probes_, ctx.seed,
                                                ctx.selector, Execution::kSerial);
  return {canonical_rows(c, ctx.budget_k, d), c.feature};
}

Attack CanonicalAwareAdversary::attack(const RegressionDataset& observed, double fraction,
                                       const AdversaryContext& ctx) const {
  const std::size_t d = ctx.distribution.d;
  const std::size_t k = ctx.budget_k;
  if (k == 0) return {PoisonSet::empty(d), std::nullopt};

  if (fraction >= 1.0) {
    const SparseModel fit = lasso_fit(observed, ctx.selector);
    FeatureChoice c;
    try {
      c = aware_select(observed, fit);
    } catch (const NoTargetError&) {
      return {PoisonSet::empty(d), std::nullopt};
    }
    const std::size_t need = budget_from_alpha(alpha(observed, fit, c.feature), ctx.selector.lambda);
    const std::size_t rows = std::clamp<std::size_t>(need, 1, k);
    return {canonical_rows(c, rows, d), c.feature};
  }

  LambdaRule rule;
  if (partial_rule_) {
    rule = *partial_rule_;
  } else {
    rule.kind = LambdaRuleKind::kFixed;
    rule.fixed = ctx.selector.lambda;
  }
  const FeatureChoice c = partial_select(observed, d, rule, fraction, ctx.seed, ctx.selector);
  return {canonical_rows(c, k, d), c.feature};
}

Attack AwareAsOblivious::commit(const AdversaryContext& ctx) const {
  const RegressionDataset own = challenger_sample(ctx.distribution, derive_seed(ctx.seed, 1));
  return inner_->attack(own, 1.0, ctx);
}

GameOutcome run_obl_ftr_sel(const GameSpec& spec, const ObliviousAdversary& adversary,
                            std::uint64_t seed) {
  spec.validate();
  const AdversaryContext ctx{spec.distribution, spec.budget_k, spec.selector, adversary_seed(seed)};
  Attack attack = adversary.commit(ctx);
  const RegressionDataset data = challenger_sample(spec.distribution, seed);
  return play(spec, data, std::move(attack), GameMode::kOblivious, 0.0, seed);
}

GameOutcome run_awr_ftr_sel(const GameSpec& spec, const AwareAdversary& adversary,
                            std::uint64_t seed, double fraction) {
  spec.validate();
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InputError("aware game: revealed fraction must lie in (0, 1]");
  }
  const RegressionDataset data = challenger_sample(spec.distribution, seed);
  const AdversaryContext ctx{spec.distribution, spec.budget_k, spec.selector, adversary_seed(seed)};
  Attack attack;
  GameMode mode = GameMode::kAware;
  if (fraction >= 1.0) {
    attack = adversary.attack(data, 1.0, ctx);
  } else {
    mode = GameMode::kPartial;
    attack = adversary.attack(split_visible(data, fraction, seed).visible, fraction, ctx);
  }
  return play(spec, data, std::move(attack), mode, fraction, seed);
}

namespace {

AdvantageEstimate summarize(std::vector<GameOutcome> outcomes) {
  AdvantageEstimate est;
  est.trials = outcomes.size();
  for (const auto& o : outcomes) {
    est.wins += o.won ? 1 : 0;
    est.disqualified += o.disqualified ? 1 : 0;
  }
  est.advantage = static_cast<double>(est.wins) / static_cast<double>(est.trials);
  est.halfwidth = hoeffding_halfwidth(est.trials);
  est.outcomes = std::move(outcomes);
  return est;
}

}  // namespace

AdvantageEstimate estimate_advantage(const GameSpec& spec, const ObliviousAdversary& adversary,
                                     std::size_t trials, std::uint64_t seed, Execution exec) {
  if (trials == 0) throw InputError("estimate_advantage: need at least one trial");
  spec.validate();
  return summarize(map_indices<GameOutcome>(
      trials, [&](std::size_t t) { return run_obl_ftr_sel(spec, adversary, derive_seed(seed, t)); },
      exec));
}

AdvantageEstimate estimate_advantage(const GameSpec& spec, const AwareAdversary& adversary,
                                     std::size_t trials, std::uint64_t seed, double fraction,
                                     Execution exec) {
  if (trials == 0) throw InputError("estimate_advantage: need at least one trial");
  spec.validate();
  return summarize(map_indices<GameOutcome>(
      trials,
      [&](std::size_t t) {
        return run_awr_ftr_sel(spec, adversary, derive_seed(seed, t), fraction);
      },
      exec));
}

std::string outcome_csv_header() { return "seed,mode,k,won,chosen_feature,budget_used"; }

std::string outcome_csv_row(const GameOutcome& o, std::size_t budget_k) {
  std::ostringstream out;
  out << o.seed << ',' << to_string(o.mode) << ',' << budget_k << ',' << (o.won ? 1 : 0) << ',';
  if (o.chosen_feature) out << *o.chosen_feature;
  out << ',' << o.report.budget_used;
  return out.str();
}

}  // namespace poisonsep
