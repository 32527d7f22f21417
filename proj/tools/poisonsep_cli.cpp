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


#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "poisonsep/errors.hpp"
#include "poisonsep/experiments.hpp"

namespace {

using poisonsep::ExperimentConfig;
using poisonsep::ExperimentResult;

constexpr int kExitInput = 1;
constexpr int kExitAssertion = 2;

struct Command {
  ExperimentConfig cfg;
  std::string lambda_rule;
  std::string out = "-";
  bool audit = false;
  ExperimentResult (*run)(const ExperimentConfig&) = nullptr;
};

void add_common(CLI::App* sub, Command& c) {
  ExperimentConfig& cfg = c.cfg;
  sub->add_option("--n", cfg.n, "Sample size")->capture_default_str();
  sub->add_option("--d", cfg.d, "Dimension")->capture_default_str();
  sub->add_option("--s", cfg.s, "Support size of theta*")->capture_default_str();
  sub->add_option("--theta", cfg.theta_value, "Value of the nonzero theta* entries")
      ->capture_default_str();
  sub->add_option("--sigma-x", cfg.sigma_x, "Feature standard deviation")->capture_default_str();
  sub->add_option("--sigma-w", cfg.sigma_w, "Noise standard deviation")->capture_default_str();
  auto* lambda = sub->add_option("--lambda", cfg.lambda, "Fixed regularization strength");
  auto* rule = sub->add_option("--lambda-rule", c.lambda_rule,
                               "Regularization rule: d2, d4, synthetic, oblivious");
  lambda->excludes(rule);
  sub->add_option("--k", cfg.k, "Poison budget (rows)")->capture_default_str();
  sub->add_option("--eps1", cfg.eps1, "Target failure probability for the oblivious rule")
      ->capture_default_str();
  sub->add_option("--trials", cfg.trials, "Number of seeded trials")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  sub->add_option("--out", c.out, "Output CSV path ('-' for stdout)")->capture_default_str();
  sub->add_flag("--long", cfg.long_mode, "Allow dimensions above 20000");
  sub->add_flag("--audit", c.audit, "Recompute the summary block from the written rows");
}

int emit(const Command& c, const std::string& name) {
  ExperimentConfig cfg = c.cfg;
  if (!c.lambda_rule.empty()) cfg.rule = poisonsep::parse_lambda_rule(c.lambda_rule).kind;
  const ExperimentResult res = c.run(cfg);

  std::ostringstream buf;
  poisonsep::write_table(buf, res.table, poisonsep::utc_timestamp());
  if (c.out == "-") {
    std::cout << buf.str();
  } else {
    std::ofstream file(c.out);
    if (!file) throw poisonsep::InputError("cannot write " + c.out);
    file << buf.str();
    if (!file) throw poisonsep::InputError("failed writing " + c.out);
    std::cerr << name << ": wrote " << res.table.rows.size() << " rows to " << c.out << '\n';
  }
  for (const auto& note : res.table.notes) std::cerr << name << ": " << note << '\n';

  int code = 0;
  if (c.audit) {
    std::istringstream in(buf.str());
    const auto rep = poisonsep::audit_csv(in);
    std::cerr << name << ": audit " << (rep.ok ? "ok" : "FAILED") << " (" << rep.rows
              << " rows, " << rep.summary_rows << " summary rows)\n";
    for (const auto& m : rep.mismatches) std::cerr << "  " << m << '\n';
    if (!rep.ok) code = kExitAssertion;
  }
  for (const auto& f : res.assertion_failures) std::cerr << name << ": assertion failed: " << f << '\n';
  if (!res.assertion_failures.empty()) code = kExitAssertion;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisoning experiments for LASSO feature selection and 2D halfspaces"};
  app.require_subcommand(1);

  std::map<std::string, Command> commands;
  commands["synth-sep"] = {poisonsep::synth_sep_defaults(), "", "-", false, &poisonsep::synth_sep};
  commands["class-sep"] = {poisonsep::class_sep_defaults(), "", "-", false, &poisonsep::class_sep};
  commands["recover-check"] = {poisonsep::recover_check_defaults(), "", "-", false,
                               &poisonsep::recover_check};
  commands["attack-budget"] = {poisonsep::attack_budget_defaults(), "", "-", false,
                               &poisonsep::attack_budget};
  commands["game"] = {poisonsep::game_defaults(), "", "-", false, &poisonsep::game};
  commands["typicality"] = {poisonsep::typicality_defaults(), "", "-", false,
                            &poisonsep::typicality};

  const std::map<std::string, std::string> help = {
      {"synth-sep", "Poison budget of the attacked feature versus the visible fraction p"},
      {"class-sep", "Risk of aware and oblivious attacks on 2D halfspace ERM"},
      {"recover-check", "Support recovery rate and typicality diagnostics"},
      {"attack-budget", "Per-feature correlation and injection budget"},
      {"game", "Monte Carlo advantage in the feature-selection game"},
      {"typicality", "Typical-system conditions over seeded designs"},
  };

  std::map<std::string, CLI::App*> subs;
  for (auto& [name, c] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, c);
    subs[name] = sub;
  }
  subs["synth-sep"]->add_option("--p-grid", commands["synth-sep"].cfg.p_grid,
                                "Visible fractions, comma separated")
      ->delimiter(',');
  subs["class-sep"]->add_option("--eps-grid", commands["class-sep"].cfg.eps_grid,
                                "Poison fractions, comma separated")
      ->delimiter(',');
  subs["class-sep"]->add_option("--m", commands["class-sep"].cfg.m, "Training points")
      ->capture_default_str();
  for (const char* name : {"recover-check", "typicality"}) {
    subs[name]->add_option("--psi", commands[name].cfg.psi,
                           "Restricted eigenvalue threshold (default n*sigma_x^2/2)");
  }
  {
    auto& cfg = commands["attack-budget"].cfg;
    auto* sub = subs["attack-budget"];
    sub->add_option("--data", cfg.data_path, "CSV dataset with header x1..xd,y")
        ->check(CLI::ExistingFile);
    sub->add_flag("--standardize", cfg.standardize, "Standardize loaded feature columns");
    sub->add_flag("--empirical", cfg.empirical, "Also search the smallest working budget");
  }
  {
    auto& cfg = commands["game"].cfg;
    auto* sub = subs["game"];
    sub->add_option("--mode", cfg.mode, "oblivious, partial or aware")->capture_default_str();
    sub->add_option("--p", cfg.p, "Revealed fraction in partial mode")->capture_default_str();
    sub->add_option("--adversary", cfg.adversary, "canonical, uniform, vote or blind")
        ->capture_default_str();
    sub->add_option("--win", cfg.win,
                    "support-changed, feature-added, feature-removed or targeted-add")
        ->capture_default_str();
    sub->add_option("--probes", cfg.probes, "Private samples for the vote adversary")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  for (auto& [name, c] : commands) {
    if (!subs[name]->parsed()) continue;
    try {
      return emit(c, name);
    } catch (const poisonsep::InputError& e) {
      std::cerr << name << ": " << e.what() << '\n';
      return kExitInput;
    } catch (const poisonsep::ParseError& e) {
      std::cerr << name << ": " << e.what() << '\n';
      return kExitInput;
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << '\n';
      return kExitAssertion;
    }
  }
  return kExitInput;
}
