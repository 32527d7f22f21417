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


// The experiment commands behind the CLI. Each returns a table whose rows are
// in a fixed (grid, trial) order, plus a summary block that can be recomputed
// from the rows alone.
//
// CSV layout:
//   # poisonsep <command> <UTC time> key=value ...     (config echo)
//   # note: ...                                         (zero or more)
//   col1,col2,...
//   rows
//   #summary-columns,<group cols>,<v>_n,<v>_mean,<v>_stderr,...
//   #summary,...

#ifndef POISONSEP_EXPERIMENTS_HPP_
#define POISONSEP_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poisonsep/typicality.hpp"

namespace poisonsep {

struct ExperimentConfig {
  std::size_t n = 100;
  std::size_t d = 500;
  std::size_t s = 5;
  double theta_value = 0.75;
  double sigma_x = 1.0;
  double sigma_w = 1.0;
  std::optional<double> lambda;  // overrides the rule
  LambdaRuleKind rule = LambdaRuleKind::kSynthetic;
  std::size_t k = 5;
  double eps1 = 0.05;  // oblivious λ rule
  std::vector<double> p_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> eps_grid{0.0, 0.05, 0.1, 0.15, 0.2};
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::size_t m = 1000;
  std::string mode = "aware";          // game: oblivious | partial | aware
  double p = 0.5;                      // game, partial mode
  std::string adversary = "canonical"; // game: canonical | uniform | vote | blind
  std::string win = "support-changed";
  std::size_t probes = 10;
  std::optional<double> psi;           // default n·σ_x²/2
  std::string data_path;               // attack-budget
  bool standardize = false;            // attack-budget, loaded data
  bool empirical = false;              // attack-budget
  bool long_mode = false;

  // The rule with σ, k and ε filled in: σ_x for the oblivious rule, σ_w
  // otherwise. A fixed rule when --lambda is given.
  LambdaRule effective_rule() const;
  double resolved_psi() const { return psi ? *psi : static_cast<double>(n) * sigma_x * sigma_x / 2; }
};

ExperimentConfig synth_sep_defaults();
ExperimentConfig class_sep_defaults();
ExperimentConfig recover_check_defaults();
ExperimentConfig attack_budget_defaults();
ExperimentConfig game_defaults();
ExperimentConfig typicality_defaults();

struct CsvTable {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> group_by;
  std::vector<std::string> values;
  std::vector<std::vector<std::string>> summary;  // filled by summarize()

  void summarize();
};

struct ExperimentResult {
  CsvTable table;
  std::vector<std::string> assertion_failures;
};

ExperimentResult synth_sep(const ExperimentConfig& cfg);
ExperimentResult class_sep(const ExperimentConfig& cfg);
ExperimentResult recover_check(const ExperimentConfig& cfg);
ExperimentResult attack_budget(const ExperimentConfig& cfg);
ExperimentResult game(const ExperimentConfig& cfg);
ExperimentResult typicality(const ExperimentConfig& cfg);

std::string format_double(double v);
std::string utc_timestamp();

void write_table(std::ostream& out, const CsvTable& table, const std::string& timestamp);

struct AuditReport {
  bool ok = true;
  std::size_t rows = 0;
  std::size_t summary_rows = 0;
  std::vector<std::string> mismatches;
};

// Parses a table written by write_table and recomputes its summary block.
AuditReport audit_csv(std::istream& in, double rel_tol = 1e-9);

}  // namespace poisonsep

#endif  // POISONSEP_EXPERIMENTS_HPP_
