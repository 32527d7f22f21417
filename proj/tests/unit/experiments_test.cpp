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

#include <sstream>

#include "poisonsep/errors.hpp"
#include "poisonsep/experiments.hpp"

namespace poisonsep {
namespace {

ExperimentConfig tiny_synth() {
  ExperimentConfig cfg = synth_sep_defaults();
  cfg.d = 40;
  cfg.n = 40;
  cfg.trials = 2;
  cfg.p_grid = {0.0, 1.0};
  return cfg;
}

std::string render(const ExperimentResult& r) {
  std::ostringstream out;
  write_table(out, r.table, "2026-01-01T00:00:00Z");
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(SynthSep, SingleCellGivesOneRow) {
  ExperimentConfig cfg = tiny_synth();
  cfg.trials = 1;
  cfg.p_grid = {1.0};
  const auto r = synth_sep(cfg);
  EXPECT_EQ(r.table.rows.size(), 1u);
  EXPECT_EQ(r.table.summary.size(), 1u);
  EXPECT_TRUE(r.assertion_failures.empty());
}

TEST(SynthSep, OutputIsDeterministicAndAudits) {
  const std::string a = render(synth_sep(tiny_synth()));
  const std::string b = render(synth_sep(tiny_synth()));
  EXPECT_EQ(a, b);
  const auto lines = lines_of(a);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines.front().rfind("# poisonsep synth-sep 2026-01-01T00:00:00Z", 0), 0u);
  std::istringstream in(a);
  const AuditReport rep = audit_csv(in);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.rows, 4u);
  EXPECT_EQ(rep.summary_rows, 2u);
}

TEST(Audit, DetectsTamperedRow) {
  auto r = synth_sep(tiny_synth());
  // Columns: p, seed, chosen_feature, budget.
  r.table.rows.back().back() = "9999";
  const std::string text = render(r);
  std::istringstream in(text);
  const AuditReport rep = audit_csv(in);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.mismatches.empty());
}

TEST(ClassSep, ZeroEpsHasLowRisk) {
  ExperimentConfig cfg = class_sep_defaults();
  cfg.eps_grid = {0.0};
  cfg.trials = 3;
  const auto r = class_sep(cfg);
  ASSERT_FALSE(r.table.rows.empty());
  const auto& cols = r.table.columns;
  const auto pos = std::find(cols.begin(), cols.end(), "population_risk") - cols.begin();
  for (const auto& row : r.table.rows) EXPECT_LT(std::stod(row[pos]), 0.01);
  std::istringstream in(render(r));
  EXPECT_TRUE(audit_csv(in).ok);
}

TEST(Experiments, InputErrors) {
  ExperimentConfig cfg = tiny_synth();
  cfg.trials = 0;
  EXPECT_THROW(synth_sep(cfg), InputError);
  cfg = tiny_synth();
  cfg.p_grid = {1.5};
  EXPECT_THROW(synth_sep(cfg), InputError);
  cfg = tiny_synth();
  cfg.d = 30000;
  EXPECT_THROW(synth_sep(cfg), InputError);
  ExperimentConfig g = game_defaults();
  g.mode = "sideways";
  EXPECT_THROW(game(g), InputError);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
}

}  // namespace
}  // namespace poisonsep
