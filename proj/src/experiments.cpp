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


#include "poisonsep/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "poisonsep/attacks.hpp"
#include "poisonsep/data.hpp"
#include "poisonsep/errors.hpp"
#include "poisonsep/games.hpp"
#include "poisonsep/halfspace.hpp"
#include "poisonsep/parallel.hpp"
#include "poisonsep/rng.hpp"
#include "poisonsep/stability.hpp"

namespace poisonsep {
namespace {

constexpr std::size_t kLongModeDimension = 20000;

std::uint64_t trial_seed(std::uint64_t master, std::size_t t) { return derive_seed(master, t); }

std::uint64_t sub_seed(std::uint64_t seed, Stream s) {
  return derive_seed(seed, static_cast<std::uint64_t>(s));
}

std::string fmt(std::size_t v) { return std::to_string(v); }

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_double(v[i]);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::vector<std::string>> aggregate(const std::vector<std::string>& columns,
                                                const std::vector<std::vector<std::string>>& rows,
                                                const std::vector<std::string>& group_by,
                                                const std::vector<std::string>& values) {
  const auto index_of = [&](const std::string& name) {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InputError("summary: unknown column " + name);
    return static_cast<std::size_t>(it - columns.begin());
  };
  std::vector<std::size_t> gidx, vidx;
  for (const auto& g : group_by) gidx.push_back(index_of(g));
  for (const auto& v : values) vidx.push_back(index_of(v));

  std::vector<std::vector<std::string>> keys;
  std::vector<std::vector<std::vector<double>>> samples;
  for (const auto& row : rows) {
    std::vector<std::string> key;
    for (std::size_t g : gidx) key.push_back(row.at(g));
    auto it = std::find(keys.begin(), keys.end(), key);
    std::size_t slot;
    if (it == keys.end()) {
      keys.push_back(key);
      samples.emplace_back(vidx.size());
      slot = keys.size() - 1;
    } else {
      slot = static_cast<std::size_t>(it - keys.begin());
    }
    for (std::size_t k = 0; k < vidx.size(); ++k) {
      if (auto v = parse_number(row.at(vidx[k]))) samples[slot][k].push_back(*v);
    }
  }

  std::vector<std::vector<std::string>> out;
  for (std::size_t g = 0; g < keys.size(); ++g) {
    std::vector<std::string> line = keys[g];
    for (const auto& xs : samples[g]) {
      const double count = static_cast<double>(xs.size());
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean = xs.empty() ? 0.0 : mean / count;
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double se = xs.size() < 2 ? 0.0 : std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
      line.push_back(fmt(xs.size()));
      line.push_back(format_double(mean));
      line.push_back(format_double(se));
    }
    out.push_back(std::move(line));
  }
  return out;
}

void require_trials(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InputError("trials must be at least 1");
}

void require_regression(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.d < 1) throw InputError("n and d must be positive");
  if (cfg.s > cfg.d) throw InputError("s must not exceed d");
  if (!(cfg.sigma_x > 0.0)) throw InputError("sigma-x must be positive");
  if (!(cfg.sigma_w >= 0.0)) throw InputError("sigma-w must be nonnegative");
  if (!(cfg.theta_value > 0.0 && cfg.theta_value < 1.0)) {
    throw InputError("theta value must lie in (0, 1)");
  }
  if (cfg.lambda && !(*cfg.lambda > 0.0)) throw InputError("lambda must be positive");
  if (cfg.d > kLongModeDimension && !cfg.long_mode) {
    throw InputError("d > " + fmt(kLongModeDimension) + " is a long run; pass --long to confirm");
  }
}

GaussianSpec regression_spec(const ExperimentConfig& cfg, std::uint64_t seed) {
  GaussianSpec spec;
  spec.n = cfg.n;
  spec.d = cfg.d;
  spec.sigma_x = cfg.sigma_x;
  spec.sigma_w = cfg.sigma_w;
  spec.theta_star = make_theta_star(cfg.d, cfg.s, cfg.theta_value, sub_seed(seed, Stream::kLabels));
  spec.seed = seed;
  return spec;
}

void echo_regression(CsvTable& t, const ExperimentConfig& cfg) {
  t.config.emplace_back("n", fmt(cfg.n));
  t.config.emplace_back("d", fmt(cfg.d));
  t.config.emplace_back("s", fmt(cfg.s));
  t.config.emplace_back("theta", format_double(cfg.theta_value));
  t.config.emplace_back("sigma_x", format_double(cfg.sigma_x));
  t.config.emplace_back("sigma_w", format_double(cfg.sigma_w));
  t.config.emplace_back("lambda_rule", cfg.effective_rule().describe());
}

}  // namespace

LambdaRule ExperimentConfig::effective_rule() const {
  LambdaRule r;
  if (lambda) {
    r.kind = LambdaRuleKind::kFixed;
    r.fixed = *lambda;
    return r;
  }
  r.kind = rule;
  r.sigma = rule == LambdaRuleKind::kOblivious ? sigma_x : sigma_w;
  r.k = k;
  r.eps = eps1;
  return r;
}

ExperimentConfig synth_sep_defaults() { return {}; }

ExperimentConfig class_sep_defaults() {
  ExperimentConfig c;
  c.trials = 20;
  c.m = 1000;
  return c;
}

ExperimentConfig recover_check_defaults() {
  ExperimentConfig c;
  c.n = 400;
  c.d = 64;
  c.s = 4;
  c.sigma_x = 0.5;
  c.sigma_w = 0.25;
  c.rule = LambdaRuleKind::kD4;
  c.trials = 40;
  return c;
}

ExperimentConfig attack_budget_defaults() {
  ExperimentConfig c;
  c.n = 100;
  c.d = 50;
  c.s = 4;
  c.sigma_x = 1.0;
  c.sigma_w = 0.5;
  return c;
}

ExperimentConfig game_defaults() {
  ExperimentConfig c;
  c.n = 100;
  c.d = 200;
  c.s = 4;
  c.sigma_x = 1.0;
  c.sigma_w = 0.5;
  c.k = 5;
  c.rule = LambdaRuleKind::kOblivious;
  c.trials = 200;
  return c;
}

ExperimentConfig typicality_defaults() { return recover_check_defaults(); }

void CsvTable::summarize() { summary = aggregate(columns, rows, group_by, values); }

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_table(std::ostream& out, const CsvTable& t, const std::string& timestamp) {
  out << "# poisonsep " << t.command << ' ' << timestamp;
  for (const auto& [k, v] : t.config) out << ' ' << k << '=' << v;
  out << '\n';
  for (const auto& note : t.notes) out << "# note: " << note << '\n';
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  if (t.values.empty()) return;
  out << "#summary-columns";
  for (const auto& g : t.group_by) out << ',' << g;
  for (const auto& v : t.values) out << ',' << v << "_n," << v << "_mean," << v << "_stderr";
  out << '\n';
  for (const auto& r : t.summary) {
    out << "#summary";
    for (const auto& c : r) out << ',' << c;
    out << '\n';
  }
}

AuditReport audit_csv(std::istream& in, double rel_tol) {
  AuditReport rep;
  std::string line;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> summary_header;
  std::vector<std::vector<std::string>> summary;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#summary-columns,", 0) == 0) {
      summary_header = split(line.substr(17));
    } else if (line.rfind("#summary,", 0) == 0) {
      summary.push_back(split(line.substr(9)));
    } else if (line[0] == '#') {
      continue;
    } else if (columns.empty()) {
      columns = split(line);
    } else {
      auto cells = split(line);
      if (cells.size() != columns.size()) {
        rep.ok = false;
        rep.mismatches.push_back("ragged row " + fmt(rows.size() + 1));
        continue;
      }
      rows.push_back(std::move(cells));
    }
  }
  rep.rows = rows.size();
  rep.summary_rows = summary.size();
  if (columns.empty()) {
    rep.ok = false;
    rep.mismatches.push_back("no column header");
    return rep;
  }
  if (summary_header.empty()) return rep;

  std::vector<std::string> group_by, values;
  std::size_t i = 0;
  for (; i < summary_header.size(); ++i) {
    const auto& h = summary_header[i];
    if (h.size() > 2 && h.compare(h.size() - 2, 2, "_n") == 0 &&
        std::find(columns.begin(), columns.end(), h.substr(0, h.size() - 2)) != columns.end()) {
      break;
    }
    group_by.push_back(h);
  }
  for (; i < summary_header.size(); i += 3) {
    const auto& h = summary_header[i];
    values.push_back(h.substr(0, h.size() - 2));
  }
  std::vector<std::vector<std::string>> expect;
  try {
    expect = aggregate(columns, rows, group_by, values);
  } catch (const InputError& e) {
    rep.ok = false;
    rep.mismatches.push_back(e.what());
    return rep;
  }
  if (expect.size() != summary.size()) {
    rep.ok = false;
    rep.mismatches.push_back("summary has " + fmt(summary.size()) + " groups, rows give " +
                             fmt(expect.size()));
    return rep;
  }
  for (std::size_t g = 0; g < expect.size(); ++g) {
    if (expect[g].size() != summary[g].size()) {
      rep.ok = false;
      rep.mismatches.push_back("summary row " + fmt(g + 1) + " has the wrong width");
      continue;
    }
    for (std::size_t c = 0; c < expect[g].size(); ++c) {
      const auto a = parse_number(expect[g][c]);
      const auto b = parse_number(summary[g][c]);
      bool same = expect[g][c] == summary[g][c];
      if (!same && a && b) {
        same = std::abs(*a - *b) <= rel_tol * std::max(1.0, std::max(std::abs(*a), std::abs(*b)));
      }
      if (!same) {
        rep.ok = false;
        rep.mismatches.push_back("summary row " + fmt(g + 1) + " column " + summary_header[c] +
                                 ": written " + summary[g][c] + ", recomputed " + expect[g][c]);
      }
    }
  }
  return rep;
}

ExperimentResult synth_sep(const ExperimentConfig& cfg) {
  require_trials(cfg);
  require_regression(cfg);
  if (cfg.p_grid.empty()) throw InputError("p-grid must not be empty");
  for (double p : cfg.p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p-grid values must lie in [0, 1]");
  }
  const LambdaRule rule = cfg.effective_rule();
  const double lambda = rule(cfg.n, cfg.d);
  const LassoConfig lasso = LassoConfig{}.with_lambda(lambda);
  const auto k_max = static_cast<std::size_t>(std::ceil(2.0 * lambda)) + 2;

  struct Cell {
    std::size_t feature = 0;
    std::optional<std::size_t> budget;
  };
  const auto per_trial = map_indices<std::vector<Cell>>(cfg.trials, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(cfg.seed, t);
    const GaussianSpec spec = regression_spec(cfg, seed);
    const RegressionDataset data = sample_dataset(spec);
    const SparseModel clean = lasso_fit(data, lasso);
    std::vector<Cell> cells;
    for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
      const double p = cfg.p_grid[pi];
      const std::uint64_t view_seed = derive_seed(seed, 100 + pi);
      FeatureChoice choice;
      if (visible_count(p, cfg.n) == 0) {
        choice = oblivious_select_uniform(cfg.d, spec.true_support(), view_seed);
      } else {
        const VisibleSplit view = split_visible(data, p, view_seed);
        choice = partial_select(view.visible, cfg.d, rule, p, view_seed, lasso);
      }
      Cell c;
      c.feature = choice.feature;
      if (clean.in_support(choice.feature)) {
        c.budget = 0;
      } else {
        c.budget = empirical_budget(data, choice.feature, lasso, k_max, std::nullopt, &clean);
      }
      cells.push_back(c);
    }
    return cells;
  });

  ExperimentResult res;
  CsvTable& t = res.table;
  t.command = "synth-sep";
  echo_regression(t, cfg);
  t.config.emplace_back("lambda", format_double(lambda));
  t.config.emplace_back("p_grid", join(cfg.p_grid));
  t.config.emplace_back("trials", fmt(cfg.trials));
  t.config.emplace_back("seed", std::to_string(cfg.seed));
  t.config.emplace_back("k_max", fmt(k_max));
  t.columns = {"p", "seed", "chosen_feature", "budget"};
  for (std::size_t pi = 0; pi < cfg.p_grid.size(); ++pi) {
    for (std::size_t tr = 0; tr < cfg.trials; ++tr) {
      const Cell& c = per_trial[tr][pi];
      t.rows.push_back({format_double(cfg.p_grid[pi]), std::to_string(trial_seed(cfg.seed, tr)),
                        fmt(c.feature), c.budget ? fmt(*c.budget) : ""});
      if (!c.budget) {
        res.assertion_failures.push_back("no budget up to " + fmt(k_max) + " for feature " +
                                         fmt(c.feature) + " (p=" + format_double(cfg.p_grid[pi]) +
                                         ", trial " + fmt(tr) + ")");
      }
    }
  }
  t.group_by = {"p"};
  t.values = {"budget"};
  t.summarize();
  return res;
}

ExperimentResult class_sep(const ExperimentConfig& cfg) {
  require_trials(cfg);
  if (cfg.m < 1) throw InputError("m must be positive");
  if (cfg.eps_grid.empty()) throw InputError("eps-grid must not be empty");
  for (double e : cfg.eps_grid) {
    if (!(e >= 0.0 && e < 1.0)) throw InputError("eps-grid values must lie in [0, 1)");
  }
  const std::size_t per_eps = cfg.trials;
  const auto reports = map_indices<std::vector<RiskReport>>(
      cfg.eps_grid.size() * per_eps, [&](std::size_t job) {
        const RiskGameSpec spec{cfg.m, cfg.eps_grid[job / per_eps]};
        const std::uint64_t seed = trial_seed(cfg.seed, job % per_eps);
        return std::vector<RiskReport>{
            run_awr_risk(spec, AwareStrategy::kRotation, seed),
            run_awr_risk(spec, AwareStrategy::kFormula, seed),
            run_obl_risk(spec, ObliviousStrategy::kRepeatedPoint, seed),
            run_obl_risk(spec, ObliviousStrategy::kSharedLabel, seed),
            run_obl_risk(spec, ObliviousStrategy::kCoinLabels, seed),
            run_awr_risk(spec, AwareStrategy::kElimination, seed),
            run_obl_risk(spec, ObliviousStrategy::kElimination, seed),
        };
      });

  ExperimentResult res;
  CsvTable& t = res.table;
  t.command = "class-sep";
  t.config.emplace_back("m", fmt(cfg.m));
  t.config.emplace_back("eps_grid", join(cfg.eps_grid));
  t.config.emplace_back("trials", fmt(cfg.trials));
  t.config.emplace_back("seed", std::to_string(cfg.seed));
  t.columns = {"eps", "seed", "mode", "strategy", "population_risk", "empirical_risk"};
  for (const auto& batch : reports) {
    for (const auto& r : batch) {
      t.rows.push_back({format_double(r.epsilon), std::to_string(r.seed), r.mode, r.strategy,
                        format_double(r.population_risk), format_double(r.empirical_risk)});
    }
  }
  // Rows come out eps-major, then trial, then strategy; regroup eps-major,
  // strategy, trial so each summary group is contiguous.
  std::stable_sort(t.rows.begin(), t.rows.end(), [&](const auto& a, const auto& b) {
    const auto rank = [&](const std::vector<std::string>& r) {
      const std::size_t e = static_cast<std::size_t>(
          std::find_if(cfg.eps_grid.begin(), cfg.eps_grid.end(),
                       [&](double v) { return format_double(v) == r[0]; }) -
          cfg.eps_grid.begin());
      static const std::vector<std::string> order = {
          "aware-injection", "aware-formula", "oblivious-1", "oblivious-2", "oblivious-3",
          "aware-elimination", "oblivious-elimination"};
      const auto s = static_cast<std::size_t>(std::find(order.begin(), order.end(), r[3]) - order.begin());
      return std::pair(e, s);
    };
    return rank(a) < rank(b);
  });
  t.group_by = {"eps", "mode", "strategy"};
  t.values = {"population_risk", "empirical_risk"};
  t.summarize();
  return res;
}

ExperimentResult recover_check(const ExperimentConfig& cfg) {
  require_trials(cfg);
  require_regression(cfg);
  if (cfg.s < 1) throw InputError("recover-check needs s >= 1");
  const LambdaRule rule = cfg.effective_rule();
  const double lambda = rule(cfg.n, cfg.d);
  const LassoConfig lasso = LassoConfig{}.with_lambda(lambda);
  const double psi = cfg.resolved_psi();

  struct Trial {
    bool recovered = false;
    std::size_t support = 0;
    TypicalityReport typ;
  };
  const auto trials = map_indices<Trial>(cfg.trials, [&](std::size_t t) {
    const GaussianSpec spec = regression_spec(cfg, trial_seed(cfg.seed, t));
    const RegressionDataset data = sample_dataset(spec);
    const SparseModel fit = lasso_fit(data, lasso);
    Trial out;
    out.support = fit.support().size();
    out.recovered = fit.support() == spec.true_support();
    out.typ = check_typical(spec.theta_star, data, psi, cfg.sigma_w);
    return out;
  });

  ExperimentResult res;
  CsvTable& t = res.table;
  t.command = "recover-check";
  echo_regression(t, cfg);
  t.config.emplace_back("lambda", format_double(lambda));
  t.config.emplace_back("psi", format_double(psi));
  t.config.emplace_back("trials", fmt(cfg.trials));
  t.config.emplace_back("seed", std::to_string(cfg.seed));
  if (cfg.s >= 1 && cfg.d >= 2) {
    t.notes.push_back("n/(s log d) = " + format_double(sample_ratio(cfg.n, cfg.s, cfg.d)));
    const double margin = std::min(cfg.theta_value, 1.0 - cfg.theta_value);
    t.notes.push_back("minimum n for recovery = " +
                      format_double(min_sample_rule_D2(static_cast<double>(cfg.s),
                                                       static_cast<double>(cfg.d), psi,
                                                       cfg.sigma_w > 0 ? cfg.sigma_w : 1.0, margin)));
  }
  t.columns = {"seed", "recovered", "support_size", "column_normalization", "incoherence",
               "restricted_convexity", "bounded_noise", "typical"};
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& tr = trials[i];
    t.rows.push_back({std::to_string(trial_seed(cfg.seed, i)), fmt(tr.recovered), fmt(tr.support),
                      fmt(tr.typ.column_normalization), fmt(tr.typ.incoherence),
                      fmt(tr.typ.restricted_convexity), fmt(tr.typ.bounded_noise),
                      fmt(tr.typ.passed)});
    if (tr.typ.passed && !tr.recovered) {
      res.assertion_failures.push_back("trial " + fmt(i) + " is typical but the support was not recovered");
    }
  }
  t.values = {"recovered", "typical"};
  t.summarize();
  return res;
}

ExperimentResult typicality(const ExperimentConfig& cfg) {
  require_trials(cfg);
  require_regression(cfg);
  if (cfg.s < 1) throw InputError("typicality needs s >= 1");
  const double psi = cfg.resolved_psi();
  const auto reports = map_indices<TypicalityReport>(cfg.trials, [&](std::size_t t) {
    const GaussianSpec spec = regression_spec(cfg, trial_seed(cfg.seed, t));
    return check_typical(spec.theta_star, sample_dataset(spec), psi, cfg.sigma_w);
  });
  ExperimentResult res;
  CsvTable& t = res.table;
  t.command = "typicality";
  echo_regression(t, cfg);
  t.config.emplace_back("psi", format_double(psi));
  t.config.emplace_back("trials", fmt(cfg.trials));
  t.config.emplace_back("seed", std::to_string(cfg.seed));
  t.columns = {"seed"};
  for (const auto& c : split(TypicalityReport::header())) t.columns.push_back(c);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::vector<std::string> row{std::to_string(trial_seed(cfg.seed, i))};
    for (const auto& c : split(reports[i].csv_row())) row.push_back(c);
    t.rows.push_back(std::move(row));
  }
  t.values = {"column_normalization", "incoherence", "restricted_convexity", "bounded_noise",
              "passed"};
  t.summarize();
  return res;
}

ExperimentResult attack_budget(const ExperimentConfig& cfg) {
  ExperimentResult res;
  CsvTable& t = res.table;
  t.command = "attack-budget";
  RegressionDataset data;
  if (!cfg.data_path.empty()) {
    data = load_csv(cfg.data_path);
    t.config.emplace_back("data", cfg.data_path);
    t.notes.push_back("loaded n = " + fmt(data.n()) + ", d = " + fmt(data.d()));
    if (cfg.standardize) {
      Standardization st = standardize(data);
      for (std::size_t j : st.dropped) t.notes.push_back("dropped constant column x" + fmt(j + 1));
      data = std::move(st.data);
      t.config.emplace_back("standardize", "1");
    }
  } else {
    require_regression(cfg);
    data = sample_dataset(regression_spec(cfg, cfg.seed));
    echo_regression(t, cfg);
    t.config.emplace_back("seed", std::to_string(cfg.seed));
  }
  if (!cfg.data_path.empty() && !cfg.lambda) {
    throw InputError("attack-budget on a loaded dataset needs --lambda");
  }
  const double lambda = cfg.lambda ? *cfg.lambda : cfg.effective_rule()(data.n(), data.d());
  const LassoConfig lasso = LassoConfig{}.with_lambda(lambda);
  t.config.emplace_back("lambda", format_double(lambda));
  t.config.emplace_back("empirical", cfg.empirical ? "1" : "0");

  const SparseModel fit = lasso_fit(data, lasso);
  const auto stats = feature_stats(data, fit, lambda);
  std::vector<std::size_t> targets;
  for (const auto& s : stats) {
    if (!s.in_support) targets.push_back(s.index);
  }
  const auto empirical = map_indices<std::optional<std::size_t>>(targets.size(), [&](std::size_t i) {
    if (!cfg.empirical) return std::optional<std::size_t>();
    const std::size_t j = targets[i];
    return empirical_budget(data, j, lasso, *stats[j].theoretical_budget + 1, std::nullopt, &fit);
  });

  t.columns = {"feature", "alpha", "theoretical_budget", "empirical_budget"};
  if (targets.empty()) t.notes.push_back("every feature is in the support; nothing to attack");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& s = stats[targets[i]];
    t.rows.push_back({fmt(s.index), format_double(s.alpha), fmt(*s.theoretical_budget),
                      empirical[i] ? fmt(*empirical[i]) : ""});
    if (cfg.empirical && (!empirical[i] || *empirical[i] > *s.theoretical_budget)) {
      res.assertion_failures.push_back("feature " + fmt(s.index) +
                                       " needs more rows than its theoretical budget");
    }
  }
  t.values = {"theoretical_budget", "empirical_budget"};
  t.summarize();
  return res;
}

ExperimentResult game(const ExperimentConfig& cfg) {
  require_trials(cfg);
  require_regression(cfg);
  GameSpec spec;
  spec.budget_k = cfg.k;
  spec.distribution.n = cfg.n;
  spec.distribution.d = cfg.d;
  spec.distribution.sigma_x = cfg.sigma_x;
  spec.distribution.sigma_w = cfg.sigma_w;
  spec.distribution.theta_star =
      make_theta_star(cfg.d, cfg.s, cfg.theta_value, sub_seed(cfg.seed, Stream::kLabels));
  const LambdaRule rule = cfg.effective_rule();
  spec.selector = LassoConfig{}.with_lambda(rule(cfg.n, cfg.d));
  if (cfg.win == "support-changed") {
    spec.win = WinPredicate::support_changed();
  } else if (cfg.win == "feature-added") {
    spec.win = WinPredicate::feature_added();
  } else if (cfg.win == "feature-removed") {
    spec.win = WinPredicate::feature_removed();
  } else if (cfg.win == "targeted-add") {
    spec.win = WinPredicate::targeted_add();
  } else {
    throw InputError("unknown win predicate '" + cfg.win + "'");
  }

  const auto aware = std::make_shared<CanonicalAwareAdversary>(
      rule.kind == LambdaRuleKind::kFixed ? std::nullopt : std::optional<LambdaRule>(rule));

  AdvantageEstimate est;
  if (cfg.mode == "oblivious") {
    std::unique_ptr<ObliviousAdversary> adv;
    if (cfg.adversary == "uniform" || cfg.adversary == "canonical") {
      adv = std::make_unique<UniformCanonicalAdversary>();
    } else if (cfg.adversary == "vote") {
      adv = std::make_unique<VoteCanonicalAdversary>(rule, cfg.probes);
    } else if (cfg.adversary == "blind") {
      adv = std::make_unique<AwareAsOblivious>(aware);
    } else {
      throw InputError("unknown oblivious adversary '" + cfg.adversary + "'");
    }
    est = estimate_advantage(spec, *adv, cfg.trials, cfg.seed);
  } else if (cfg.mode == "aware" || cfg.mode == "partial") {
    if (cfg.adversary != "canonical") {
      throw InputError("aware and partial games take the canonical adversary");
    }
    double fraction = 1.0;
    if (cfg.mode == "partial") {
      if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw InputError("partial mode needs 0 < p < 1");
      fraction = cfg.p;
    }
    est = estimate_advantage(spec, *aware, cfg.trials, cfg.seed, fraction);
  } else {
    throw InputError("unknown game mode '" + cfg.mode + "'");
  }

  ExperimentResult res;
  CsvTable& t = res.table;
  t.command = "game";
  echo_regression(t, cfg);
  t.config.emplace_back("lambda", format_double(spec.selector.lambda));
  t.config.emplace_back("k", fmt(cfg.k));
  t.config.emplace_back("mode", cfg.mode);
  if (cfg.mode == "partial") t.config.emplace_back("p", format_double(cfg.p));
  t.config.emplace_back("adversary", cfg.adversary);
  t.config.emplace_back("win", spec.win.describe());
  t.config.emplace_back("trials", fmt(cfg.trials));
  t.config.emplace_back("seed", std::to_string(cfg.seed));
  t.notes.push_back("advantage = " + format_double(est.advantage) + " +- " +
                    format_double(est.halfwidth) + " (95% Hoeffding), disqualified = " +
                    fmt(est.disqualified));
  t.columns = split(outcome_csv_header());
  for (const auto& o : est.outcomes) t.rows.push_back(split(outcome_csv_row(o, cfg.k)));
  t.group_by = {"mode"};
  t.values = {"won"};
  t.summarize();
  return res;
}

}  // namespace poisonsep
