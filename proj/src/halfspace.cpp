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


#include "poisonsep/halfspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "poisonsep/errors.hpp"
#include "poisonsep/lasso.hpp"
#include "poisonsep/rng.hpp"

namespace poisonsep {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double point_angle(const ClassificationDataset& data, Eigen::Index i) {
  return std::atan2(data.points(i, 1), data.points(i, 0));
}

Eigen::Vector2d standard_point(Engine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector2d x;
  do {
    x << gauss(eng), gauss(eng);
  } while (x.x() == 0.0 && x.y() == 0.0);
  return x;
}

std::size_t floor_count(double eps, std::size_t m) {
  if (!(eps >= 0.0)) throw InputError("eps must be nonnegative");
  const double raw = eps * static_cast<double>(m);
  const double rounded = std::round(raw);
  return static_cast<std::size_t>(std::abs(raw - rounded) < 1e-9 ? rounded : std::floor(raw));
}

ClassificationDataset repeated(const Eigen::Vector2d& x, double label, std::size_t count) {
  ClassificationDataset p;
  p.points.resize(static_cast<Eigen::Index>(count), 2);
  p.labels = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(count), label);
  for (Eigen::Index r = 0; r < p.points.rows(); ++r) p.points.row(r) = x.transpose();
  return p;
}

}  // namespace

Halfspace Halfspace::from_angle(double a) { return {norm_angle(a)}; }

Halfspace Halfspace::from_vector(const Eigen::Vector2d& w) {
  if (!(w.norm() > 0.0) || !w.allFinite()) throw InputError("halfspace: normal must be nonzero");
  return from_angle(std::atan2(w.y(), w.x()));
}

Eigen::Vector2d Halfspace::w() const { return {std::cos(angle), std::sin(angle)}; }

int Halfspace::predict(const Eigen::Vector2d& x) const { return sign_pm(w().dot(x)); }

void ClassificationDataset::validate() const {
  if (points.rows() != labels.size()) throw InputError("classification data: size mismatch");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) throw InputError("classification data: labels must be +-1");
    if (points(i, 0) == 0.0 && points(i, 1) == 0.0) throw InputError("classification data: zero point");
  }
  if (!points.allFinite()) throw InputError("classification data: non-finite point");
}

ClassificationDataset append(const ClassificationDataset& a, const ClassificationDataset& b) {
  ClassificationDataset out;
  out.points.resize(a.points.rows() + b.points.rows(), 2);
  out.points << a.points, b.points;
  out.labels.resize(a.labels.size() + b.labels.size());
  out.labels << a.labels, b.labels;
  return out;
}

ClassificationDataset remove_rows(const ClassificationDataset& data,
                                  const std::vector<std::size_t>& rows) {
  std::vector<char> drop(data.m(), 0);
  for (std::size_t r : rows) {
    if (r >= data.m()) throw InputError("remove_rows: row out of range");
    drop[r] = 1;
  }
  const auto keep = static_cast<Eigen::Index>(std::count(drop.begin(), drop.end(), 0));
  ClassificationDataset out;
  out.points.resize(keep, 2);
  out.labels.resize(keep);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < data.m(); ++i) {
    if (drop[i]) continue;
    out.points.row(k) = data.points.row(static_cast<Eigen::Index>(i));
    out.labels[k] = data.labels[static_cast<Eigen::Index>(i)];
    ++k;
  }
  return out;
}

ClassificationDataset sample_labeled(std::size_t m, const Halfspace& w_star, std::uint64_t seed) {
  Engine eng = make_engine(seed);
  ClassificationDataset out;
  out.points.resize(static_cast<Eigen::Index>(m), 2);
  out.labels.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < out.points.rows(); ++i) {
    const Eigen::Vector2d x = standard_point(eng);
    out.points.row(i) = x.transpose();
    out.labels[i] = w_star.predict(x);
  }
  return out;
}

Halfspace random_halfspace(std::uint64_t seed) {
  Engine eng = make_engine(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  return Halfspace::from_angle(angle(eng));
}

std::size_t empirical_errors(const Halfspace& h, const ClassificationDataset& data) {
  const Eigen::Vector2d w = h.w();
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
    const double s = sign_pm(data.points.row(i).dot(w));
    if (s != data.labels[i]) ++errors;
  }
  return errors;
}

double empirical_risk(const Halfspace& h, const ClassificationDataset& data) {
  if (data.m() == 0) throw InputError("empirical_risk: empty dataset");
  return static_cast<double>(empirical_errors(h, data)) / static_cast<double>(data.m());
}

Halfspace erm_halfspace(const ClassificationDataset& data) {
  data.validate();
  if (data.m() == 0) throw InputError("erm_halfspace: need at least one point");

  // Each point is misclassified on an arc of length π: open for label +1,
  // closed for label −1.
  enum Kind { kOpenStart, kOpenEnd, kClosedStart, kClosedEnd };
  struct Event {
    double at;
    Kind kind;
  };
  std::vector<Event> events;
  events.reserve(2 * data.m());
  long wrapping = 0;
  for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
    const double a = point_angle(data, i);
    const bool positive = data.labels[i] > 0.0;
    const double s = norm_angle(positive ? a + kPi / 2 : a - kPi / 2);
    const double e = norm_angle(positive ? a + 3 * kPi / 2 : a + kPi / 2);
    events.push_back({s, positive ? kOpenStart : kClosedStart});
    events.push_back({e, positive ? kOpenEnd : kClosedEnd});
    if (s > e) ++wrapping;
  }
  std::sort(events.begin(), events.end(),
            [](const Event& x, const Event& y) { return x.at < y.at; });

  std::vector<double> at;
  std::vector<std::array<long, 4>> counts;
  for (const Event& ev : events) {
    if (at.empty() || ev.at != at.back()) {
      at.push_back(ev.at);
      counts.push_back({0, 0, 0, 0});
    }
    ++counts.back()[ev.kind];
  }
  const std::size_t k = at.size();

  // errs[2j] at breakpoint j, errs[2j+1] on the open gap after it.
  std::vector<long> errs(2 * k);
  long current = wrapping;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& c = counts[j];
    const long on = current - c[kOpenEnd] + c[kClosedStart];
    const long after = on + c[kOpenStart] - c[kClosedEnd];
    errs[2 * j] = on;
    errs[2 * j + 1] = after;
    current = after;
  }
  const long best = *std::min_element(errs.begin(), errs.end());
  const std::size_t slots = errs.size();
  std::size_t anchor = slots;
  for (std::size_t i = 0; i < slots; ++i) {
    if (errs[i] != best) {
      anchor = i;
      break;
    }
  }
  if (anchor == slots) return Halfspace::from_angle(0.0);

  double best_start = kTwoPi + 1.0;
  double best_mid = 0.0;
  for (std::size_t step = 1; step <= slots; ++step) {
    const std::size_t first = (anchor + step) % slots;
    if (errs[first] != best || errs[(first + slots - 1) % slots] == best) continue;
    std::size_t len = 1;
    while (errs[(first + len) % slots] == best) ++len;
    const std::size_t last = (first + len - 1) % slots;
    const double start = at[first / 2];
    const double end = (last % 2 == 0) ? at[last / 2] : at[(last / 2 + 1) % k];
    double span = end - start;
    if ((len > 1 || first % 2 == 1) && span <= 0.0) span += kTwoPi;
    if (start < best_start) {
      best_start = start;
      best_mid = start + span / 2;
    }
  }
  return Halfspace::from_angle(best_mid);
}

double population_risk(const Halfspace& w, const Halfspace& w_star) {
  const Eigen::Vector2d a = w.w();
  const Eigen::Vector2d b = w_star.w();
  const double cross = a.x() * b.y() - a.y() * b.x();
  return std::atan2(std::abs(cross), a.dot(b)) / kPi;
}

std::size_t poison_count(double eps, std::size_t m) {
  if (!(eps >= 0.0)) throw InputError("eps must be nonnegative");
  const double raw = eps * static_cast<double>(m);
  const double rounded = std::round(raw);
  return static_cast<std::size_t>(std::abs(raw - rounded) < 1e-9 ? rounded : std::ceil(raw));
}

ClassificationDataset aware_poison_formula(const Halfspace& w_star, double eps, std::size_t m) {
  const std::size_t count = poison_count(eps, m);
  const Eigen::Vector2d w = w_star.w();
  Eigen::Vector2d v;
  if (w.y() != 0.0) {
    v << 1.0, -w.x() / w.y();
  } else {
    v << -w.y() / w.x(), 1.0;
  }
  const Eigen::Vector2d d = std::cos(eps * kPi) * v.normalized() + std::sin(eps * kPi) * w;
  return repeated(d, -static_cast<double>(sign_pm(w.dot(d))), count);
}

Halfspace rotation_target(const ClassificationDataset& clean, double eps) {
  const Halfspace w1 = erm_halfspace(clean);
  const std::size_t count = poison_count(eps, clean.m());
  if (count == 0) return w1;

  // Counterclockwise rotation at which w₁'s prediction on each point changes.
  std::vector<double> flips;
  flips.reserve(clean.m());
  for (Eigen::Index i = 0; i < clean.points.rows(); ++i) {
    const Eigen::Vector2d x = clean.points.row(i).transpose();
    const double rel = norm_angle(point_angle(clean, i) - w1.angle);
    double f = w1.predict(x) > 0 ? norm_angle(rel + kPi / 2) : norm_angle(rel - kPi / 2);
    if (f > kPi) f = 0.0;
    flips.push_back(f);
  }
  std::sort(flips.begin(), flips.end());
  const auto delta = [&](std::size_t j) {
    if (j == 0) return 0.0;
    if (j > flips.size()) return kPi;
    return flips[j - 1];
  };
  std::size_t target = std::min(count - 1, flips.size());
  while (target > 0 && delta(target) == delta(target + 1)) --target;
  return Halfspace::from_angle(w1.angle + (delta(target) + delta(target + 1)) / 2);
}

ClassificationDataset aware_poison_rotation(const ClassificationDataset& clean, double eps) {
  const std::size_t count = poison_count(eps, clean.m());
  if (count == 0) return repeated(Eigen::Vector2d(1.0, 0.0), -1.0, 0);
  const Halfspace w2 = rotation_target(clean, eps);
  const double a = w2.angle - kPi / 2;
  return repeated(Eigen::Vector2d(std::cos(a), std::sin(a)), -1.0, count);
}

ClassificationDataset oblivious_baseline(BaselineKind kind, double eps, std::size_t m,
                                         std::uint64_t seed) {
  const std::size_t count = poison_count(eps, m);
  Engine eng = make_engine(seed, Stream::kAdversary);
  std::bernoulli_distribution coin(0.5);
  const auto label = [&] { return coin(eng) ? 1.0 : -1.0; };
  if (count == 0) return repeated(Eigen::Vector2d(1.0, 0.0), 1.0, 0);

  switch (kind) {
    case BaselineKind::kRepeatedPoint: {
      const Eigen::Vector2d p = standard_point(eng);
      return repeated(p, label(), count);
    }
    case BaselineKind::kSharedLabel:
    case BaselineKind::kCoinLabels: {
      ClassificationDataset out;
      out.points.resize(static_cast<Eigen::Index>(count), 2);
      out.labels.resize(static_cast<Eigen::Index>(count));
      const double shared = label();
      for (Eigen::Index r = 0; r < out.points.rows(); ++r) {
        out.points.row(r) = standard_point(eng).transpose();
        out.labels[r] = kind == BaselineKind::kSharedLabel ? shared : label();
      }
      return out;
    }
  }
  throw InputError("oblivious_baseline: unknown kind");
}

std::vector<std::size_t> aware_elimination(const ClassificationDataset& clean, double eps,
                                           const Halfspace& w_star) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("aware_elimination: eps must lie in [0, 1)");
  const std::size_t cap = floor_count(eps, clean.m());
  if (cap == 0) return {};
  const Halfspace rotated = Halfspace::from_angle(w_star.angle + kPi * eps / 2);
  const Eigen::Vector2d g = w_star.w();
  std::vector<std::pair<double, std::size_t>> region;
  for (Eigen::Index i = 0; i < clean.points.rows(); ++i) {
    const Eigen::Vector2d x = clean.points.row(i).transpose();
    if (w_star.predict(x) != rotated.predict(x)) {
      region.emplace_back(std::abs(g.dot(x)) / x.norm(), static_cast<std::size_t>(i));
    }
  }
  std::sort(region.begin(), region.end());
  if (region.size() > cap) region.resize(cap);
  std::vector<std::size_t> out;
  for (const auto& r : region) out.push_back(r.second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> oblivious_elimination(std::size_t m, double eps, std::uint64_t seed) {
  const std::size_t count = std::min(m, floor_count(eps, m));
  std::vector<std::size_t> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  Engine eng = make_engine(seed, Stream::kAdversary);
  for (std::size_t k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, m - 1);
    std::swap(ids[k], ids[pick(eng)]);
  }
  ids.resize(count);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string to_string(AwareStrategy s) {
  switch (s) {
    case AwareStrategy::kRotation: return "aware-injection";
    case AwareStrategy::kFormula: return "aware-formula";
    case AwareStrategy::kElimination: return "aware-elimination";
  }
  return "?";
}

std::string to_string(ObliviousStrategy s) {
  switch (s) {
    case ObliviousStrategy::kRepeatedPoint: return "oblivious-1";
    case ObliviousStrategy::kSharedLabel: return "oblivious-2";
    case ObliviousStrategy::kCoinLabels: return "oblivious-3";
    case ObliviousStrategy::kElimination: return "oblivious-elimination";
  }
  return "?";
}

void RiskGameSpec::validate() const {
  if (m < 1) throw InputError("risk game: m must be positive");
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("risk game: eps must lie in [0, 1)");
}

namespace {

struct RiskWorld {
  Halfspace w_star;
  ClassificationDataset train;
  ClassificationDataset test;
};

RiskWorld draw_world(const RiskGameSpec& spec, std::uint64_t seed) {
  RiskWorld w;
  w.w_star = random_halfspace(derive_seed(seed, static_cast<std::uint64_t>(Stream::kLabels)));
  w.train = sample_labeled(spec.m, w.w_star, derive_seed(seed, static_cast<std::uint64_t>(Stream::kDesign)));
  w.test = sample_labeled(spec.m, w.w_star, derive_seed(seed, static_cast<std::uint64_t>(Stream::kTest)));
  return w;
}

RiskReport finish(const RiskGameSpec& spec, const RiskWorld& world,
                  const ClassificationDataset& training, std::uint64_t seed, std::string mode,
                  std::string strategy) {
  RiskReport r;
  const Halfspace fit = erm_halfspace(training);
  r.population_risk = population_risk(fit, world.w_star);
  r.empirical_risk = empirical_risk(fit, world.test);
  r.clean_population_risk = population_risk(erm_halfspace(world.train), world.w_star);
  r.epsilon = spec.eps;
  r.seed = seed;
  r.mode = std::move(mode);
  r.strategy = std::move(strategy);
  return r;
}

}  // namespace

RiskReport run_obl_risk(const RiskGameSpec& spec, ObliviousStrategy strategy, std::uint64_t seed) {
  spec.validate();
  const std::uint64_t adv = derive_seed(seed, static_cast<std::uint64_t>(Stream::kAdversary));
  // Committed before the world is drawn.
  ClassificationDataset poison;
  std::vector<std::size_t> removed;
  switch (strategy) {
    case ObliviousStrategy::kRepeatedPoint:
      poison = oblivious_baseline(BaselineKind::kRepeatedPoint, spec.eps, spec.m, adv);
      break;
    case ObliviousStrategy::kSharedLabel:
      poison = oblivious_baseline(BaselineKind::kSharedLabel, spec.eps, spec.m, adv);
      break;
    case ObliviousStrategy::kCoinLabels:
      poison = oblivious_baseline(BaselineKind::kCoinLabels, spec.eps, spec.m, adv);
      break;
    case ObliviousStrategy::kElimination:
      removed = oblivious_elimination(spec.m, spec.eps, adv);
      break;
  }
  const RiskWorld world = draw_world(spec, seed);
  const ClassificationDataset training = strategy == ObliviousStrategy::kElimination
                                             ? remove_rows(world.train, removed)
                                             : append(world.train, poison);
  return finish(spec, world, training, seed, "oblivious", to_string(strategy));
}

RiskReport run_awr_risk(const RiskGameSpec& spec, AwareStrategy strategy, std::uint64_t seed) {
  spec.validate();
  const RiskWorld world = draw_world(spec, seed);
  ClassificationDataset training;
  switch (strategy) {
    case AwareStrategy::kRotation:
      training = append(world.train, aware_poison_rotation(world.train, spec.eps));
      break;
    case AwareStrategy::kFormula:
      training = append(world.train, aware_poison_formula(world.w_star, spec.eps, spec.m));
      break;
    case AwareStrategy::kElimination:
      training = remove_rows(world.train, aware_elimination(world.train, spec.eps, world.w_star));
      break;
  }
  if (training.m() == 0) throw PreconditionError("risk game: every training point was removed");
  return finish(spec, world, training, seed, "aware", to_string(strategy));
}

RiskReport run_clean_risk(const RiskGameSpec& spec, std::uint64_t seed) {
  spec.validate();
  const RiskWorld world = draw_world(spec, seed);
  return finish(spec, world, world.train, seed, "clean", "none");
}

std::string risk_csv_header() { return "seed,mode,kind,eps,population_risk,empirical_risk"; }

std::string risk_csv_row(const RiskReport& r) {
  std::ostringstream out;
  out << std::setprecision(17) << r.seed << ',' << r.mode << ',' << r.strategy << ',' << r.epsilon
      << ',' << r.population_risk << ',' << r.empirical_risk;
  return out.str();
}

}  // namespace poisonsep
