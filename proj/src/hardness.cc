// Copyright 2026 The OI Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oilab/hardness.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "oilab/catalog.h"
#include "oilab/error.h"
#include "oilab/membership.h"
#include "oilab/parallel.h"

namespace oilab {

double BinomialUpperTail(std::size_t t, double p, std::size_t k) {
  if (k == 0) return 1.0;
  if (k > t) return 0.0;
  double total = 0.0;
  double coeff = 1.0;  // C(t, j)
  for (std::size_t j = 0; j <= t; ++j) {
    if (j > 0) coeff = coeff * static_cast<double>(t - j + 1) / static_cast<double>(j);
    if (j >= k) {
      total += coeff * std::pow(p, static_cast<double>(j)) *
               std::pow(1.0 - p, static_cast<double>(t - j));
    }
  }
  return std::min(1.0, total);
}

std::size_t MajorityCount(std::uint64_t q_q) {
  const double target = 1.0 / (100.0 * static_cast<double>(std::max<std::uint64_t>(1, q_q)));
  for (std::size_t t = 1;; t += 2) {
    if (BinomialUpperTail(t, 1.0 / 3.0, (t + 1) / 2) <= target) return t;
  }
}

LevelCoding MakeLevelCoding(std::size_t n, std::size_t levels) {
  if (levels < 1) throw ConfigError("at least one level is required");
  LevelCoding c;
  c.n = n;
  c.levels = levels;
  c.level_bits = std::max<std::size_t>(1, std::bit_width(levels - 1));
  if (c.dimension() > 64) throw ConfigError("hard universe exceeds 64 bits");
  return c;
}

Individual LevelCoding::Encode(std::size_t i, std::uint64_t x) const {
  Individual z(dimension());
  z.set_field(0, n, x);
  z.set_field(n, level_bits, i - 1);
  return z;
}

Individual LevelCoding::Encode(std::size_t i, const Individual& x) const {
  return Encode(i, x.field(0, n));
}

std::size_t LevelCoding::Level(const Individual& z) const {
  return static_cast<std::size_t>(z.field(n, level_bits)) + 1;
}

Individual LevelCoding::Input(const Individual& z) const {
  return Individual::FromIndex(n, z.field(0, n));
}

namespace {

std::uint64_t LevelBudget(const ScalableEnsemble& e, std::size_t level,
                          std::size_t majority, bool stripped) {
  if (stripped || level == 1) return 0;
  const EnsembleCosts c = e.costs();
  return c.q_q * majority * c.q_r;
}

std::uint64_t LevelCost(const ScalableEnsemble& e, std::size_t majority) {
  const EnsembleCosts c = e.costs();
  return std::max<std::uint64_t>(1, c.t_q + c.t_r * c.q_q * majority);
}

}  // namespace

HardLevelDistinguisher::HardLevelDistinguisher(EnsemblePtr ensemble,
                                               LevelCoding coding,
                                               std::size_t level,
                                               std::size_t majority,
                                               bool stripped)
    : Distinguisher(
          "A_" + std::to_string(level) + (stripped ? ":stripped" : ""),
          stripped ? AccessLevel::kSampleAccess : AccessLevel::kOracleAccess,
          LevelBudget(*ensemble, level, majority, stripped),
          LevelCost(*ensemble, majority)),
      ensemble_(std::move(ensemble)),
      coding_(coding),
      level_(level),
      majority_(majority),
      stripped_(stripped) {
  if (level < 1 || level > ensemble_->levels()) {
    throw ConfigError("A_i needs 1 <= i <= m");
  }
  if (!ensemble_->boolean()) throw ConfigError("A_i needs a Boolean ensemble");
  if (!stripped && level > 1 && !ensemble_->has_random_sr()) {
    throw ConfigError("A_i for i >= 2 needs a random self-reduction");
  }
}

Randomness HardLevelDistinguisher::randomness() const {
  return (stripped_ || level_ == 1) ? Randomness::kDeterministic
                                    : Randomness::kContinuous;
}

void HardLevelDistinguisher::ResetCounters() const {
  total_queries_ = 0;
  max_queries_ = 0;
  calls_ = 0;
}

std::uint64_t HardLevelDistinguisher::Compute(const Individual& x,
                                              const AccessContext& ctx,
                                              Rng& rng) const {
  const ScalableEnsemble::LevelOracle zero = [](const Individual&) {
    return std::uint64_t{0};
  };
  if (stripped_ || level_ == 1) return ensemble_->Downward(level_, x, zero);
  if (ctx.oracle == nullptr) throw DomainError(id() + " needs oracle access");
  std::uint64_t used = 0;
  const ScalableEnsemble::LevelOracle rounded = [&](const Individual& xp) {
    ++used;
    return static_cast<std::uint64_t>(
        RoundPrediction(ctx.oracle->Query(coding_.Encode(level_ - 1, xp))));
  };
  const ScalableEnsemble::LevelOracle amplified = [&](const Individual& xp) {
    std::size_t ones = 0;
    for (std::size_t k = 0; k < majority_; ++k) {
      ones += ensemble_->RandomSr(level_ - 1, xp, rounded, rng) & 1;
    }
    return static_cast<std::uint64_t>(2 * ones > majority_ ? 1 : 0);
  };
  const std::uint64_t out = ensemble_->Downward(level_, x, amplified);
  total_queries_ += used;
  std::uint64_t prev = max_queries_.load();
  while (used > prev && !max_queries_.compare_exchange_weak(prev, used)) {
  }
  return out;
}

int HardLevelDistinguisher::DecideImpl(const Individual& z, int o,
                                       const AccessContext& ctx,
                                       Rng& rng) const {
  ++calls_;
  if (coding_.Level(z) != level_) return 0;
  const std::uint64_t v = Compute(coding_.Input(z), ctx, rng);
  return static_cast<std::uint64_t>(o) == (v & 1) ? 1 : 0;
}

nlohmann::json HardLevelDistinguisher::RuleJson() const {
  return {{"type", "hard-level"},
          {"ensemble", ensemble_->name()},
          {"level", level_},
          {"majority", majority_},
          {"stripped", stripped_}};
}

Family HardInstance::family() const {
  return Family(levels.begin(), levels.end());
}

Family HardInstance::stripped_family() const {
  return Family(stripped.begin(), stripped.end());
}

HardInstance BuildHardNature(EnsemblePtr ensemble) {
  if (!ensemble->boolean()) {
    throw ConfigError("the hard nature needs a Boolean ensemble");
  }
  if (!ensemble->hard_is_uniform()) {
    throw ConfigError("the hard nature needs a uniform hard distribution");
  }
  HardInstance h;
  h.coding = MakeLevelCoding(ensemble->input_bits(), ensemble->levels());
  const std::size_t d = h.coding.dimension();
  if (d > kMaxExplicitDimension) {
    throw ConfigError("hard universe of dimension " + std::to_string(d) +
                      " exceeds 24 bits");
  }
  const std::size_t m = ensemble->levels();
  const std::uint64_t per_level = std::uint64_t{1} << h.coding.n;
  const double mass = 1.0 / (static_cast<double>(m) * static_cast<double>(per_level));
  std::vector<Atom> atoms;
  atoms.reserve(m * per_level);
  std::vector<double> truth(std::size_t{1} << d, 0.5);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::uint64_t x = 0; x < per_level; ++x) {
      const Individual z = h.coding.Encode(i, x);
      atoms.push_back({z.index(), mass});
      truth[z.index()] = static_cast<double>(
          ensemble->Eval(i, Individual::FromIndex(h.coding.n, x)));
    }
  }
  h.epsilon = 1.0 / (100.0 * static_cast<double>(m));
  h.majority = MajorityCount(ensemble->costs().q_q);
  h.budget = ensemble->costs().q_q * h.majority * ensemble->costs().q_r;
  h.nature = std::make_shared<const Nature>(
      PopulationDistribution::Explicit(d, std::move(atoms)),
      Predictor::Table(d, std::move(truth)));
  for (std::size_t i = 1; i <= m; ++i) {
    if (i == 1 || ensemble->has_random_sr()) {
      h.levels.push_back(std::make_shared<const HardLevelDistinguisher>(
          ensemble, h.coding, i, h.majority));
    }
    h.stripped.push_back(std::make_shared<const HardLevelDistinguisher>(
        ensemble, h.coding, i, h.majority, true));
  }
  h.ensemble = std::move(ensemble);
  return h;
}

namespace {

std::vector<double> TruthTable(const HardInstance& h) {
  return h.nature->truth().Tabulate();
}

}  // namespace

Predictor TruthPredictor(const HardInstance& h) {
  return Predictor::Table(h.coding.dimension(), TruthTable(h));
}

Predictor LevelInvertedPredictor(const HardInstance& h, std::size_t level) {
  if (level < 1 || level > h.coding.levels) {
    throw ConfigError("inverted level outside [1, m]");
  }
  std::vector<double> t = TruthTable(h);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << h.coding.n); ++x) {
    const std::uint64_t z = h.coding.Encode(level, x).index();
    t[z] = 1.0 - t[z];
  }
  return Predictor::Table(h.coding.dimension(), std::move(t));
}

Predictor ConstantHalfPredictor(const HardInstance& h) {
  return Predictor::Constant(h.coding.dimension(), 0.5);
}

Predictor FuzzedCandidate(const HardInstance& h, std::uint64_t seed) {
  static constexpr double kFlips[] = {0.0,  0.001, 0.003, 0.005, 0.01,
                                      0.02, 0.05,  0.1,   0.25,  0.5};
  static constexpr double kNoise[] = {0.0, 0.1, 0.3, 0.49};
  Rng rng(seed);
  std::vector<double> t = TruthTable(h);
  for (std::size_t i = 1; i <= h.coding.levels; ++i) {
    const double flip = kFlips[UniformBelow(rng, std::size(kFlips))];
    const double noise = kNoise[UniformBelow(rng, std::size(kNoise))];
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << h.coding.n); ++x) {
      const std::uint64_t z = h.coding.Encode(i, x).index();
      const bool b = (t[z] >= 0.5) != (Bernoulli(rng, flip) == 1);
      const double soft = noise * Uniform01(rng);
      t[z] = b ? 1.0 - soft : soft;
    }
  }
  return Predictor::Table(h.coding.dimension(), std::move(t));
}

Family MatchedSampleFamily(const HardInstance& h) {
  Family f = h.stripped_family();
  const std::size_t d = h.coding.dimension();
  auto add = [&](std::vector<std::pair<std::size_t, bool>> lits) {
    std::string id = "conj:";
    for (std::size_t k = 0; k < lits.size(); ++k) {
      if (k > 0) id += "&";
      id += "b" + std::to_string(lits[k].first) + "=" + (lits[k].second ? "1" : "0");
    }
    if (lits.empty()) id += "all";
    f.push_back(std::make_shared<const SubsetDistinguisher>(
        id, Conjunction(std::move(lits)), OutcomeFilter(1)));
  };
  add({});
  for (std::size_t a = 0; a < d; ++a) {
    for (bool va : {false, true}) add({{a, va}});
  }
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      for (bool va : {false, true}) {
        for (bool vb : {false, true}) add({{a, va}, {b, vb}});
      }
    }
  }
  return f;
}

namespace {

double AccuracyFromTable(const HardInstance& h, const std::vector<double>& p,
                         std::size_t i) {
  const std::uint64_t count = std::uint64_t{1} << h.coding.n;
  const std::vector<double>& truth_table = h.nature->truth().Tabulate();
  std::uint64_t right = 0;
  for (std::uint64_t x = 0; x < count; ++x) {
    const std::uint64_t z = h.coding.Encode(i, x).index();
    if (RoundPrediction(p[z]) == RoundPrediction(truth_table[z])) ++right;
  }
  return static_cast<double>(right) / static_cast<double>(count);
}

const LinearEnsemble& RequireLinear(const HardInstance& h) {
  const auto* lin = dynamic_cast<const LinearEnsemble*>(h.ensemble.get());
  if (lin == nullptr || lin->output_bits() != 1) {
    throw ConfigError("exact A_i advantages need a single-output linear ensemble");
  }
  return *lin;
}

double LinearAdvantageFromTable(const HardInstance& h, const LinearEnsemble& lin,
                                const std::vector<double>& p, std::size_t i) {
  if (i < 1 || i > h.coding.levels) throw DomainError("level outside [1, m]");
  const std::size_t n = h.coding.n;
  const std::uint64_t count = std::uint64_t{1} << n;
  const double scale =
      1.0 / (static_cast<double>(h.coding.levels) * static_cast<double>(count));
  // Pr[A_i computes 1] for each x at level i.
  std::vector<double> computes_one(count);
  if (i == 1) {
    for (std::uint64_t x = 0; x < count; ++x) {
      computes_one[x] = static_cast<double>(lin.Eval(1, Individual::FromIndex(n, x)));
    }
  } else {
    std::vector<double> s(count);
    for (std::uint64_t u = 0; u < count; ++u) {
      const int g = RoundPrediction(p[h.coding.Encode(i - 1, u).index()]);
      const int f = static_cast<int>(lin.Eval(i - 1, Individual::FromIndex(n, u)));
      s[u] = (g ^ f) ? -1.0 : 1.0;
    }
    Fwht(s);
    for (double& v : s) v *= v;
    Fwht(s);
    const double norm = static_cast<double>(count) * static_cast<double>(count);
    std::vector<double> correct(count);
    for (std::uint64_t u = 0; u < count; ++u) {
      const double pair = std::clamp(0.5 * (1.0 + s[u] / norm), 0.0, 1.0);
      const double r = BinomialUpperTail(LinearEnsemble::kPairs, pair,
                                         LinearEnsemble::kPairs / 2 + 1);
      correct[u] = BinomialUpperTail(h.majority, r, h.majority / 2 + 1);
    }
    for (std::uint64_t x = 0; x < count; ++x) {
      const Individual xi = Individual::FromIndex(n, x);
      const double c = correct[lin.Transition(i, xi).index()];
      computes_one[x] = lin.Eval(i, xi) == 1 ? c : 1.0 - c;
    }
  }
  KahanSum sum;
  for (std::uint64_t x = 0; x < count; ++x) {
    const double f = static_cast<double>(lin.Eval(i, Individual::FromIndex(n, x)));
    const double q = p[h.coding.Encode(i, x).index()];
    sum.Add((f - q) * (2.0 * computes_one[x] - 1.0));
  }
  return scale * sum.value();
}

}  // namespace

double LevelAccuracy(const HardInstance& h, const Predictor& p, std::size_t i) {
  if (i < 1 || i > h.coding.levels) throw DomainError("level outside [1, m]");
  return AccuracyFromTable(h, p.Tabulate(), i);
}

void Fwht(std::vector<double>& a) {
  if (!std::has_single_bit(a.size())) {
    throw DomainError("Walsh-Hadamard length must be a power of two");
  }
  for (std::size_t len = 1; len < a.size(); len <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double u = a[j];
        const double v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

double ExactLinearLevelAdvantage(const HardInstance& h, const Predictor& p,
                                 std::size_t i) {
  return LinearAdvantageFromTable(h, RequireLinear(h), p.Tabulate(), i);
}

InductionReport InductionClaimsCheck(const HardInstance& h,
                                     const std::vector<Predictor>& candidates) {
  const LinearEnsemble& lin = RequireLinear(h);
  const std::size_t m = h.coding.levels;
  InductionReport report;
  report.rows.resize(candidates.size());
  ParallelFor(candidates.size(), [&](std::size_t c) {
    const std::vector<double> table = candidates[c].Tabulate();
    InductionRow& row = report.rows[c];
    for (std::size_t i = 1; i <= m; ++i) {
      row.accuracy.push_back(AccuracyFromTable(h, table, i));
      row.advantage.push_back(LinearAdvantageFromTable(h, lin, table, i));
    }
    row.basis_applies = row.advantage[0] <= h.epsilon;
    row.basis_holds = !row.basis_applies || row.accuracy[0] >= kBasisAccuracy;
    for (std::size_t i = 2; i <= m; ++i) {
      const bool applies =
          row.advantage[i - 1] <= h.epsilon && row.accuracy[i - 2] >= kStepAccuracy;
      row.step_applies.push_back(applies);
      row.step_holds.push_back(!applies || row.accuracy[i - 1] >= kStepAccuracy);
    }
  });
  for (const InductionRow& row : report.rows) {
    if (!row.basis_holds) ++report.counterexamples;
    for (bool ok : row.step_holds) {
      if (!ok) ++report.counterexamples;
    }
  }
  return report;
}

nlohmann::json InductionReport::ToJson() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const InductionRow& r : rows) {
    rows_json.push_back({{"accuracy", r.accuracy},
                         {"advantage", r.advantage},
                         {"basis_applies", r.basis_applies},
                         {"basis_holds", r.basis_holds},
                         {"step_applies", r.step_applies},
                         {"step_holds", r.step_holds}});
  }
  return {{"candidates", rows_json}, {"counterexamples", counterexamples}};
}

namespace {

nlohmann::json EstimateJson(const AdvantageEstimate& e) {
  return {{"value", e.value},
          {"radius", e.radius},
          {"nature_acceptance", e.nature_acceptance},
          {"model_acceptance", e.model_acceptance},
          {"samples", e.samples}};
}

}  // namespace

nlohmann::json HardnessDemoReport::ToJson() const {
  nlohmann::json preds = nlohmann::json::array();
  for (const DemoPredictorReport& p : predictors) {
    nlohmann::json rows = nlohmann::json::array();
    for (const DemoLevelRow& r : p.rows) {
      rows.push_back({{"level", r.level},
                      {"accuracy", r.accuracy},
                      {"exact_advantage", r.exact_advantage},
                      {"measured", EstimateJson(r.measured)},
                      {"queries", r.queries},
                      {"max_queries_per_call", r.max_queries_per_call}});
    }
    preds.push_back({{"name", p.name},
                     {"levels", rows},
                     {"matched_max_advantage", p.matched_max_advantage},
                     {"matched_argmax", p.matched_argmax}});
  }
  nlohmann::json j = {{"ensemble", ensemble},
                      {"epsilon", epsilon},
                      {"majority", majority},
                      {"query_budget", budget},
                      {"matched_family_size", matched_family_size},
                      {"predictors", preds},
                      {"verdicts",
                       {{"truth_passes", truth_passes},
                        {"cheater_caught", cheater_caught},
                        {"cheater_passes_matched", cheater_passes_matched},
                        {"pass", passed()}}}};
  if (induction) j["induction"] = induction->ToJson();
  return j;
}

HardnessDemoReport RunHardnessDemo(const HardnessDemoConfig& config) {
  if (config.ensemble != "linear") {
    throw ConfigError("hardness-demo supports --ensemble linear only");
  }
  if (config.levels < 2) throw ConfigError("hardness-demo needs at least 2 levels");
  if (config.samples == 0) throw ConfigError("hardness-demo needs samples > 0");
  auto ensemble = std::make_shared<const LinearEnsemble>(
      config.n, config.levels, DeriveSeed(config.seed, 0));
  HardInstance h = BuildHardNature(ensemble);
  if (config.epsilon) {
    if (!(*config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    h.epsilon = *config.epsilon;
  }

  HardnessDemoReport report;
  report.ensemble = ensemble->Describe();
  report.ensemble["n"] = config.n;
  report.epsilon = h.epsilon;
  report.majority = h.majority;
  report.budget = h.budget;
  const Family matched = MatchedSampleFamily(h);
  report.matched_family_size = matched.size();

  const std::vector<std::pair<std::string, Predictor>> named = {
      {"truth", TruthPredictor(h)},
      {"cheater-level-2", LevelInvertedPredictor(h, 2)},
      {"constant-half", ConstantHalfPredictor(h)}};
  for (std::size_t c = 0; c < named.size(); ++c) {
    const Predictor& p = named[c].second;
    const std::vector<double> table = p.Tabulate();
    const ModelView view(*h.nature, p, table);
    DemoPredictorReport pr;
    pr.name = named[c].first;
    for (std::size_t i = 1; i <= h.coding.levels; ++i) {
      const HardLevelDistinguisher& a = *h.levels[i - 1];
      a.ResetCounters();
      DemoLevelRow row;
      row.level = i;
      row.accuracy = AccuracyFromTable(h, table, i);
      row.exact_advantage = LinearAdvantageFromTable(h, *ensemble, table, i);
      row.measured = MonteCarloAdvantage(a, view, config.samples,
                                         DeriveSeed(config.seed, 100 * (c + 1) + i));
      row.queries = a.total_queries();
      row.max_queries_per_call = a.max_queries();
      pr.rows.push_back(row);
    }
    const std::vector<AdvantageEstimate> audit =
        AuditFamily(matched, view, AuditMode::Exact());
    for (std::size_t k = 0; k < audit.size(); ++k) {
      if (audit[k].magnitude() > pr.matched_max_advantage || k == 0) {
        pr.matched_max_advantage = audit[k].magnitude();
        pr.matched_argmax = matched[k]->id();
      }
    }
    report.predictors.push_back(std::move(pr));
  }

  const DemoPredictorReport& truth = report.predictors[0];
  const DemoPredictorReport& cheater = report.predictors[1];
  report.truth_passes = std::all_of(
      truth.rows.begin(), truth.rows.end(), [&](const DemoLevelRow& r) {
        return r.measured.magnitude() <= h.epsilon + r.measured.radius;
      });
  const AdvantageEstimate& caught = cheater.rows[1].measured;
  report.cheater_caught = caught.value - caught.radius > 10.0 * h.epsilon;
  report.cheater_passes_matched = cheater.matched_max_advantage <= h.epsilon;

  if (config.fuzz > 0) {
    std::vector<Predictor> candidates;
    for (std::size_t k = 0; k < config.fuzz; ++k) {
      candidates.push_back(FuzzedCandidate(h, DeriveSeed(config.seed, 1000 + k)));
    }
    report.induction = InductionClaimsCheck(h, candidates);
  }
  return report;
}

}  // namespace oilab
