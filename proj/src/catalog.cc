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

#include "oilab/catalog.h"

#include <cmath>
#include <numeric>

#include "oilab/error.h"

namespace oilab {

namespace {

bool Passes(const OutcomeFilter& filter, int o) {
  return !filter || *filter == o;
}

nlohmann::json FilterJson(const OutcomeFilter& filter) {
  return filter ? nlohmann::json(*filter) : nlohmann::json(nullptr);
}

OutcomeFilter ParseFilter(const nlohmann::json& rule) {
  if (!rule.contains("outcome") || rule.at("outcome").is_null()) {
    return std::nullopt;
  }
  const int o = rule.at("outcome").get<int>();
  if (o != 0 && o != 1) throw ConfigError("outcome filter must be 0, 1 or null");
  return o;
}

}  // namespace

SubsetDistinguisher::SubsetDistinguisher(std::string id, MembershipPtr set,
                                         OutcomeFilter outcome,
                                         std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kNoAccess, 0, cost),
      set_(std::move(set)),
      outcome_(outcome) {}

int SubsetDistinguisher::DecideImpl(const Individual& i, int o,
                                    const AccessContext&, Rng&) const {
  return Passes(outcome_, o) && set_->Contains(i);
}

nlohmann::json SubsetDistinguisher::RuleJson() const {
  return {{"type", "subset"}, {"set", set_->ToJson()},
          {"outcome", FilterJson(outcome_)}};
}

LevelSetDistinguisher::LevelSetDistinguisher(std::string id, double center,
                                             double radius, MembershipPtr set,
                                             OutcomeFilter outcome,
                                             std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kSampleAccess, 0, cost),
      center_(center),
      radius_(radius),
      set_(std::move(set)),
      outcome_(outcome) {}

int LevelSetDistinguisher::DecideImpl(const Individual& i, int o,
                                      const AccessContext& ctx, Rng&) const {
  if (!Passes(outcome_, o) || !set_->Contains(i)) return 0;
  // Bin edges are inclusive; the slack absorbs rounding in k/2m centers.
  return std::fabs(center_ - RequirePrediction(ctx)) <= radius_ + 1e-12;
}

nlohmann::json LevelSetDistinguisher::RuleJson() const {
  return {{"type", "level-set"}, {"center", center_}, {"radius", radius_},
          {"set", set_->ToJson()}, {"outcome", FilterJson(outcome_)}};
}

ThresholdDistinguisher::ThresholdDistinguisher(std::string id, std::string op,
                                               double value, MembershipPtr set,
                                               OutcomeFilter outcome,
                                               std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kSampleAccess, 0, cost),
      op_(std::move(op)),
      value_(value),
      set_(std::move(set)),
      outcome_(outcome) {
  if (op_ != "<" && op_ != "<=" && op_ != ">" && op_ != ">=") {
    throw ConfigError("unknown threshold operator '" + op_ + "'");
  }
}

int ThresholdDistinguisher::DecideImpl(const Individual& i, int o,
                                       const AccessContext& ctx, Rng&) const {
  if (!Passes(outcome_, o) || !set_->Contains(i)) return 0;
  const double v = RequirePrediction(ctx);
  if (op_ == "<") return v < value_;
  if (op_ == "<=") return v <= value_;
  if (op_ == ">") return v > value_;
  return v >= value_;
}

nlohmann::json ThresholdDistinguisher::RuleJson() const {
  return {{"type", "threshold"}, {"op", op_}, {"value", value_},
          {"set", set_->ToJson()}, {"outcome", FilterJson(outcome_)}};
}

TableDistinguisher::TableDistinguisher(std::string id, std::size_t dimension,
                                       std::vector<std::uint8_t> accept,
                                       std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kNoAccess, 0, cost),
      dimension_(dimension),
      accept_(std::move(accept)) {
  if (dimension_ > 12) throw ConfigError("table rules are limited to d <= 12");
  if (accept_.size() != (std::size_t{2} << dimension_)) {
    throw ConfigError("table rule needs 2^(d+1) entries");
  }
}

int TableDistinguisher::DecideImpl(const Individual& i, int o,
                                   const AccessContext&, Rng&) const {
  if (i.dimension() != dimension_) throw DomainError("table rule dimension mismatch");
  return accept_[2 * i.index() + (o != 0)] != 0;
}

nlohmann::json TableDistinguisher::RuleJson() const {
  std::string bits(accept_.size(), '0');
  for (std::size_t k = 0; k < accept_.size(); ++k) {
    if (accept_[k]) bits[k] = '1';
  }
  return {{"type", "table"}, {"dimension", dimension_}, {"accept", bits}};
}

ConstantDistinguisher::ConstantDistinguisher(std::string id, int value,
                                             std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kNoAccess, 0, cost),
      value_(value != 0) {}

int ConstantDistinguisher::DecideImpl(const Individual&, int,
                                      const AccessContext&, Rng&) const {
  return value_;
}

nlohmann::json ConstantDistinguisher::RuleJson() const {
  return {{"type", "constant"}, {"value", value_}};
}

OracleThresholdDistinguisher::OracleThresholdDistinguisher(
    std::string id, std::vector<Individual> masks, double threshold,
    OutcomeFilter outcome, std::uint64_t budget, std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kOracleAccess, budget, cost),
      masks_(std::move(masks)),
      threshold_(threshold),
      outcome_(outcome) {}

int OracleThresholdDistinguisher::DecideImpl(const Individual& i, int o,
                                             const AccessContext& ctx,
                                             Rng&) const {
  if (!Passes(outcome_, o)) return 0;
  if (ctx.oracle == nullptr) {
    throw DomainError("oracle rule '" + id() + "' invoked without an oracle");
  }
  if (masks_.empty()) return 0;
  double sum = 0.0;
  for (const Individual& m : masks_) sum += ctx.oracle->Query(i ^ m);
  return sum / static_cast<double>(masks_.size()) > threshold_;
}

nlohmann::json OracleThresholdDistinguisher::RuleJson() const {
  nlohmann::json masks = nlohmann::json::array();
  for (const Individual& m : masks_) masks.push_back(m.ToString());
  return {{"type", "oracle-threshold"}, {"masks", std::move(masks)},
          {"threshold", threshold_}, {"outcome", FilterJson(outcome_)}};
}

CodeSimulateDistinguisher::CodeSimulateDistinguisher(std::string id,
                                                     DistinguisherPtr inner)
    : Distinguisher(std::move(id), AccessLevel::kCodeAccess, 0, inner->cost()),
      inner_(std::move(inner)) {}

std::shared_ptr<const CodeSimulateDistinguisher::Simulated>
CodeSimulateDistinguisher::Load(const AccessContext& ctx) const {
  if (!ctx.description) {
    throw DomainError("code rule '" + id() + "' invoked without a description");
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (cache_ && (cache_->key == ctx.description ||
                   *cache_->key == *ctx.description)) {
      return cache_;
    }
  }
  auto sim = std::make_shared<Simulated>();
  sim->key = ctx.description;
  sim->predictor = std::make_shared<const Predictor>(
      PredictorFromJson(nlohmann::json::parse(*ctx.description)));
  if (sim->predictor->dimension() <= 20) {
    sim->table =
        std::make_shared<const std::vector<double>>(sim->predictor->Tabulate());
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_ = sim;
  return sim;
}

double CodeSimulateDistinguisher::AcceptanceImpl(const Individual& i, int o,
                                                 const AccessContext& ctx) const {
  auto sim = Load(ctx);
  const std::uint64_t version = sim->predictor->terms().size();
  if (sim->table) {
    TableOracle oracle(sim->predictor->dimension(), *sim->table, version);
    return inner_->Acceptance(i, o, {ctx.prediction, &oracle, nullptr});
  }
  PredictorOracle oracle(*sim->predictor);
  return inner_->Acceptance(i, o, {ctx.prediction, &oracle, nullptr});
}

int CodeSimulateDistinguisher::DecideImpl(const Individual& i, int o,
                                          const AccessContext& ctx,
                                          Rng& rng) const {
  auto sim = Load(ctx);
  const std::uint64_t version = sim->predictor->terms().size();
  if (sim->table) {
    TableOracle oracle(sim->predictor->dimension(), *sim->table, version);
    return inner_->Decide(i, o, {ctx.prediction, &oracle, nullptr}, rng);
  }
  PredictorOracle oracle(*sim->predictor);
  return inner_->Decide(i, o, {ctx.prediction, &oracle, nullptr}, rng);
}

nlohmann::json CodeSimulateDistinguisher::RuleJson() const {
  return {{"type", "code-simulate"}, {"inner", inner_->ToJson()}};
}

CodeTermsDistinguisher::CodeTermsDistinguisher(std::string id,
                                               std::size_t min_terms,
                                               OutcomeFilter outcome,
                                               std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kCodeAccess, 0, cost),
      min_terms_(min_terms),
      outcome_(outcome) {}

int CodeTermsDistinguisher::DecideImpl(const Individual&, int o,
                                       const AccessContext& ctx, Rng&) const {
  if (!Passes(outcome_, o)) return 0;
  if (!ctx.description) {
    throw DomainError("code rule '" + id() + "' invoked without a description");
  }
  const auto j = nlohmann::json::parse(*ctx.description);
  return j.at("terms").size() >= min_terms_;
}

nlohmann::json CodeTermsDistinguisher::RuleJson() const {
  return {{"type", "code-terms"}, {"min_terms", min_terms_},
          {"outcome", FilterJson(outcome_)}};
}

ComplementDistinguisher::ComplementDistinguisher(std::string id,
                                                 DistinguisherPtr inner)
    : Distinguisher(std::move(id), inner->level(), inner->budget(),
                    inner->cost()),
      inner_(std::move(inner)) {}

double ComplementDistinguisher::AcceptanceImpl(const Individual& i, int o,
                                               const AccessContext& ctx) const {
  return 1.0 - inner_->Acceptance(i, o, ctx);
}

int ComplementDistinguisher::DecideImpl(const Individual& i, int o,
                                        const AccessContext& ctx,
                                        Rng& rng) const {
  return 1 - inner_->Decide(i, o, ctx, rng);
}

nlohmann::json ComplementDistinguisher::RuleJson() const {
  return {{"type", "complement"}, {"inner", inner_->ToJson()}};
}

namespace {

AccessLevel MaxLevel(const std::vector<DistinguisherPtr>& rules) {
  AccessLevel level = AccessLevel::kNoAccess;
  for (const auto& r : rules) level = std::max(level, r->level());
  return level;
}

std::uint64_t MaxBudget(const std::vector<DistinguisherPtr>& rules) {
  std::uint64_t b = 0;
  for (const auto& r : rules) b = std::max(b, r->budget());
  return b;
}

}  // namespace

MixtureDistinguisher::MixtureDistinguisher(std::string id,
                                           std::vector<double> weights,
                                           std::vector<DistinguisherPtr> rules,
                                           std::uint64_t cost)
    : Distinguisher(std::move(id), MaxLevel(rules), MaxBudget(rules), cost),
      weights_(std::move(weights)),
      rules_(std::move(rules)) {
  if (weights_.size() != rules_.size() || rules_.empty()) {
    throw ConfigError("mixture needs one weight per rule");
  }
  if (rules_.size() > kMaxFiniteRandomnessAtoms) {
    throw ConfigError("mixture exceeds the finite randomness limit");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ConfigError("negative mixture weight");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
}

bool MixtureDistinguisher::serializable() const {
  for (const auto& r : rules_) {
    if (!r->serializable()) return false;
  }
  return true;
}

bool MixtureDistinguisher::has_exact_acceptance() const {
  for (const auto& r : rules_) {
    if (!r->has_exact_acceptance()) return false;
  }
  return true;
}

double MixtureDistinguisher::AcceptanceImpl(const Individual& i, int o,
                                            const AccessContext& ctx) const {
  double p = 0.0;
  for (std::size_t k = 0; k < rules_.size(); ++k) {
    if (weights_[k] > 0.0) p += weights_[k] * rules_[k]->Acceptance(i, o, ctx);
  }
  return p;
}

int MixtureDistinguisher::DecideImpl(const Individual& i, int o,
                                     const AccessContext& ctx, Rng& rng) const {
  double u = Uniform01(rng);
  std::size_t k = 0;
  while (k + 1 < rules_.size() && u >= weights_[k]) u -= weights_[k++];
  return rules_[k]->Decide(i, o, ctx, rng);
}

nlohmann::json MixtureDistinguisher::RuleJson() const {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : rules_) rules.push_back(r->ToJson());
  return {{"type", "mixture"}, {"weights", weights_}, {"rules", std::move(rules)}};
}

DistinguisherPtr DistinguisherFromJson(const nlohmann::json& j,
                                       std::size_t dimension) {
  try {
    const std::string id = j.at("id").get<std::string>();
    const AccessLevel level = ParseAccessLevel(j.at("level").get<std::string>());
    const std::uint64_t cost = j.value("cost", std::uint64_t{1});
    const std::uint64_t budget = j.value("budget", std::uint64_t{0});
    const nlohmann::json& rule = j.at("rule");
    const std::string type = rule.at("type").get<std::string>();
    auto set_of = [&](const char* key) {
      return rule.contains(key) ? MembershipFromJson(rule.at(key), dimension)
                                : AllMembers();
    };
    DistinguisherPtr out;
    if (type == "subset" || type == "subset-indicator") {
      out = std::make_shared<SubsetDistinguisher>(id, set_of("set"),
                                                  ParseFilter(rule), cost);
    } else if (type == "conjunction" || type == "parity") {
      out = std::make_shared<SubsetDistinguisher>(
          id, MembershipFromJson(rule, dimension), ParseFilter(rule), cost);
    } else if (type == "level-set") {
      out = std::make_shared<LevelSetDistinguisher>(
          id, rule.at("center").get<double>(), rule.at("radius").get<double>(),
          set_of("set"), ParseFilter(rule), cost);
    } else if (type == "threshold") {
      out = std::make_shared<ThresholdDistinguisher>(
          id, rule.at("op").get<std::string>(), rule.at("value").get<double>(),
          set_of("set"), ParseFilter(rule), cost);
    } else if (type == "table") {
      const std::string bits = rule.at("accept").get<std::string>();
      std::vector<std::uint8_t> accept(bits.size());
      for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != '0' && bits[k] != '1') {
          throw ConfigError("table rule accepts only 0/1 characters");
        }
        accept[k] = bits[k] == '1';
      }
      out = std::make_shared<TableDistinguisher>(
          id, rule.value("dimension", dimension), std::move(accept), cost);
    } else if (type == "constant") {
      out = std::make_shared<ConstantDistinguisher>(id, rule.at("value").get<int>(),
                                                    cost);
    } else if (type == "oracle-threshold") {
      std::vector<Individual> masks;
      for (const auto& m : rule.at("masks")) {
        masks.push_back(Individual::FromString(m.get<std::string>()));
        if (masks.back().dimension() != dimension) {
          throw ConfigError("oracle mask has wrong dimension");
        }
      }
      out = std::make_shared<OracleThresholdDistinguisher>(
          id, std::move(masks), rule.at("threshold").get<double>(),
          ParseFilter(rule), budget, cost);
    } else if (type == "code-simulate") {
      out = std::make_shared<CodeSimulateDistinguisher>(
          id, DistinguisherFromJson(rule.at("inner"), dimension));
    } else if (type == "code-terms") {
      out = std::make_shared<CodeTermsDistinguisher>(
          id, rule.at("min_terms").get<std::size_t>(), ParseFilter(rule), cost);
    } else if (type == "complement") {
      out = std::make_shared<ComplementDistinguisher>(
          id, DistinguisherFromJson(rule.at("inner"), dimension));
    } else if (type == "mixture") {
      std::vector<DistinguisherPtr> rules;
      for (const auto& r : rule.at("rules")) {
        rules.push_back(DistinguisherFromJson(r, dimension));
      }
      out = std::make_shared<MixtureDistinguisher>(
          id, rule.at("weights").get<std::vector<double>>(), std::move(rules),
          cost);
    } else {
      throw ConfigError("unknown rule type '" + type + "'");
    }
    if (out->level() != level) {
      throw ConfigError("rule '" + id + "' of type " + type +
                        " cannot run at level " + std::string(ToString(level)));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed distinguisher: ") + e.what());
  }
}

Family FamilyFromJson(const nlohmann::json& j, std::size_t dimension) {
  if (!j.is_array()) throw ConfigError("family file must be a list");
  Family family;
  for (const auto& entry : j) family.push_back(DistinguisherFromJson(entry, dimension));
  return family;
}

nlohmann::json FamilyToJson(const Family& family) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : family) out.push_back(a->ToJson());
  return out;
}

Predictor PredictorFromJson(const nlohmann::json& j) {
  try {
    const std::size_t dimension = j.at("dimension").get<std::size_t>();
    const nlohmann::json& base = j.at("base");
    Predictor p;
    if (base.is_number()) {
      p = Predictor::Constant(dimension, base.get<double>());
    } else {
      p = Predictor::Table(dimension, base.at("table").get<std::vector<double>>());
    }
    const std::uint64_t grid = j.value("grid", std::uint64_t{0});
    if (grid > 0) p = p.WithGrid(grid);
    if (j.contains("size_account")) {
      const SizeAccount stored = SizeAccount::FromJson(j.at("size_account"));
      p = p.WithSizeAccount(SizeAccount(stored.initial()));
    }
    for (const auto& term : j.value("terms", nlohmann::json::array())) {
      p = p.WithTerm({term.at("coefficient").get<double>(),
                      DistinguisherFromJson(term.at("distinguisher"), dimension),
                      nullptr});
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed predictor: ") + e.what());
  }
}

}  // namespace oilab
