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

#include "oilab/predictor.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "oilab/error.h"

namespace oilab {

namespace {

void CheckUnit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(what) + " outside [0,1]: " +
                      std::to_string(v));
  }
}

SizeAccount InitialAccount(std::size_t dimension) {
  return SizeAccount(SizeBound(std::max<std::size_t>(1, dimension)));
}

}  // namespace

Predictor Predictor::Constant(std::size_t dimension, double value) {
  CheckUnit(value, "constant prediction");
  Predictor p;
  p.dimension_ = dimension;
  p.base_kind_ = BaseKind::kConstant;
  p.base_constant_ = value;
  p.size_account_ = InitialAccount(dimension);
  return p;
}

Predictor Predictor::Table(std::size_t dimension, std::vector<double> values) {
  if (dimension > kMaxExplicitDimension) {
    throw DomainError("table predictors are limited to dimension 24");
  }
  if (values.size() != (std::size_t{1} << dimension)) {
    throw DomainError("predictor table has " + std::to_string(values.size()) +
                      " entries, expected 2^" + std::to_string(dimension));
  }
  for (double v : values) CheckUnit(v, "table prediction");
  Predictor p;
  p.dimension_ = dimension;
  p.base_kind_ = BaseKind::kTable;
  p.base_table_ = std::make_shared<const std::vector<double>>(std::move(values));
  p.size_account_ = InitialAccount(dimension);
  return p;
}

Predictor Predictor::Function(std::size_t dimension, BaseFn fn,
                              std::string name) {
  Predictor p;
  p.dimension_ = dimension;
  p.base_kind_ = BaseKind::kFunction;
  p.base_fn_ = std::move(fn);
  p.base_name_ = std::move(name);
  p.size_account_ = InitialAccount(dimension);
  return p;
}

Predictor Predictor::WithGrid(std::uint64_t denominator) const {
  if (!terms_.empty()) {
    throw ConfigError("grid can only be set on a predictor without terms");
  }
  Predictor p = *this;
  p.grid_ = denominator;
  if (base_kind_ == BaseKind::kConstant) {
    p.base_constant_ = p.Snap(base_constant_);
  } else if (base_kind_ == BaseKind::kTable) {
    std::vector<double> snapped(*base_table_);
    for (double& v : snapped) v = p.Snap(v);
    p.base_table_ = std::make_shared<const std::vector<double>>(std::move(snapped));
  }
  return p;
}

Predictor Predictor::WithSizeAccount(SizeAccount account) const {
  Predictor p = *this;
  p.size_account_ = std::move(account);
  return p;
}

double Predictor::BaseValue(const Individual& i) const {
  switch (base_kind_) {
    case BaseKind::kConstant:
      return base_constant_;
    case BaseKind::kTable:
      return (*base_table_)[i.index()];
    case BaseKind::kFunction:
      return Snap(base_fn_(i));
  }
  return base_constant_;
}

double Predictor::Snap(double v) const {
  v = std::clamp(v, 0.0, 1.0);
  if (grid_ == 0) return v;
  const double k = static_cast<double>(grid_);
  return std::nearbyint(v * k) / k;
}

double Predictor::RoundCoefficient(double raw) const {
  if (grid_ == 0 || raw == 0.0) return raw;
  const double k = static_cast<double>(grid_);
  const double steps = std::ceil(std::fabs(raw) * k - 1e-9);
  return std::copysign(std::max(steps, 1.0) / k, raw);
}

double Predictor::Step(double value, double coefficient, double delta) const {
  return Snap(value + coefficient * delta);
}

// Pointwise evaluation with memoized prefixes, so an oracle-access term that
// queries the previous iterate does not re-expand the whole stack per query.
class Predictor::Evaluator {
 public:
  explicit Evaluator(const Predictor& p) : p_(p), memo_(p.terms_.size() + 1) {}

  double At(const Individual& i, std::size_t k) {
    std::size_t start = k;
    double v = 0.0;
    while (start > 0) {
      auto it = memo_[start].find(i);
      if (it != memo_[start].end()) {
        v = it->second;
        break;
      }
      --start;
    }
    if (start == 0) v = p_.BaseValue(i);
    for (std::size_t t = start; t < k; ++t) {
      v = Advance(i, t, v);
      memo_[t + 1].emplace(i, v);
    }
    return v;
  }

 private:
  class PrefixOracle : public Oracle {
   public:
    PrefixOracle(Evaluator& ev, std::size_t k) : ev_(ev), k_(k) {}
    double Query(const Individual& i) const override { return ev_.At(i, k_); }
    std::uint64_t version() const override { return k_; }

   private:
    Evaluator& ev_;
    std::size_t k_;
  };

  double Advance(const Individual& i, std::size_t t, double v) {
    const UpdateTerm& term = p_.terms_[t];
    PrefixOracle oracle(*this, t);
    AccessContext ctx{v, &oracle, term.description};
    return p_.Step(v, term.coefficient, term.source->Delta(i, ctx));
  }

  const Predictor& p_;
  std::vector<std::unordered_map<Individual, double>> memo_;
};

double Predictor::Evaluate(const Individual& i) const {
  if (i.dimension() != dimension_) {
    throw DomainError("individual has dimension " +
                      std::to_string(i.dimension()) + ", predictor expects " +
                      std::to_string(dimension_));
  }
  if (!uses_oracle_) {
    double v = BaseValue(i);
    for (const UpdateTerm& term : terms_) {
      AccessContext ctx{v, nullptr, term.description};
      v = Step(v, term.coefficient, term.source->Delta(i, ctx));
    }
    return v;
  }
  Evaluator ev(*this);
  return ev.At(i, terms_.size());
}

std::vector<double> Predictor::Tabulate() const {
  if (dimension_ > kMaxExplicitDimension) {
    throw ConfigError("tabulation requires dimension <= 24");
  }
  const std::size_t size = std::size_t{1} << dimension_;
  std::vector<double> table(size);
  if (base_kind_ == BaseKind::kTable) {
    table = *base_table_;
  } else {
    for (std::size_t k = 0; k < size; ++k) {
      table[k] = BaseValue(Individual::FromIndex(dimension_, k));
    }
  }
  for (std::size_t t = 0; t < terms_.size(); ++t) table = ApplyTerm(t, table);
  return table;
}

std::vector<double> Predictor::ApplyTerm(
    std::size_t k, std::span<const double> prefix_table) const {
  const UpdateTerm& term = terms_.at(k);
  TableOracle oracle(dimension_, prefix_table, k);
  std::vector<double> next(prefix_table.size());
  for (std::size_t j = 0; j < prefix_table.size(); ++j) {
    const Individual i = Individual::FromIndex(dimension_, j);
    AccessContext ctx{prefix_table[j], &oracle, term.description};
    next[j] = Step(prefix_table[j], term.coefficient,
                   term.source->Delta(i, ctx));
  }
  return next;
}

Predictor Predictor::Prefix(std::size_t t) const {
  if (t > terms_.size()) throw DomainError("prefix longer than term stack");
  Predictor p = *this;
  p.terms_.resize(t);
  p.uses_oracle_ = false;
  SizeAccount account(size_account_.initial());
  for (const UpdateTerm& term : p.terms_) {
    p.uses_oracle_ |= term.source->level() == AccessLevel::kOracleAccess;
    account = account.Advanced(term.source->level(), term.source->cost(),
                               term.source->budget());
  }
  p.size_account_ = account;
  return p;
}

Predictor Predictor::WithTerm(UpdateTerm term) const {
  if (!term.source) throw ConfigError("update term without a distinguisher");
  const AccessLevel level = term.source->level();
  if (level == AccessLevel::kCodeAccess && !term.description) {
    term.description = std::make_shared<const std::string>(Description());
  }
  Predictor p = *this;
  p.size_account_ =
      size_account_.Advanced(level, term.source->cost(), term.source->budget());
  p.uses_oracle_ |= level == AccessLevel::kOracleAccess;
  p.terms_.push_back(std::move(term));
  return p;
}

nlohmann::json Predictor::ToJson() const {
  nlohmann::json j;
  j["dimension"] = dimension_;
  switch (base_kind_) {
    case BaseKind::kConstant:
      j["base"] = base_constant_;
      break;
    case BaseKind::kTable:
      j["base"] = {{"table", *base_table_}};
      break;
    case BaseKind::kFunction:
      throw ConfigError("function-based predictor '" + base_name_ +
                        "' cannot be serialized");
  }
  j["grid"] = grid_;
  j["precision"] = precision();
  nlohmann::json terms = nlohmann::json::array();
  for (const UpdateTerm& term : terms_) {
    terms.push_back({{"coefficient", term.coefficient},
                     {"distinguisher", term.source->ToJson()}});
  }
  j["terms"] = std::move(terms);
  j["size_account"] = size_account_.ToJson();
  return j;
}

std::string Predictor::Description() const { return ToJson().dump(); }

}  // namespace oilab
