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

#ifndef OILAB_PREDICTOR_H_
#define OILAB_PREDICTOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/distinguisher.h"
#include "oilab/individual.h"
#include "oilab/size_account.h"

namespace oilab {

// One additive update: p <- snap(clamp(p + coefficient * delta_A(i))). For
// code-access rules, description holds the serialized predictor the rule was
// audited against (always the predictor's own prefix).
struct UpdateTerm {
  double coefficient = 0.0;
  DistinguisherPtr source;
  std::shared_ptr<const std::string> description;
};

// Immutable predictor: a base map plus a stack of update terms. Values live in
// [0,1] and, when grid() > 0, on the lattice {k / grid()}.
class Predictor {
 public:
  enum class BaseKind { kConstant, kTable, kFunction };
  using BaseFn = std::function<double(const Individual&)>;

  Predictor() = default;
  static Predictor Constant(std::size_t dimension, double value);
  // values[k] is the prediction for Individual::FromIndex(dimension, k).
  static Predictor Table(std::size_t dimension, std::vector<double> values);
  // Not serializable; for truths over sampled universes.
  static Predictor Function(std::size_t dimension, BaseFn fn, std::string name);

  // Sets the lattice denominator K (spacing 1/K, half-width 1/2K) and snaps
  // the base. Only valid before any term is added.
  Predictor WithGrid(std::uint64_t denominator) const;
  Predictor WithSizeAccount(SizeAccount account) const;

  std::size_t dimension() const { return dimension_; }
  std::uint64_t grid() const { return grid_; }
  double precision() const { return grid_ == 0 ? 0.0 : 0.5 / grid_; }
  BaseKind base_kind() const { return base_kind_; }
  double base_constant() const { return base_constant_; }
  const std::vector<double>& base_table() const { return *base_table_; }
  const std::string& base_name() const { return base_name_; }
  const std::vector<UpdateTerm>& terms() const { return terms_; }
  const SizeAccount& size_account() const { return size_account_; }
  bool uses_oracle() const { return uses_oracle_; }

  double BaseValue(const Individual& i) const;
  // Throws DomainError on dimension mismatch.
  double Evaluate(const Individual& i) const;
  // All 2^d values; requires dimension <= 24.
  std::vector<double> Tabulate() const;

  // Clamp to [0,1] and round to the lattice.
  double Snap(double v) const;
  // Rounds |raw| up to a lattice multiple, keeping the sign.
  double RoundCoefficient(double raw) const;
  double Step(double value, double coefficient, double delta) const;

  // Values of prefix(k+1) given a full table of prefix(k) (== version k).
  std::vector<double> ApplyTerm(std::size_t k,
                                std::span<const double> prefix_table) const;

  Predictor Prefix(std::size_t t) const;
  // Appends a term and advances the size account. Fills in the description
  // for code-access terms when absent.
  Predictor WithTerm(UpdateTerm term) const;

  // {dimension, base, grid, precision, terms[], size_account}. This exact
  // string is what code-access rules receive.
  nlohmann::json ToJson() const;
  std::string Description() const;

 private:
  class Evaluator;

  std::size_t dimension_ = 0;
  std::uint64_t grid_ = 0;
  BaseKind base_kind_ = BaseKind::kConstant;
  double base_constant_ = 0.5;
  std::shared_ptr<const std::vector<double>> base_table_;
  BaseFn base_fn_;
  std::string base_name_;
  std::vector<UpdateTerm> terms_;
  SizeAccount size_account_;
  bool uses_oracle_ = false;
};

// Oracle that evaluates a predictor pointwise.
class PredictorOracle : public Oracle {
 public:
  explicit PredictorOracle(const Predictor& p) : p_(p) {}
  double Query(const Individual& i) const override { return p_.Evaluate(i); }
  std::uint64_t version() const override { return p_.terms().size(); }

 private:
  const Predictor& p_;
};

// Round-to-nearest Boolean with 0.5 mapped to 1.
inline int RoundPrediction(double v) { return v >= 0.5 ? 1 : 0; }

}  // namespace oilab

#endif  // OILAB_PREDICTOR_H_
