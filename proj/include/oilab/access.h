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

#ifndef OILAB_ACCESS_H_
#define OILAB_ACCESS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "oilab/individual.h"

namespace oilab {

// The four levels of access a distinguisher may have to the predictor under
// test, ordered by power.
enum class AccessLevel {
  kNoAccess = 0,
  kSampleAccess = 1,
  kOracleAccess = 2,
  kCodeAccess = 3,
};

std::string_view ToString(AccessLevel level);
AccessLevel ParseAccessLevel(std::string_view text);

// Query interface to a predictor. version() identifies which iterate of a
// construction the oracle serves (the number of update terms).
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual double Query(const Individual& i) const = 0;
  virtual std::uint64_t version() const { return 0; }
};

// Oracle over a dense value table indexed by Individual::index().
class TableOracle : public Oracle {
 public:
  TableOracle(std::size_t dimension, std::span<const double> values,
              std::uint64_t version = 0)
      : dimension_(dimension), values_(values), version_(version) {}

  double Query(const Individual& i) const override;
  std::uint64_t version() const override { return version_; }

 private:
  std::size_t dimension_;
  std::span<const double> values_;
  std::uint64_t version_;
};

// Counts queries and throws QueryBudgetExceeded on the (budget+1)-th one.
// One instance per distinguisher invocation; never shared.
class BudgetedOracle : public Oracle {
 public:
  BudgetedOracle(const Oracle& inner, std::uint64_t budget)
      : inner_(inner), budget_(budget) {}

  double Query(const Individual& i) const override;
  std::uint64_t version() const override { return inner_.version(); }
  std::uint64_t used() const { return used_; }
  std::uint64_t budget() const { return budget_; }

 private:
  const Oracle& inner_;
  std::uint64_t budget_;
  mutable std::uint64_t used_ = 0;
};

// Everything a distinguisher may see besides the (individual, outcome) pair.
// Fields above the distinguisher's access level are withheld by
// Distinguisher::Decide before the rule runs.
struct AccessContext {
  std::optional<double> prediction;
  const Oracle* oracle = nullptr;
  std::shared_ptr<const std::string> description;
};

}  // namespace oilab

#endif  // OILAB_ACCESS_H_
