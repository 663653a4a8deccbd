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

#ifndef OILAB_DISTINGUISHER_H_
#define OILAB_DISTINGUISHER_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/access.h"
#include "oilab/individual.h"
#include "oilab/rng.h"

namespace oilab {

// How a rule uses internal coins. Finite rules marginalize their coins exactly
// in Acceptance(); continuous rules are Monte-Carlo only unless they override
// AcceptanceImpl with a closed form.
enum class Randomness { kDeterministic, kFinite, kContinuous };

inline constexpr std::uint64_t kMaxFiniteRandomnessAtoms = 1 << 16;

// A single-sample decision rule A(i, o[, v][, oracle][, description]).
//
// The public entry points withhold everything above level() from the context
// and, for oracle-access rules, route queries through a fresh BudgetedOracle,
// so an overspending rule raises QueryBudgetExceeded.
class Distinguisher {
 public:
  Distinguisher(std::string id, AccessLevel level, std::uint64_t budget,
                std::uint64_t cost);
  virtual ~Distinguisher() = default;

  const std::string& id() const { return id_; }
  AccessLevel level() const { return level_; }
  std::uint64_t budget() const { return budget_; }
  std::uint64_t cost() const { return cost_; }

  virtual Randomness randomness() const { return Randomness::kDeterministic; }
  virtual bool has_exact_acceptance() const {
    return randomness() != Randomness::kContinuous;
  }
  bool deterministic() const {
    return randomness() == Randomness::kDeterministic;
  }

  // Probability of accepting, marginalized over the rule's own coins.
  double Acceptance(const Individual& i, int outcome,
                    const AccessContext& ctx) const;
  // A single run; rng is consumed only by randomized rules.
  int Decide(const Individual& i, int outcome, const AccessContext& ctx,
             Rng& rng) const;
  // Acceptance(i, 1) - Acceptance(i, 0).
  double Delta(const Individual& i, const AccessContext& ctx) const;

  // {id, level, budget, cost, rule}. Throws ConfigError for rules that live
  // only in memory.
  nlohmann::json ToJson() const;
  virtual bool serializable() const { return false; }

 protected:
  virtual double AcceptanceImpl(const Individual& i, int outcome,
                                const AccessContext& ctx) const;
  virtual int DecideImpl(const Individual& i, int outcome,
                         const AccessContext& ctx, Rng& rng) const = 0;
  virtual nlohmann::json RuleJson() const;

  // Prediction value, or DomainError if the context carries none.
  static double RequirePrediction(const AccessContext& ctx);

 private:
  std::string id_;
  AccessLevel level_;
  std::uint64_t budget_;
  std::uint64_t cost_;
};

using DistinguisherPtr = std::shared_ptr<const Distinguisher>;
using Family = std::vector<DistinguisherPtr>;

// Restricts ctx to what a rule of the given level may see.
AccessContext RestrictContext(const AccessContext& ctx, AccessLevel level);

// Rule backed by a plain callable, for tests and programmatic families.
class LambdaDistinguisher : public Distinguisher {
 public:
  using Fn = std::function<int(const Individual&, int, const AccessContext&)>;
  LambdaDistinguisher(std::string id, AccessLevel level, std::uint64_t budget,
                      std::uint64_t cost, Fn fn)
      : Distinguisher(std::move(id), level, budget, cost),
        fn_(std::move(fn)) {}

 protected:
  int DecideImpl(const Individual& i, int outcome, const AccessContext& ctx,
                 Rng&) const override {
    return fn_(i, outcome, ctx);
  }

 private:
  Fn fn_;
};

}  // namespace oilab

#endif  // OILAB_DISTINGUISHER_H_
