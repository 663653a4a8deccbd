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

#ifndef OILAB_CATALOG_H_
#define OILAB_CATALOG_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/distinguisher.h"
#include "oilab/membership.h"
#include "oilab/predictor.h"

namespace oilab {

// Outcome filter: accept only this outcome, or either when empty.
using OutcomeFilter = std::optional<int>;

// Accepts iff i in S and the outcome passes the filter. With filter 1 this
// is the multi-accuracy test A_S(i, b) = 1[i in S and b = 1].
class SubsetDistinguisher : public Distinguisher {
 public:
  SubsetDistinguisher(std::string id, MembershipPtr set, OutcomeFilter outcome,
                      std::uint64_t cost = 1);
  const MembershipRule& set() const { return *set_; }
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  MembershipPtr set_;
  OutcomeFilter outcome_;
};

// Accepts iff i in S, |center - v| <= radius and the outcome passes.
class LevelSetDistinguisher : public Distinguisher {
 public:
  LevelSetDistinguisher(std::string id, double center, double radius,
                        MembershipPtr set, OutcomeFilter outcome,
                        std::uint64_t cost = 1);
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  double center_;
  double radius_;
  MembershipPtr set_;
  OutcomeFilter outcome_;
};

// Accepts iff i in S, "v op value" holds and the outcome passes; op is one of
// "<", "<=", ">", ">=".
class ThresholdDistinguisher : public Distinguisher {
 public:
  ThresholdDistinguisher(std::string id, std::string op, double value,
                         MembershipPtr set, OutcomeFilter outcome,
                         std::uint64_t cost = 1);
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  std::string op_;
  double value_;
  MembershipPtr set_;
  OutcomeFilter outcome_;
};

// Full acceptance table over (i, o) for d <= 12; accept[2 * index + o].
class TableDistinguisher : public Distinguisher {
 public:
  TableDistinguisher(std::string id, std::size_t dimension,
                     std::vector<std::uint8_t> accept, std::uint64_t cost = 1);
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  std::size_t dimension_;
  std::vector<std::uint8_t> accept_;
};

class ConstantDistinguisher : public Distinguisher {
 public:
  ConstantDistinguisher(std::string id, int value, std::uint64_t cost = 1);
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  int value_;
};

// Oracle rule: accepts iff the mean of p(i xor mask_k) over the masks
// exceeds the threshold and the outcome passes. Needs budget >= #masks.
class OracleThresholdDistinguisher : public Distinguisher {
 public:
  OracleThresholdDistinguisher(std::string id, std::vector<Individual> masks,
                               double threshold, OutcomeFilter outcome,
                               std::uint64_t budget, std::uint64_t cost = 1);
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  std::vector<Individual> masks_;
  double threshold_;
  OutcomeFilter outcome_;
};

// Code-access rule that rebuilds the predictor from its description and runs
// an oracle-access rule against it. Decisions coincide with the inner rule
// given the corresponding oracle.
class CodeSimulateDistinguisher : public Distinguisher {
 public:
  CodeSimulateDistinguisher(std::string id, DistinguisherPtr inner);
  bool serializable() const override { return inner_->serializable(); }
  Randomness randomness() const override { return inner_->randomness(); }

 protected:
  double AcceptanceImpl(const Individual& i, int o,
                        const AccessContext& ctx) const override;
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  struct Simulated {
    std::shared_ptr<const std::string> key;
    std::shared_ptr<const Predictor> predictor;
    std::shared_ptr<const std::vector<double>> table;
  };
  std::shared_ptr<const Simulated> Load(const AccessContext& ctx) const;

  DistinguisherPtr inner_;
  mutable std::mutex mu_;
  mutable std::shared_ptr<const Simulated> cache_;
};

// Code-access rule reading only the description: accepts iff the predictor
// has at least min_terms update terms and the outcome passes.
class CodeTermsDistinguisher : public Distinguisher {
 public:
  CodeTermsDistinguisher(std::string id, std::size_t min_terms,
                         OutcomeFilter outcome, std::uint64_t cost = 1);
  bool serializable() const override { return true; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  std::size_t min_terms_;
  OutcomeFilter outcome_;
};

// 1 - A.
class ComplementDistinguisher : public Distinguisher {
 public:
  ComplementDistinguisher(std::string id, DistinguisherPtr inner);
  bool serializable() const override { return inner_->serializable(); }
  Randomness randomness() const override { return inner_->randomness(); }
  bool has_exact_acceptance() const override {
    return inner_->has_exact_acceptance();
  }

 protected:
  double AcceptanceImpl(const Individual& i, int o,
                        const AccessContext& ctx) const override;
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  DistinguisherPtr inner_;
};

// Runs rule k with probability weights[k]: a randomized rule whose coin space
// is finite, so its acceptance is marginalized exactly.
class MixtureDistinguisher : public Distinguisher {
 public:
  MixtureDistinguisher(std::string id, std::vector<double> weights,
                       std::vector<DistinguisherPtr> rules,
                       std::uint64_t cost = 1);
  bool serializable() const override;
  Randomness randomness() const override { return Randomness::kFinite; }
  bool has_exact_acceptance() const override;

 protected:
  double AcceptanceImpl(const Individual& i, int o,
                        const AccessContext& ctx) const override;
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  std::vector<double> weights_;
  std::vector<DistinguisherPtr> rules_;
};

// Parses {id, level, budget?, cost, rule}. Rule types: subset (aliases
// subset-indicator, conjunction, parity), level-set, threshold, table,
// constant, oracle-threshold, code-simulate, code-terms, complement, mixture.
DistinguisherPtr DistinguisherFromJson(const nlohmann::json& j,
                                       std::size_t dimension);
Family FamilyFromJson(const nlohmann::json& j, std::size_t dimension);
nlohmann::json FamilyToJson(const Family& family);

Predictor PredictorFromJson(const nlohmann::json& j);

}  // namespace oilab

#endif  // OILAB_CATALOG_H_
