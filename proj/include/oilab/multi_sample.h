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

#ifndef OILAB_MULTI_SAMPLE_H_
#define OILAB_MULTI_SAMPLE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oilab/advantage.h"
#include "oilab/distinguisher.h"
#include "oilab/nature.h"
#include "oilab/predictor.h"

namespace oilab {

// One (individual, outcome, prediction) entry handed to an m-sample rule.
// prediction is NaN for no-access rules.
struct LabeledSample {
  Individual individual;
  int outcome = 0;
  double prediction = 0.0;
};

class MultiSampleDistinguisher {
 public:
  MultiSampleDistinguisher(std::string id, std::size_t arity, AccessLevel level,
                           Randomness randomness = Randomness::kDeterministic);
  virtual ~MultiSampleDistinguisher() = default;

  const std::string& id() const { return id_; }
  std::size_t arity() const { return arity_; }
  AccessLevel level() const { return level_; }
  Randomness randomness() const { return randomness_; }

  virtual int Decide(std::span<const LabeledSample> samples, Rng& rng) const = 0;
  // Exact acceptance; the default handles deterministic rules only.
  virtual double Acceptance(std::span<const LabeledSample> samples) const;

 private:
  std::string id_;
  std::size_t arity_;
  AccessLevel level_;
  Randomness randomness_;
};

using MultiSamplePtr = std::shared_ptr<const MultiSampleDistinguisher>;

class LambdaMultiSample : public MultiSampleDistinguisher {
 public:
  using Fn = std::function<int(std::span<const LabeledSample>)>;
  LambdaMultiSample(std::string id, std::size_t arity, AccessLevel level, Fn fn)
      : MultiSampleDistinguisher(std::move(id), arity, level), fn_(std::move(fn)) {}
  int Decide(std::span<const LabeledSample> samples, Rng&) const override {
    return fn_(samples) != 0;
  }

 private:
  Fn fn_;
};

// Which distribution a sample's outcome and prediction slot come from.
struct SampleSource {
  const Predictor* outcome_model = nullptr;  // nullptr: nature's p*
  const Predictor* shown = nullptr;          // prediction slot
};

// Acceptance over D^m with outcomes from source.outcome_model (or p*) and
// predictions from source.shown. Exact by enumeration when
// (2 * #atoms)^m <= 2^20.
double ExactMultiAcceptance(const MultiSampleDistinguisher& a,
                            const Nature& nature, SampleSource source);
Estimate MonteCarloMultiAcceptance(const MultiSampleDistinguisher& a,
                                   const Nature& nature, SampleSource source,
                                   std::uint64_t samples, std::uint64_t seed);

// Pr over nature^m minus Pr over model^m, both showing p's predictions.
AdvantageEstimate MultiAdvantage(const MultiSampleDistinguisher& a,
                                 const Nature& nature, const Predictor& p,
                                 const AuditMode& mode);

// Single-sample rule from the hybrid argument: draws a position k uniformly
// from [1..m], fills positions before k from nature and after k from the
// model, puts its input at k and runs A_m. Its expected advantage is the
// m-sample advantage divided by m.
class HybridDistinguisher : public Distinguisher {
 public:
  HybridDistinguisher(MultiSamplePtr inner, const Nature& nature,
                      const Predictor& p);
  Randomness randomness() const override { return Randomness::kContinuous; }

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;

 private:
  MultiSamplePtr inner_;
  std::shared_ptr<const Nature> nature_;
  std::shared_ptr<const Predictor> model_;
};

// Throws ConfigError for arity 0.
DistinguisherPtr HybridReduce(MultiSamplePtr inner, const Nature& nature,
                              const Predictor& p);

// Lunchtime rule: an advice generator R_A queries the predictor before the
// sample arrives, then a sample-access rule reads (i, o, v, advice).
class LunchtimeDistinguisher : public Distinguisher {
 public:
  using Advice = std::vector<bool>;
  using AdviceFn = std::function<Advice(const Oracle&)>;
  using RuleFn = std::function<int(const Individual&, int,
                                   std::optional<double>, const Advice&)>;

  LunchtimeDistinguisher(std::string id, std::size_t advice_length,
                         std::uint64_t preprocessing_queries, AdviceFn advice,
                         RuleFn rule, std::uint64_t cost = 1);

  std::size_t advice_length() const { return advice_length_; }
  // R_A^p, run under the preprocessing budget.
  Advice ComputeAdvice(const Oracle& oracle) const;
  // Sample-access rule with advice hard-coded.
  DistinguisherPtr WithAdvice(const Advice& advice) const;
  // All 2^t hard-coded rules (t <= 16).
  Family AllAdvice() const;

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;

 private:
  std::size_t advice_length_;
  AdviceFn advice_;
  RuleFn rule_;
};

// The lunchtime rule with a = R_A^p hard-coded.
DistinguisherPtr LunchtimeCollapse(const LunchtimeDistinguisher& a,
                                   const Predictor& p);

}  // namespace oilab

#endif  // OILAB_MULTI_SAMPLE_H_
