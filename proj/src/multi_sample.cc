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

#include "oilab/multi_sample.h"

#include <cmath>
#include <limits>

#include "oilab/error.h"

namespace oilab {

MultiSampleDistinguisher::MultiSampleDistinguisher(std::string id,
                                                   std::size_t arity,
                                                   AccessLevel level,
                                                   Randomness randomness)
    : id_(std::move(id)), arity_(arity), level_(level), randomness_(randomness) {
  if (arity_ == 0) throw ConfigError("multi-sample rule '" + id_ + "' has arity 0");
  if (level_ > AccessLevel::kSampleAccess) {
    throw ConfigError("multi-sample rules support no-access and sample-access only");
  }
}

double MultiSampleDistinguisher::Acceptance(
    std::span<const LabeledSample> samples) const {
  if (randomness_ != Randomness::kDeterministic) {
    throw ConfigError("multi-sample rule '" + id_ + "' has no exact acceptance");
  }
  thread_local Rng unused(0);
  return Decide(samples, unused);
}

namespace {

double Shown(const MultiSampleDistinguisher& a, double v) {
  return a.level() >= AccessLevel::kSampleAccess
             ? v
             : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double ExactMultiAcceptance(const MultiSampleDistinguisher& a,
                            const Nature& nature, SampleSource source) {
  const auto& pop = nature.population();
  const auto& atoms = pop.atoms();
  const std::size_t m = a.arity();
  const double cells = std::pow(2.0 * atoms.size(), static_cast<double>(m));
  if (cells > static_cast<double>(1 << 20)) {
    throw ConfigError("exact multi-sample enumeration exceeds 2^20 tuples");
  }
  const std::vector<double> outcome_p =
      source.outcome_model ? ValuesOnAtoms(*source.outcome_model, pop)
                           : nature.truth_on_atoms();
  const std::vector<double> shown =
      source.shown ? ValuesOnAtoms(*source.shown, pop) : nature.truth_on_atoms();
  const std::size_t base = 2 * atoms.size();
  const std::size_t total = static_cast<std::size_t>(cells + 0.5);
  std::vector<LabeledSample> tuple(m);
  KahanSum sum;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double prob = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t cell = c % base;
      c /= base;
      const std::size_t k = cell / 2;
      const int o = static_cast<int>(cell % 2);
      prob *= atoms[k].mass * (o ? outcome_p[k] : 1.0 - outcome_p[k]);
      tuple[j] = {Individual::FromIndex(pop.dimension(), atoms[k].index), o,
                  Shown(a, shown[k])};
    }
    if (prob == 0.0) continue;
    sum.Add(prob * a.Acceptance(tuple));
  }
  return sum.value();
}

Estimate MonteCarloMultiAcceptance(const MultiSampleDistinguisher& a,
                                   const Nature& nature, SampleSource source,
                                   std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw ConfigError("Monte-Carlo acceptance needs samples > 0");
  Rng rng(seed);
  std::vector<LabeledSample> tuple(a.arity());
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (auto& entry : tuple) {
      const Individual i = nature.population().Sample(rng);
      const double q = source.outcome_model ? source.outcome_model->Evaluate(i)
                                            : nature.truth().Evaluate(i);
      const double v = source.shown ? source.shown->Evaluate(i)
                                    : nature.truth().Evaluate(i);
      entry = {i, Bernoulli(rng, q), Shown(a, v)};
    }
    hits += a.Decide(tuple, rng);
  }
  return {static_cast<double>(hits) / samples, MeanRadius(samples)};
}

AdvantageEstimate MultiAdvantage(const MultiSampleDistinguisher& a,
                                 const Nature& nature, const Predictor& p,
                                 const AuditMode& mode) {
  AdvantageEstimate e;
  const SampleSource nature_side{nullptr, &p};
  const SampleSource model_side{&p, &p};
  if (mode.exact) {
    e.nature_acceptance = ExactMultiAcceptance(a, nature, nature_side);
    e.model_acceptance = ExactMultiAcceptance(a, nature, model_side);
  } else {
    const Estimate n = MonteCarloMultiAcceptance(a, nature, nature_side,
                                                 mode.samples,
                                                 DeriveSeed(mode.seed, 0));
    const Estimate m = MonteCarloMultiAcceptance(a, nature, model_side,
                                                 mode.samples,
                                                 DeriveSeed(mode.seed, 1));
    e.nature_acceptance = n.value;
    e.model_acceptance = m.value;
    e.samples = mode.samples;
    e.radius = DifferenceRadius(mode.samples);
  }
  e.value = e.nature_acceptance - e.model_acceptance;
  return e;
}

HybridDistinguisher::HybridDistinguisher(MultiSamplePtr inner,
                                         const Nature& nature,
                                         const Predictor& p)
    : Distinguisher(inner->id() + "/hybrid", AccessLevel::kSampleAccess, 0, 1),
      inner_(std::move(inner)),
      nature_(std::make_shared<const Nature>(nature)),
      model_(std::make_shared<const Predictor>(p)) {}

int HybridDistinguisher::DecideImpl(const Individual& i, int o,
                                    const AccessContext& ctx, Rng& rng) const {
  const std::size_t m = inner_->arity();
  const std::size_t k = UniformBelow(rng, m);
  const bool shows = inner_->level() >= AccessLevel::kSampleAccess;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<LabeledSample> tuple(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == k) {
      const double v = ctx.prediction ? *ctx.prediction : model_->Evaluate(i);
      tuple[j] = {i, o, shows ? v : nan};
      continue;
    }
    const Individual x = nature_->population().Sample(rng);
    const double v = model_->Evaluate(x);
    const double q = j < k ? nature_->truth().Evaluate(x) : v;
    tuple[j] = {x, Bernoulli(rng, q), shows ? v : nan};
  }
  return inner_->Decide(tuple, rng);
}

DistinguisherPtr HybridReduce(MultiSamplePtr inner, const Nature& nature,
                              const Predictor& p) {
  if (!inner || inner->arity() == 0) throw ConfigError("hybrid of arity 0");
  return std::make_shared<HybridDistinguisher>(std::move(inner), nature, p);
}

LunchtimeDistinguisher::LunchtimeDistinguisher(std::string id,
                                               std::size_t advice_length,
                                               std::uint64_t preprocessing_queries,
                                               AdviceFn advice, RuleFn rule,
                                               std::uint64_t cost)
    : Distinguisher(std::move(id), AccessLevel::kOracleAccess,
                    preprocessing_queries, cost),
      advice_length_(advice_length),
      advice_(std::move(advice)),
      rule_(std::move(rule)) {}

LunchtimeDistinguisher::Advice LunchtimeDistinguisher::ComputeAdvice(
    const Oracle& oracle) const {
  BudgetedOracle counted(oracle, budget());
  Advice a = advice_length_ == 0 ? Advice{} : advice_(counted);
  if (a.size() != advice_length_) {
    throw ConfigError("advice generator for '" + id() + "' returned " +
                      std::to_string(a.size()) + " bits, declared " +
                      std::to_string(advice_length_));
  }
  return a;
}

namespace {

class HardCodedAdvice : public Distinguisher {
 public:
  HardCodedAdvice(std::string id, LunchtimeDistinguisher::RuleFn rule,
                  LunchtimeDistinguisher::Advice advice, std::uint64_t cost)
      : Distinguisher(std::move(id), AccessLevel::kSampleAccess, 0, cost),
        rule_(std::move(rule)),
        advice_(std::move(advice)) {}

 protected:
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng&) const override {
    return rule_(i, o, ctx.prediction, advice_);
  }

 private:
  LunchtimeDistinguisher::RuleFn rule_;
  LunchtimeDistinguisher::Advice advice_;
};

std::string AdviceString(const LunchtimeDistinguisher::Advice& a) {
  std::string s;
  for (bool b : a) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

DistinguisherPtr LunchtimeDistinguisher::WithAdvice(const Advice& advice) const {
  if (advice.size() != advice_length_) {
    throw ConfigError("advice length mismatch for '" + id() + "'");
  }
  return std::make_shared<HardCodedAdvice>(id() + "[" + AdviceString(advice) + "]",
                                           rule_, advice, cost() + advice_length_);
}

Family LunchtimeDistinguisher::AllAdvice() const {
  if (advice_length_ > 16) throw ConfigError("advice family limited to t <= 16");
  Family out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << advice_length_); ++code) {
    Advice a(advice_length_);
    for (std::size_t k = 0; k < advice_length_; ++k) a[k] = (code >> k) & 1;
    out.push_back(WithAdvice(a));
  }
  return out;
}

int LunchtimeDistinguisher::DecideImpl(const Individual& i, int o,
                                       const AccessContext& ctx, Rng&) const {
  if (ctx.oracle == nullptr && advice_length_ > 0) {
    throw DomainError("lunchtime rule '" + id() + "' invoked without an oracle");
  }
  Advice a;
  if (advice_length_ > 0) {
    a = advice_(*ctx.oracle);
    if (a.size() != advice_length_) throw ConfigError("advice length mismatch");
  }
  return rule_(i, o, ctx.prediction, a);
}

DistinguisherPtr LunchtimeCollapse(const LunchtimeDistinguisher& a,
                                   const Predictor& p) {
  PredictorOracle oracle(p);
  return a.WithAdvice(a.ComputeAdvice(oracle));
}

}  // namespace oilab
