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

#include "oilab/advantage.h"

#include <cmath>

#include "oilab/error.h"
#include "oilab/parallel.h"

namespace oilab {

namespace {

constexpr std::size_t kMaxTabulatedDimension = 20;

}  // namespace

ModelView::ModelView(const Nature& nature, const Predictor& p)
    : nature_(nature), predictor_(p) {
  if (p.dimension() != nature.dimension()) {
    throw DomainError("predictor and nature dimensions differ");
  }
  if (p.dimension() <= kMaxTabulatedDimension) table_ = p.Tabulate();
  Init();
}

ModelView::ModelView(const Nature& nature, const Predictor& p,
                     std::vector<double> table)
    : nature_(nature), predictor_(p), table_(std::move(table)) {
  if (p.dimension() != nature.dimension()) {
    throw DomainError("predictor and nature dimensions differ");
  }
  if (table_.size() != (std::size_t{1} << p.dimension())) {
    throw DomainError("model table has the wrong size");
  }
  Init();
}

void ModelView::Init() {
  const std::uint64_t version = predictor_.terms().size();
  if (!table_.empty()) {
    oracle_ = std::make_unique<TableOracle>(predictor_.dimension(), table_, version);
  } else {
    oracle_ = std::make_unique<PredictorOracle>(predictor_);
  }
  const auto& pop = nature_.population();
  if (pop.is_explicit()) {
    const auto& atoms = pop.atoms();
    on_atoms_.resize(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      on_atoms_[k] = table_.empty()
                         ? predictor_.Evaluate(
                               Individual::FromIndex(pop.dimension(), atoms[k].index))
                         : table_[atoms[k].index];
    }
  }
}

double ModelView::Value(const Individual& i) const {
  return table_.empty() ? predictor_.Evaluate(i) : table_[i.index()];
}

std::shared_ptr<const std::string> ModelView::description() const {
  std::call_once(description_once_, [this] {
    description_ = std::make_shared<const std::string>(predictor_.Description());
  });
  return description_;
}

AccessContext ModelView::Context(double v) const {
  return {v, oracle_.get(), nullptr};
}

namespace {

AccessContext ContextFor(const Distinguisher& a, const ModelView& view,
                         double v) {
  AccessContext ctx = view.Context(v);
  if (a.level() == AccessLevel::kCodeAccess) ctx.description = view.description();
  return ctx;
}

}  // namespace

AdvantageEstimate ExactAdvantage(const Distinguisher& a, const ModelView& view) {
  const auto& pop = view.nature().population();
  if (!pop.is_explicit()) {
    throw ConfigError("exact advantage requires an explicit population");
  }
  if (!a.has_exact_acceptance()) {
    throw ConfigError("distinguisher '" + a.id() +
                      "' has no exact acceptance; use Monte-Carlo mode");
  }
  const auto& atoms = pop.atoms();
  const auto& truth = view.nature().truth_on_atoms();
  const auto& model = view.on_atoms();
  KahanSum nature_acc;
  KahanSum model_acc;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Individual i = Individual::FromIndex(pop.dimension(), atoms[k].index);
    const AccessContext ctx = ContextFor(a, view, model[k]);
    const double acc1 = a.Acceptance(i, 1, ctx);
    const double acc0 = a.Acceptance(i, 0, ctx);
    nature_acc.Add(atoms[k].mass * (truth[k] * acc1 + (1.0 - truth[k]) * acc0));
    model_acc.Add(atoms[k].mass * (model[k] * acc1 + (1.0 - model[k]) * acc0));
  }
  AdvantageEstimate e;
  e.nature_acceptance = nature_acc.value();
  e.model_acceptance = model_acc.value();
  e.value = e.nature_acceptance - e.model_acceptance;
  return e;
}

AdvantageEstimate MonteCarloAdvantage(const Distinguisher& a,
                                      const ModelView& view,
                                      std::uint64_t samples,
                                      std::uint64_t seed) {
  if (samples == 0) throw ConfigError("Monte-Carlo advantage needs samples > 0");
  const Nature& nature = view.nature();
  Rng rng(seed);
  std::uint64_t nature_hits = 0;
  std::uint64_t model_hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Individual i = nature.population().Sample(rng);
    const double v = view.Value(i);
    const int o = Bernoulli(rng, nature.truth().Evaluate(i));
    nature_hits += a.Decide(i, o, ContextFor(a, view, v), rng);
  }
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Individual i = nature.population().Sample(rng);
    const double v = view.Value(i);
    const int o = Bernoulli(rng, v);
    model_hits += a.Decide(i, o, ContextFor(a, view, v), rng);
  }
  AdvantageEstimate e;
  e.samples = samples;
  e.nature_acceptance = static_cast<double>(nature_hits) / samples;
  e.model_acceptance = static_cast<double>(model_hits) / samples;
  e.value = e.nature_acceptance - e.model_acceptance;
  e.radius = DifferenceRadius(samples);
  return e;
}

AdvantageEstimate Advantage(const Distinguisher& a, const ModelView& view,
                            const AuditMode& mode) {
  return mode.exact ? ExactAdvantage(a, view)
                    : MonteCarloAdvantage(a, view, mode.samples, mode.seed);
}

AdvantageEstimate Advantage(const Distinguisher& a, const Nature& nature,
                            const Predictor& p, const AuditMode& mode) {
  ModelView view(nature, p);
  return Advantage(a, view, mode);
}

std::vector<AdvantageEstimate> AuditFamily(const Family& family,
                                           const ModelView& view,
                                           const AuditMode& mode) {
  std::vector<AdvantageEstimate> out(family.size());
  ParallelFor(family.size(), [&](std::size_t k) {
    AuditMode m = mode;
    m.seed = DeriveSeed(mode.seed, k);
    out[k] = Advantage(*family[k], view, m);
  });
  return out;
}

double CorrelationForm(const Distinguisher& a, const ModelView& view) {
  const auto& pop = view.nature().population();
  const auto& atoms = pop.atoms();
  const auto& truth = view.nature().truth_on_atoms();
  const auto& model = view.on_atoms();
  KahanSum sum;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Individual i = Individual::FromIndex(pop.dimension(), atoms[k].index);
    const double delta = a.Delta(i, ContextFor(a, view, model[k]));
    sum.Add(atoms[k].mass * (truth[k] - model[k]) * delta);
  }
  return sum.value();
}

IdentityCheck AdvantageIdentityCheck(const Distinguisher& a,
                                     const ModelView& view) {
  if (!a.deterministic()) {
    throw NotDeterministic("identity check requires a deterministic rule");
  }
  IdentityCheck c;
  c.lhs = ExactAdvantage(a, view).value;
  c.rhs = CorrelationForm(a, view);
  c.gap = std::fabs(c.lhs - c.rhs);
  return c;
}

}  // namespace oilab
