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

#include "oilab/nature.h"

#include <cmath>

#include "oilab/error.h"

namespace oilab {

Nature::Nature(PopulationDistribution population, Predictor truth)
    : population_(std::move(population)), truth_(std::move(truth)) {
  if (truth_.dimension() != population_.dimension()) {
    throw DomainError("truth and population dimensions differ");
  }
  if (population_.is_explicit()) {
    truth_on_atoms_ = ValuesOnAtoms(truth_, population_);
    for (double v : truth_on_atoms_) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError("truth evaluates outside [0,1]");
      }
    }
  }
}

const std::vector<double>& Nature::truth_on_atoms() const {
  if (!population_.is_explicit()) {
    throw ConfigError("operation requires an explicit population");
  }
  return truth_on_atoms_;
}

LabeledDraw Nature::SamplePair(Rng& rng, const Predictor* model) const {
  LabeledDraw d;
  d.individual = population_.Sample(rng);
  const double q = model != nullptr ? model->Evaluate(d.individual)
                                    : truth_.Evaluate(d.individual);
  d.outcome = Bernoulli(rng, q);
  return d;
}

LabeledDraw Nature::SamplePair(std::uint64_t seed, const Predictor* model) const {
  Rng rng(seed);
  return SamplePair(rng, model);
}

double MeanRadius(std::uint64_t samples, double delta) {
  if (samples == 0) return 1.0;
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
}

double DifferenceRadius(std::uint64_t samples, double delta) {
  if (samples == 0) return 1.0;
  return std::sqrt(std::log(2.0 / delta) / static_cast<double>(samples));
}

std::vector<double> ValuesOnAtoms(const Predictor& p,
                                  const PopulationDistribution& pop) {
  const auto& atoms = pop.atoms();
  std::vector<double> out(atoms.size());
  if (p.uses_oracle() && atoms.size() * 4 >= (std::size_t{1} << p.dimension())) {
    const std::vector<double> table = p.Tabulate();
    for (std::size_t k = 0; k < atoms.size(); ++k) out[k] = table[atoms[k].index];
    return out;
  }
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    out[k] = p.Evaluate(Individual::FromIndex(pop.dimension(), atoms[k].index));
  }
  return out;
}

Estimate L1Distance(const Predictor& p, const Predictor& q,
                    const PopulationDistribution& pop,
                    std::optional<std::uint64_t> samples, std::uint64_t seed) {
  if (p.dimension() != pop.dimension() || q.dimension() != pop.dimension()) {
    throw DomainError("predictor and population dimensions differ");
  }
  if (pop.is_explicit()) {
    const auto pv = ValuesOnAtoms(p, pop);
    const auto qv = ValuesOnAtoms(q, pop);
    KahanSum sum;
    const auto& atoms = pop.atoms();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      sum.Add(atoms[k].mass * std::fabs(pv[k] - qv[k]));
    }
    return {sum.value(), 0.0};
  }
  if (!samples || *samples == 0) {
    throw ConfigError("l1 distance over a sampler population needs a sample budget");
  }
  Rng rng(seed);
  KahanSum sum;
  for (std::uint64_t k = 0; k < *samples; ++k) {
    const Individual i = pop.Sample(rng);
    sum.Add(std::fabs(p.Evaluate(i) - q.Evaluate(i)));
  }
  return {sum.value() / static_cast<double>(*samples), MeanRadius(*samples)};
}

double Potential(std::span<const double> model_on_atoms, const Nature& nature) {
  const auto& atoms = nature.population().atoms();
  const auto& truth = nature.truth_on_atoms();
  KahanSum sum;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double d = truth[k] - model_on_atoms[k];
    sum.Add(atoms[k].mass * d * d);
  }
  return sum.value();
}

double Potential(const Predictor& p, const Nature& nature) {
  const auto values = ValuesOnAtoms(p, nature.population());
  return Potential(values, nature);
}

}  // namespace oilab
