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

#include "oilab/population.h"

#include <algorithm>
#include <cmath>

#include "oilab/error.h"

namespace oilab {

void KahanSum::Add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

PopulationDistribution PopulationDistribution::Explicit(
    std::size_t dimension, std::vector<Atom> atoms) {
  if (dimension > kMaxExplicitDimension) {
    throw DomainError("explicit populations are limited to dimension " +
                      std::to_string(kMaxExplicitDimension));
  }
  const std::uint64_t size = std::uint64_t{1} << dimension;
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.index < b.index; });
  std::vector<Atom> merged;
  KahanSum total;
  for (const Atom& a : atoms) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) {
      throw DomainError("negative or non-finite mass at index " +
                        std::to_string(a.index));
    }
    if (a.index >= size) {
      throw DomainError("atom index " + std::to_string(a.index) +
                        " outside universe of dimension " +
                        std::to_string(dimension));
    }
    total.Add(a.mass);
    if (a.mass == 0.0) continue;
    if (!merged.empty() && merged.back().index == a.index) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
    }
  }
  if (std::fabs(total.value() - 1.0) > 1e-12) {
    throw DomainError("population masses sum to " +
                      std::to_string(total.value()) + ", expected 1");
  }
  auto cumulative = std::make_shared<std::vector<double>>();
  cumulative->reserve(merged.size());
  KahanSum running;
  for (const Atom& a : merged) {
    running.Add(a.mass);
    cumulative->push_back(running.value());
  }
  PopulationDistribution p;
  p.mode_ = Mode::kExplicit;
  p.dimension_ = dimension;
  p.name_ = "explicit";
  p.atoms_ = std::make_shared<const std::vector<Atom>>(std::move(merged));
  p.cumulative_ = std::move(cumulative);
  return p;
}

PopulationDistribution PopulationDistribution::Uniform(std::size_t dimension) {
  if (dimension <= kMaxExplicitDimension) {
    const std::uint64_t size = std::uint64_t{1} << dimension;
    std::vector<Atom> atoms(size);
    const double mass = 1.0 / static_cast<double>(size);
    for (std::uint64_t k = 0; k < size; ++k) atoms[k] = {k, mass};
    return Explicit(dimension, std::move(atoms));
  }
  return ProductBernoulli(std::vector<double>(dimension, 0.5));
}

PopulationDistribution PopulationDistribution::ProductBernoulli(
    std::vector<double> bit_probs) {
  for (double q : bit_probs) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw DomainError("bit probability outside [0,1]");
    }
  }
  PopulationDistribution p;
  p.mode_ = Mode::kSampler;
  p.dimension_ = bit_probs.size();
  p.name_ = "product-bernoulli";
  p.bit_probs_ = std::move(bit_probs);
  return p;
}

PopulationDistribution PopulationDistribution::Custom(std::size_t dimension,
                                                      SamplerFn sampler,
                                                      std::string name) {
  PopulationDistribution p;
  p.mode_ = Mode::kSampler;
  p.dimension_ = dimension;
  p.name_ = std::move(name);
  p.sampler_ = std::move(sampler);
  return p;
}

const std::vector<Atom>& PopulationDistribution::atoms() const {
  if (!is_explicit()) {
    throw ConfigError("operation requires an explicit population");
  }
  return *atoms_;
}

double PopulationDistribution::MassOf(const Individual& i) const {
  const auto& table = atoms();
  if (i.dimension() != dimension_) {
    throw DomainError("individual dimension mismatch");
  }
  const std::uint64_t index = i.index();
  auto it = std::lower_bound(
      table.begin(), table.end(), index,
      [](const Atom& a, std::uint64_t k) { return a.index < k; });
  return (it != table.end() && it->index == index) ? it->mass : 0.0;
}

double PopulationDistribution::Expectation(
    const std::function<double(const Individual&)>& f) const {
  KahanSum sum;
  for (const Atom& a : atoms()) {
    sum.Add(a.mass * f(Individual::FromIndex(dimension_, a.index)));
  }
  return sum.value();
}

Individual PopulationDistribution::Sample(Rng& rng) const {
  if (is_explicit()) {
    const auto& cum = *cumulative_;
    const double u = Uniform01(rng) * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) --it;
    return Individual::FromIndex(dimension_,
                                 (*atoms_)[it - cum.begin()].index);
  }
  if (sampler_) {
    Individual i = sampler_(rng);
    if (i.dimension() != dimension_) {
      throw DomainError("sampler produced an individual of wrong dimension");
    }
    return i;
  }
  Individual i(dimension_);
  for (std::size_t k = 0; k < dimension_; ++k) {
    i.set_bit(k, Bernoulli(rng, bit_probs_[k]) == 1);
  }
  return i;
}

}  // namespace oilab
