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

#ifndef OILAB_POPULATION_H_
#define OILAB_POPULATION_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oilab/individual.h"
#include "oilab/rng.h"

namespace oilab {

struct Atom {
  std::uint64_t index = 0;
  double mass = 0.0;
};

// Marginal distribution over individuals. Explicit populations carry a
// sparse mass table (sorted by index, positive masses only) and support exact
// expectations; sampler populations only support draws.
class PopulationDistribution {
 public:
  enum class Mode { kExplicit, kSampler };
  using SamplerFn = std::function<Individual(Rng&)>;

  // Duplicated indices are merged and zero masses dropped. Throws DomainError
  // on negative masses, out-of-range indices, dimension > 24, or a total that
  // differs from 1 by more than 1e-12.
  static PopulationDistribution Explicit(std::size_t dimension,
                                         std::vector<Atom> atoms);
  // Explicit when dimension <= 24, otherwise an i.i.d. fair-bit sampler.
  static PopulationDistribution Uniform(std::size_t dimension);
  static PopulationDistribution ProductBernoulli(std::vector<double> bit_probs);
  static PopulationDistribution Custom(std::size_t dimension, SamplerFn sampler,
                                       std::string name);

  Mode mode() const { return mode_; }
  bool is_explicit() const { return mode_ == Mode::kExplicit; }
  std::size_t dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& bit_probs() const { return bit_probs_; }

  // Throws ConfigError in sampler mode.
  const std::vector<Atom>& atoms() const;
  double MassOf(const Individual& i) const;
  // Exact sum of mass * f over atoms (compensated summation).
  double Expectation(const std::function<double(const Individual&)>& f) const;

  Individual Sample(Rng& rng) const;

 private:
  Mode mode_ = Mode::kExplicit;
  std::size_t dimension_ = 0;
  std::string name_;
  std::shared_ptr<const std::vector<Atom>> atoms_;
  std::shared_ptr<const std::vector<double>> cumulative_;
  std::vector<double> bit_probs_;
  SamplerFn sampler_;
};

// Neumaier compensated accumulator.
class KahanSum {
 public:
  void Add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace oilab

#endif  // OILAB_POPULATION_H_
