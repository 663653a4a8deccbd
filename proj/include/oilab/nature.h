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

#ifndef OILAB_NATURE_H_
#define OILAB_NATURE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oilab/individual.h"
#include "oilab/population.h"
#include "oilab/predictor.h"
#include "oilab/rng.h"

namespace oilab {

struct Estimate {
  double value = 0.0;
  double radius = 0.0;
};

struct LabeledDraw {
  Individual individual;
  int outcome = 0;
};

// Marginal D_X plus the ground-truth conditional probability p*.
class Nature {
 public:
  // Checks p* in [0,1] on every atom of an explicit population.
  Nature(PopulationDistribution population, Predictor truth);

  std::size_t dimension() const { return population_.dimension(); }
  const PopulationDistribution& population() const { return population_; }
  const Predictor& truth() const { return truth_; }

  // p* on each atom, aligned with population().atoms().
  const std::vector<double>& truth_on_atoms() const;

  // i ~ D_X; o ~ Ber(p*_i), or Ber(model_i) when a model is supplied.
  LabeledDraw SamplePair(Rng& rng, const Predictor* model = nullptr) const;
  LabeledDraw SamplePair(std::uint64_t seed,
                         const Predictor* model = nullptr) const;

 private:
  PopulationDistribution population_;
  Predictor truth_;
  std::vector<double> truth_on_atoms_;
};

// Hoeffding half-width for a [0,1] mean at confidence 1 - delta.
double MeanRadius(std::uint64_t samples, double delta = 0.05);
// Half-width for the difference of two independent [0,1] means with the
// given sample count each.
double DifferenceRadius(std::uint64_t samples, double delta = 0.05);

// E_{i ~ D_X} |p_i - q_i|. Exact over an explicit population; with a sample
// budget a sampler population yields an estimate with Hoeffding radius.
Estimate L1Distance(const Predictor& p, const Predictor& q,
                    const PopulationDistribution& pop,
                    std::optional<std::uint64_t> samples = std::nullopt,
                    std::uint64_t seed = 0);

// E[(p*_i - p_i)^2]; explicit populations only.
double Potential(const Predictor& p, const Nature& nature);
double Potential(std::span<const double> model_on_atoms, const Nature& nature);

// p evaluated on the atoms of pop (tabulated when that is cheaper).
std::vector<double> ValuesOnAtoms(const Predictor& p,
                                  const PopulationDistribution& pop);

}  // namespace oilab

#endif  // OILAB_NATURE_H_
