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

#ifndef OILAB_TESTS_FIXTURES_H_
#define OILAB_TESTS_FIXTURES_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oilab/catalog.h"
#include "oilab/nature.h"
#include "oilab/population.h"
#include "oilab/predictor.h"
#include "oilab/rng.h"

namespace oilab::testing {

using Rational = boost::multiprecision::cpp_rational;

// Masses k_j / N with integer k_j >= 1 (or 0 with probability zero_prob).
inline std::vector<Rational> RandomRationalMasses(std::size_t atoms, Rng& rng,
                                                  double zero_prob = 0.0) {
  std::vector<std::uint64_t> w(atoms);
  std::uint64_t total = 0;
  for (auto& x : w) {
    x = Bernoulli(rng, zero_prob) ? 0 : 1 + UniformBelow(rng, 9);
    total += x;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  std::vector<Rational> out;
  for (auto x : w) out.emplace_back(Rational(x, total));
  return out;
}

inline PopulationDistribution RandomPopulation(std::size_t d, Rng& rng,
                                               double zero_prob = 0.0) {
  const std::size_t n = std::size_t{1} << d;
  const auto masses = RandomRationalMasses(n, rng, zero_prob);
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < n; ++k) {
    atoms.push_back({k, static_cast<double>(masses[k])});
  }
  return PopulationDistribution::Explicit(d, std::move(atoms));
}

inline std::vector<double> RandomTable(std::size_t d, Rng& rng) {
  std::vector<double> t(std::size_t{1} << d);
  for (auto& v : t) v = Uniform01(rng);
  return t;
}

inline Nature RandomNature(std::size_t d, Rng& rng, double zero_prob = 0.0) {
  return Nature(RandomPopulation(d, rng, zero_prob),
                Predictor::Table(d, RandomTable(d, rng)));
}

inline DistinguisherPtr RandomTableRule(std::size_t d, Rng& rng,
                                        const std::string& id = "T") {
  std::vector<std::uint8_t> accept(std::size_t{2} << d);
  for (auto& a : accept) a = static_cast<std::uint8_t>(Bernoulli(rng, 0.5));
  return std::make_shared<TableDistinguisher>(id, d, std::move(accept));
}

inline MembershipPtr RandomSubset(std::size_t d, Rng& rng) {
  std::vector<std::uint64_t> members;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << d); ++k) {
    if (Bernoulli(rng, 0.5)) members.push_back(k);
  }
  if (members.empty()) members.push_back(UniformBelow(rng, std::uint64_t{1} << d));
  return MemberList(d, std::move(members));
}

}  // namespace oilab::testing

#endif  // OILAB_TESTS_FIXTURES_H_
