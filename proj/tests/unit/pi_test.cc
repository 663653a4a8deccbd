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

#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "oilab/error.h"
#include "oilab/prediction_indist.h"

namespace oilab {
namespace {

// Truth within tau of a Boolean function.
Nature BooleanPlusDelta(std::size_t d, double tau, Rng& rng) {
  std::vector<double> t(std::size_t{1} << d);
  for (double& v : t) {
    const double delta = tau * Uniform01(rng);
    v = Bernoulli(rng, 0.5) ? 1.0 - delta : delta;
  }
  return Nature(testing::RandomPopulation(d, rng), Predictor::Table(d, std::move(t)));
}

Predictor Rounded(const Predictor& p) {
  auto t = p.Tabulate();
  for (double& v : t) v = RoundPrediction(v);
  return Predictor::Table(p.dimension(), std::move(t));
}

TEST(PredictionIndist, TruthHasZeroPiAdvantage) {
  Rng rng(51);
  const Nature n = BooleanPlusDelta(4, 0.05, rng);
  const L1Distinguisher a;
  EXPECT_NEAR(PiAdvantage(a, n, n.truth(), AuditMode::Exact()).value, 0.0, 1e-12);
}

TEST(PredictionIndist, ClosenessImplication) {
  Rng rng(52);
  int hypotheses = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const Nature n = BooleanPlusDelta(d, 0.05, rng);
    auto table = n.truth().Tabulate();
    const double noise = 0.02 * (trial % 10);
    for (double& v : table) v = std::clamp(v + noise * (2 * Uniform01(rng) - 1), 0.0, 1.0);
    const Predictor p = Predictor::Table(d, table);
    const L1ClosenessReport r = L1ClosenessCheck(n, p, 0.1, 0.05, Rounded(n.truth()));
    EXPECT_TRUE(r.holds) << "trial " << trial;
    EXPECT_LE(r.delta_l1, 0.05 + 1e-12);
    EXPECT_DOUBLE_EQ(r.bound, 0.3);
    hypotheses += r.hypothesis;
  }
  EXPECT_GT(hypotheses, 0);
}

TEST(PredictionIndist, RejectsNonBooleanTruth) {
  const Nature n(PopulationDistribution::Uniform(2), Predictor::Constant(2, 0.5));
  EXPECT_THROW(L1ClosenessCheck(n, n.truth(), 0.1, 0.05, Predictor::Constant(2, 1.0)),
               HypothesisViolated);
}

TEST(PredictionIndist, ValidModelEquivalence) {
  Rng rng(53);
  const std::size_t d = 3;
  const Nature n = testing::RandomNature(d, rng);
  const Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
  std::vector<PiFamilyMember> family;
  family.push_back({std::make_shared<LambdaMultiSample>(
                        "always", 2, AccessLevel::kNoAccess,
                        [](std::span<const LabeledSample>) { return 1; }),
                    1.0});
  family.push_back({std::make_shared<LambdaMultiSample>(
                        "never", 1, AccessLevel::kNoAccess,
                        [](std::span<const LabeledSample>) { return 0; }),
                    0.0});
  const ValidModelReport r = ValidModelCheck(family, 0.05, n, p, AuditMode::Exact());
  EXPECT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.probes, 22u);
  // Acceptance of an outcome-reading rule moves with the model world.
  const std::vector<PiFamilyMember> invalid = {
      {std::make_shared<LambdaMultiSample>(
           "outcome", 1, AccessLevel::kNoAccess,
           [](std::span<const LabeledSample> s) { return s[0].outcome; }),
       0.5}};
  EXPECT_THROW(ValidModelCheck(invalid, 0.05, n, p, AuditMode::Exact()), PropertyNotSatisfied);
}

}  // namespace
}  // namespace oilab
