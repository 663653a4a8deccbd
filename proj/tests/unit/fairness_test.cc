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
#include "oilab/catalog.h"
#include "oilab/error.h"
#include "oilab/fairness.h"

namespace oilab {
namespace {

// E[(p* - p) 1_S] by direct enumeration.
double SignedGapMass(const Nature& n, const Predictor& p, const MembershipRule& s) {
  double acc = 0.0;
  for (const Atom& a : n.population().atoms()) {
    const Individual i = Individual::FromIndex(n.dimension(), a.index);
    if (s.Contains(i)) acc += a.mass * (n.truth().Evaluate(i) - p.Evaluate(i));
  }
  return acc;
}

TEST(Grid, BinsAndCenters) {
  const Grid g(5);
  EXPECT_DOUBLE_EQ(g.Center(0), 0.1);
  EXPECT_DOUBLE_EQ(g.Center(4), 0.9);
  EXPECT_EQ(g.Bin(0.0), 0u);
  EXPECT_EQ(g.Bin(1.0), 4u);
  EXPECT_EQ(g.Bin(0.45), 2u);
  EXPECT_TRUE(g.Contains(0.3));
  EXPECT_FALSE(g.Contains(0.35));
  EXPECT_THROW(Grid(0), ConfigError);
}

TEST(Fairness, MultiAccuracyMatchesSubsetAdvantage) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const Nature n = testing::RandomNature(d, rng);
    const Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
    const Subpopulation s{"s", testing::RandomSubset(d, rng)};
    const double mass = Mass(*s.rule, n.population());
    if (mass <= 0.0) continue;
    const Family f = MaToOiFamily({s});
    const double delta = Advantage(*f[0], n, p, AuditMode::Exact()).value;
    EXPECT_NEAR(MaViolation(p, *s.rule, n) * mass, std::fabs(delta), 1e-10);
    EXPECT_NEAR(delta, SignedGapMass(n, p, *s.rule), 1e-12);
  }
}

TEST(Fairness, OiBoundedBySplitSubpopulations) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const Nature n = testing::RandomNature(d, rng);
    const Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
    const auto a = testing::RandomTableRule(d, rng);
    double bound = 0.0;
    for (const auto& s : OiToMaFamily({a}, d)) {
      if (Mass(*s.rule, n.population()) > 0.0) bound += MaViolation(p, *s.rule, n);
    }
    EXPECT_LE(std::fabs(Advantage(*a, n, p, AuditMode::Exact()).value), bound + 1e-12);
  }
}

TEST(Fairness, CalibrationMatchesLevelSetAdvantage) {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + trial % 5;
    const Grid grid(2 + trial % 9);
    const Nature n = testing::RandomNature(d, rng);
    const Predictor pbar =
        RoundToGrid(Predictor::Table(d, testing::RandomTable(d, rng)), grid);
    const Subpopulation s{"s", testing::RandomSubset(d, rng)};
    if (Mass(*s.rule, n.population()) <= 0.0) continue;
    const auto rounded = ValuesOnAtoms(pbar, n.population());
    const Family f = McToOiFamily({s}, grid);
    ASSERT_EQ(f.size(), grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const McCell cell = McViolation(rounded, s, k, grid, 0.1, n);
      const double delta = Advantage(*f[k], n, pbar, AuditMode::Exact()).value;
      EXPECT_NEAR(std::fabs(delta), cell.joint_mass * cell.violation, 1e-10);
    }
  }
}

TEST(Fairness, ExactRoundingIsCalibrated) {
  // A predictor equal to E[p* | cell] on every cell has zero MC violation.
  const std::size_t d = 3;
  std::vector<double> truth(8);
  for (std::size_t k = 0; k < 8; ++k) truth[k] = (k % 2) ? 0.7 : 0.3;
  const Nature n(PopulationDistribution::Uniform(d), Predictor::Table(d, truth));
  const Grid grid(5);
  const std::vector<Subpopulation> c = {{"all", AllMembers()},
                                        {"odd", Conjunction({{0, true}})}};
  const Predictor pbar = RoundToGrid(n.truth(), grid);
  EXPECT_NEAR(MinimalMcAlpha(pbar, c, grid, n), 0.0, 1e-12);
  EXPECT_TRUE(IsMultiCalibrated(pbar, c, grid, 0.01, n));
  EXPECT_TRUE(IsMultiAccurate(pbar, c, 1e-12, n));
  const Predictor flat = RoundToGrid(Predictor::Constant(d, 0.5), grid);
  EXPECT_TRUE(IsMultiAccurate(flat, {c[0]}, 1e-12, n));
  EXPECT_FALSE(IsMultiAccurate(flat, c, 0.1, n));
  const FairnessAudit audit = AuditFairness(flat, c, grid, 0.1, n);
  EXPECT_TRUE(audit.ma_pass == false && audit.mc_pass == false);
  EXPECT_DOUBLE_EQ(audit.gamma, 0.5);
  EXPECT_EQ(audit.mc.size(), c.size() * grid.size());
}

TEST(Fairness, EmptySubpopulationIsReported) {
  const Nature n(PopulationDistribution::Uniform(2), Predictor::Constant(2, 0.5));
  EXPECT_THROW(MaViolation(Predictor::Constant(2, 0.5), *NoMembers(), n), EmptySubpopulation);
  EXPECT_EQ(MinimumMass({{"none", NoMembers()}}, n.population()), 0.0);
}

TEST(Fairness, ReductionsRejectRandomizedRules) {
  const auto mix = std::make_shared<MixtureDistinguisher>(
      "mix", std::vector<double>{0.5, 0.5},
      std::vector<DistinguisherPtr>{std::make_shared<ConstantDistinguisher>("y", 1),
                                    std::make_shared<ConstantDistinguisher>("n", 0)});
  EXPECT_THROW(OiToMaFamily({mix}, 2), NotDeterministic);
  const auto sample = std::make_shared<ThresholdDistinguisher>(
      "t", ">", 0.5, AllMembers(), OutcomeFilter());
  EXPECT_THROW(OiToMaFamily({sample}, 2), ConfigError);
  EXPECT_EQ(OiToMcFamily({sample}, Grid(4), 2).size(), 8u);
}

// Calibrated-on-split-sets predictors are outcome indistinguishable up to 4 alpha.
TEST(Fairness, CalibrationImpliesIndistinguishability) {
  Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 3 + trial % 3;
    const Grid grid(trial % 2 ? 5 : 10);
    const Nature n = testing::RandomNature(d, rng);
    const auto a = std::make_shared<LevelSetDistinguisher>(
        "l", 0.5, 0.25, testing::RandomSubset(d, rng), OutcomeFilter(trial % 2));
    const Predictor pbar =
        RoundToGrid(Predictor::Table(d, testing::RandomTable(d, rng)), grid);
    const auto c = OiToMcFamily({a}, grid, d);
    std::vector<Subpopulation> nonempty;
    for (const auto& s : c) {
      if (Mass(*s.rule, n.population()) > 0.0) nonempty.push_back(s);
    }
    if (nonempty.empty()) continue;
    const double alpha = std::max(MinimalMcAlpha(pbar, nonempty, grid, n), 1e-6);
    EXPECT_LE(Advantage(*a, n, pbar, AuditMode::Exact()).magnitude(), 4 * alpha + 1e-9);
  }
}

}  // namespace
}  // namespace oilab
