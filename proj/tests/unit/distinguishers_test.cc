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
#include "oilab/advantage.h"
#include "oilab/catalog.h"
#include "oilab/error.h"
#include "oilab/multi_sample.h"

namespace oilab {
namespace {

// Brute-force acceptance difference for a deterministic rule, computed without
// the library's advantage code.
double EnumeratedDelta(const Distinguisher& a, const Nature& n, const Predictor& p) {
  double nat = 0.0, mod = 0.0;
  for (const Atom& atom : n.population().atoms()) {
    const Individual i = Individual::FromIndex(n.dimension(), atom.index);
    const double v = p.Evaluate(i);
    const double ps = n.truth().Evaluate(i);
    AccessContext ctx;
    ctx.prediction = v;
    Rng unused(0);
    const int a1 = a.Decide(i, 1, ctx, unused);
    const int a0 = a.Decide(i, 0, ctx, unused);
    nat += atom.mass * (ps * a1 + (1 - ps) * a0);
    mod += atom.mass * (v * a1 + (1 - v) * a0);
  }
  return nat - mod;
}

Family MixedFamily(std::size_t d, Rng& rng) {
  Family f;
  f.push_back(std::make_shared<SubsetDistinguisher>("s", testing::RandomSubset(d, rng),
                                                    OutcomeFilter(1)));
  f.push_back(std::make_shared<LevelSetDistinguisher>("l", 0.5, 0.2, AllMembers(),
                                                      OutcomeFilter()));
  f.push_back(std::make_shared<ThresholdDistinguisher>("t", ">", 0.3, AllMembers(),
                                                       OutcomeFilter(0)));
  f.push_back(testing::RandomTableRule(d, rng));
  f.push_back(std::make_shared<ConstantDistinguisher>("c", 1));
  return f;
}

TEST(Advantage, TruthHasZeroAdvantage) {
  Rng rng(2);
  const Nature n = testing::RandomNature(4, rng);
  for (const auto& a : MixedFamily(4, rng)) {
    EXPECT_NEAR(Advantage(*a, n, n.truth(), AuditMode::Exact()).value, 0.0, 1e-15);
  }
}

TEST(Advantage, SubsetExampleOnThreeBits) {
  // S = {first bit = 1} has mass 1/2; p* - p = 0.1 on S.
  std::vector<double> truth(8), model(8, 0.5);
  for (std::size_t k = 0; k < 8; ++k) truth[k] = (k & 1) ? 0.6 : 0.2;
  const Nature n(PopulationDistribution::Uniform(3), Predictor::Table(3, truth));
  const Predictor p = Predictor::Table(3, model);
  const auto a = std::make_shared<SubsetDistinguisher>(
      "S", Conjunction({{0, true}}), OutcomeFilter(1));
  EXPECT_NEAR(Advantage(*a, n, p, AuditMode::Exact()).value, 0.05, 1e-15);
  EXPECT_NEAR(EnumeratedDelta(*a, n, p), 0.05, 1e-15);
}

TEST(Advantage, ConstantRejectIsZero) {
  Rng rng(4);
  const Nature n = testing::RandomNature(3, rng);
  const ConstantDistinguisher reject("never", 0);
  const Predictor p = Predictor::Table(3, testing::RandomTable(3, rng));
  EXPECT_EQ(Advantage(reject, n, p, AuditMode::Exact()).value, 0.0);
}

TEST(Advantage, ExactAgreesWithEnumeration) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const Nature n = testing::RandomNature(d, rng, 0.2);
    const Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
    for (const auto& a : MixedFamily(d, rng)) {
      EXPECT_NEAR(Advantage(*a, n, p, AuditMode::Exact()).value, EnumeratedDelta(*a, n, p),
                  1e-12);
    }
  }
}

TEST(Advantage, ExactModeNeedsExplicitPopulation) {
  const Nature n(PopulationDistribution::ProductBernoulli({0.5, 0.5}),
                 Predictor::Constant(2, 0.5));
  const ConstantDistinguisher c("c", 1);
  EXPECT_THROW(Advantage(c, n, Predictor::Constant(2, 0.3), AuditMode::Exact()), ConfigError);
  EXPECT_NO_THROW(Advantage(c, n, Predictor::Constant(2, 0.3), AuditMode::MonteCarlo(100, 1)));
}

TEST(Advantage, ComplementFlipsSign) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Nature n = testing::RandomNature(3, rng);
    const Predictor p = Predictor::Table(3, testing::RandomTable(3, rng));
    const auto a = testing::RandomTableRule(3, rng);
    const ComplementDistinguisher na("not", a);
    const double x = Advantage(*a, n, p, AuditMode::Exact()).value;
    const double y = Advantage(na, n, p, AuditMode::Exact()).value;
    EXPECT_NEAR(x, -y, 1e-14);
  }
}

// Exact values fall inside the Monte-Carlo radius in at least 95% of runs.
TEST(Advantage, MonteCarloRadiusIsCalibrated) {
  Rng rng(9);
  const Nature n = testing::RandomNature(4, rng);
  const Predictor p = Predictor::Table(4, testing::RandomTable(4, rng));
  const Family f = MixedFamily(4, rng);
  int inside = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (const auto& a : f) {
      const auto exact = Advantage(*a, n, p, AuditMode::Exact());
      const auto mc = Advantage(*a, n, p, AuditMode::MonteCarlo(2000, seed));
      inside += std::fabs(exact.value - mc.value) <= mc.radius;
      ++total;
    }
  }
  EXPECT_GE(inside, 0.95 * total);
}

TEST(Access, OracleBudgetIsEnforced) {
  std::vector<Individual> masks = {Individual::FromIndex(2, 0), Individual::FromIndex(2, 1),
                                   Individual::FromIndex(2, 2)};
  const OracleThresholdDistinguisher over("over", masks, 0.5, OutcomeFilter(), 2);
  const OracleThresholdDistinguisher exact("exact", masks, 0.5, OutcomeFilter(), 3);
  const Predictor p = Predictor::Constant(2, 0.7);
  const PredictorOracle oracle(p);
  AccessContext ctx;
  ctx.oracle = &oracle;
  Rng rng(0);
  for (std::uint64_t k = 0; k < 4; ++k) {
    EXPECT_THROW(over.Decide(Individual::FromIndex(2, k), 1, ctx, rng), QueryBudgetExceeded);
    EXPECT_EQ(exact.Decide(Individual::FromIndex(2, k), 1, ctx, rng), 1);
  }
}

TEST(Access, LevelsWithholdContext) {
  const Predictor p = Predictor::Constant(2, 0.7);
  const PredictorOracle oracle(p);
  AccessContext full{0.7, &oracle, std::make_shared<const std::string>(p.Description())};
  const AccessContext none = RestrictContext(full, AccessLevel::kNoAccess);
  EXPECT_FALSE(none.prediction);
  EXPECT_EQ(none.oracle, nullptr);
  const AccessContext sample = RestrictContext(full, AccessLevel::kSampleAccess);
  EXPECT_TRUE(sample.prediction);
  EXPECT_EQ(sample.oracle, nullptr);
  EXPECT_FALSE(sample.description);
  const AccessContext code = RestrictContext(full, AccessLevel::kCodeAccess);
  EXPECT_TRUE(code.description);
  EXPECT_EQ(code.oracle, nullptr);
  const ThresholdDistinguisher t("t", ">", 0.5, AllMembers(), OutcomeFilter());
  const LambdaDistinguisher blind("b", AccessLevel::kNoAccess, 0, 1,
                                  [](const Individual&, int, const AccessContext& c) {
                                    return c.prediction ? 1 : 0;
                                  });
  Rng rng(0);
  EXPECT_EQ(t.Decide(Individual::FromIndex(2, 0), 0, full, rng), 1);
  EXPECT_EQ(blind.Decide(Individual::FromIndex(2, 0), 0, full, rng), 0);
}

TEST(Access, CodeAccessSimulatesOracleAccess) {
  Rng rng(12);
  const std::size_t d = 4;
  const Nature n = testing::RandomNature(d, rng);
  Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
  p = p.WithTerm({0.2, testing::RandomTableRule(d, rng), nullptr});
  std::vector<Individual> masks = {Individual::FromIndex(d, 3), Individual::FromIndex(d, 9)};
  const auto oracle_rule = std::make_shared<OracleThresholdDistinguisher>(
      "o", masks, 0.45, OutcomeFilter(1), 2);
  const CodeSimulateDistinguisher code("code", oracle_rule);
  const ModelView view(n, p);
  AccessContext ctx = view.Context(0.0);
  ctx.description = view.description();
  for (std::uint64_t k = 0; k < (1u << d); ++k) {
    const Individual i = Individual::FromIndex(d, k);
    ctx.prediction = view.Value(i);
    for (int o : {0, 1}) {
      EXPECT_EQ(code.Acceptance(i, o, ctx), oracle_rule->Acceptance(i, o, ctx));
    }
  }
}

TEST(Catalog, FamilyJsonRoundTrip) {
  Rng rng(13);
  const std::size_t d = 3;
  Family f = MixedFamily(d, rng);
  f.push_back(std::make_shared<SubsetDistinguisher>("par", Parity({0, 2}, true),
                                                    OutcomeFilter()));
  f.push_back(std::make_shared<MixtureDistinguisher>(
      "mix", std::vector<double>{0.25, 0.75},
      std::vector<DistinguisherPtr>{f[0], f[3]}));
  f.push_back(std::make_shared<CodeTermsDistinguisher>("terms", 1, OutcomeFilter(1)));
  const Family back = FamilyFromJson(FamilyToJson(f), d);
  ASSERT_EQ(back.size(), f.size());
  const Nature n = testing::RandomNature(d, rng);
  const Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
  for (std::size_t k = 0; k < f.size(); ++k) {
    EXPECT_EQ(back[k]->id(), f[k]->id());
    EXPECT_EQ(back[k]->level(), f[k]->level());
    EXPECT_EQ(Advantage(*back[k], n, p, AuditMode::Exact()).value,
              Advantage(*f[k], n, p, AuditMode::Exact()).value);
  }
  EXPECT_THROW(FamilyFromJson(nlohmann::json::object(), d), ConfigError);
}

TEST(Catalog, MixtureMarginalizesExactly) {
  const auto yes = std::make_shared<ConstantDistinguisher>("y", 1);
  const auto no = std::make_shared<ConstantDistinguisher>("n", 0);
  const MixtureDistinguisher m("m", {0.3, 0.7}, {yes, no});
  EXPECT_DOUBLE_EQ(m.Acceptance(Individual::FromIndex(1, 0), 1, AccessContext{}), 0.3);
  EXPECT_THROW(MixtureDistinguisher("bad", {0.3, 0.3}, {yes, no}), ConfigError);
}

// --- multi-sample and hybrid ---

MultiSamplePtr MajorityOfOnes(std::size_t m) {
  return std::make_shared<LambdaMultiSample>(
      "maj", m, AccessLevel::kNoAccess, [m](std::span<const LabeledSample> s) {
        std::size_t ones = 0;
        for (const auto& x : s) ones += x.outcome;
        return 2 * ones > m ? 1 : 0;
      });
}

TEST(MultiSample, ArityZeroIsRejected) {
  EXPECT_THROW(LambdaMultiSample("z", 0, AccessLevel::kNoAccess,
                                 [](std::span<const LabeledSample>) { return 0; }),
               ConfigError);
}

TEST(Hybrid, MajorityExample) {
  const Nature n(PopulationDistribution::Uniform(2), Predictor::Constant(2, 1.0));
  const Predictor p = Predictor::Constant(2, 0.0);
  const auto a = MajorityOfOnes(3);
  EXPECT_DOUBLE_EQ(MultiAdvantage(*a, n, p, AuditMode::Exact()).value, 1.0);
  const auto h = HybridReduce(a, n, p);
  const auto est = MonteCarloAdvantage(*h, ModelView(n, p), 100000, 5);
  EXPECT_NEAR(est.value, 1.0 / 3.0, est.radius);
}

TEST(Hybrid, ArityOneIsIdentity) {
  Rng rng(3);
  const Nature n = testing::RandomNature(2, rng);
  const Predictor p = Predictor::Table(2, testing::RandomTable(2, rng));
  const auto a = std::make_shared<LambdaMultiSample>(
      "one", 1, AccessLevel::kSampleAccess, [](std::span<const LabeledSample> s) {
        return (s[0].outcome == 1) != (s[0].prediction > 0.5) ? 1 : 0;
      });
  const auto h = HybridReduce(a, n, p);
  for (std::uint64_t k = 0; k < 4; ++k) {
    const Individual i = Individual::FromIndex(2, k);
    const double v = p.Evaluate(i);
    for (int o : {0, 1}) {
      AccessContext ctx;
      ctx.prediction = v;
      const LabeledSample s{i, o, v};
      Rng r1(k), r2(k);
      EXPECT_EQ(h->Decide(i, o, ctx, r1), a->Decide(std::span(&s, 1), r2));
    }
  }
}

TEST(Hybrid, ConstantRuleHasNoAdvantage) {
  Rng rng(4);
  const Nature n = testing::RandomNature(2, rng);
  const Predictor p = Predictor::Table(2, testing::RandomTable(2, rng));
  const auto a = std::make_shared<LambdaMultiSample>(
      "const", 3, AccessLevel::kNoAccess, [](std::span<const LabeledSample>) { return 1; });
  EXPECT_EQ(MultiAdvantage(*a, n, p, AuditMode::Exact()).value, 0.0);
  EXPECT_EQ(MonteCarloAdvantage(*HybridReduce(a, n, p), ModelView(n, p), 2000, 1).value, 0.0);
}

// --- lunchtime ---

LunchtimeDistinguisher MajorityAdvice(std::size_t d) {
  return LunchtimeDistinguisher(
      "lunch", 1, 16,
      [d](const Oracle& o) {
        std::size_t ones = 0;
        for (std::uint64_t k = 0; k < 16; ++k) {
          ones += RoundPrediction(o.Query(Individual::FromIndex(d, k % (1u << d))));
        }
        return LunchtimeDistinguisher::Advice{2 * ones >= 16};
      },
      [](const Individual&, int o, std::optional<double>,
         const LunchtimeDistinguisher::Advice& a) { return o == (a[0] ? 1 : 0); });
}

TEST(Lunchtime, CollapseReproducesDecisions) {
  Rng rng(21);
  const std::size_t d = 4;
  for (int trial = 0; trial < 10; ++trial) {
    const Predictor p = Predictor::Table(d, testing::RandomTable(d, rng));
    const LunchtimeDistinguisher a = MajorityAdvice(d);
    const auto collapsed = LunchtimeCollapse(a, p);
    EXPECT_EQ(collapsed->level(), AccessLevel::kSampleAccess);
    const PredictorOracle oracle(p);
    for (std::uint64_t k = 0; k < 16; ++k) {
      const Individual i = Individual::FromIndex(d, k);
      for (int o : {0, 1}) {
        for (double v : {0.0, 0.3, p.Evaluate(i), 1.0}) {
          AccessContext ctx{v, &oracle, nullptr};
          Rng r(0);
          EXPECT_EQ(collapsed->Decide(i, o, ctx, r), a.Decide(i, o, ctx, r));
        }
      }
    }
    const Nature n = testing::RandomNature(d, rng);
    EXPECT_NEAR(Advantage(*collapsed, n, p, AuditMode::Exact()).value,
                Advantage(a, n, p, AuditMode::Exact()).value, 1e-15);
  }
}

TEST(Lunchtime, AdviceFreeRules) {
  const LunchtimeDistinguisher a(
      "plain", 0, 0, [](const Oracle&) { return LunchtimeDistinguisher::Advice{}; },
      [](const Individual& i, int o, std::optional<double>,
         const LunchtimeDistinguisher::Advice&) { return (i.index() + o) % 2; });
  const Family all = a.AllAdvice();
  ASSERT_EQ(all.size(), 1u);
  const Predictor p = Predictor::Constant(2, 0.25);
  const PredictorOracle oracle(p);
  for (std::uint64_t k = 0; k < 4; ++k) {
    for (int o : {0, 1}) {
      AccessContext ctx{0.25, &oracle, nullptr};
      Rng r(0);
      const Individual i = Individual::FromIndex(2, k);
      EXPECT_EQ(all[0]->Decide(i, o, ctx, r), a.Decide(i, o, ctx, r));
      EXPECT_EQ(LunchtimeCollapse(a, p)->Decide(i, o, ctx, r), a.Decide(i, o, ctx, r));
    }
  }
  EXPECT_EQ(MajorityAdvice(2).AllAdvice().size(), 2u);
}

TEST(Lunchtime, PreprocessingBudgetIsEnforced) {
  const LunchtimeDistinguisher greedy(
      "greedy", 1, 2,
      [](const Oracle& o) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += o.Query(Individual::FromIndex(2, k));
        return LunchtimeDistinguisher::Advice{s > 1};
      },
      [](const Individual&, int o, std::optional<double>,
         const LunchtimeDistinguisher::Advice&) { return o; });
  const Predictor p = Predictor::Constant(2, 0.5);
  EXPECT_THROW(LunchtimeCollapse(greedy, p), QueryBudgetExceeded);
}

}  // namespace
}  // namespace oilab
