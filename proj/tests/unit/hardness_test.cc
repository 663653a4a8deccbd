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

#include "oilab/advantage.h"
#include "oilab/ensemble.h"
#include "oilab/error.h"
#include "oilab/graph.h"
#include "oilab/hardness.h"

namespace oilab {
namespace {

TEST(Graph, CompleteGraphCounts) {
  EXPECT_EQ(CliqueCount(Graph::Complete(4), 3), 4u);
  EXPECT_EQ(CliqueCount(Graph::Complete(5), 3), 10u);
  EXPECT_EQ(CliqueCount(Graph::Complete(5), 4), 5u);
  EXPECT_EQ(CliqueCount(Graph::Complete(6), 6), 1u);
  EXPECT_EQ(CliqueCount(Graph(6), 2), 0u);
  EXPECT_EQ(CliqueCount(Graph::Complete(6), 2), 15u);
}

TEST(Graph, EncodingRoundTrip) {
  Rng rng(61);
  for (int k = 0; k < 50; ++k) {
    const Graph g = Graph::Random(7, 0.5, rng);
    const Graph back = Graph::Decode(7, g.Encode());
    for (std::size_t u = 0; u < 7; ++u) {
      for (std::size_t v = 0; v < 7; ++v) EXPECT_EQ(back.edge(u, v), g.edge(u, v));
    }
    EXPECT_EQ(g.Encode().dimension(), Graph::EdgeBits(7));
  }
}

TEST(Graph, FastCountMatchesNaive) {
  Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const Graph g = Graph::Random(n, 0.2 + 0.1 * (trial % 7), rng);
    for (std::size_t k = 1; k <= n; ++k) {
      EXPECT_EQ(CliqueCount(g, k), CliqueCountNaive(g, k));
    }
  }
}

TEST(Graph, DownwardWithPerfectOracle) {
  Rng rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + trial % 5;
    const Graph g = Graph::Random(n, 0.6, rng);
    for (std::size_t k : {3u, 4u, 5u}) {
      const auto oracle = [k](const Graph& h) { return CliqueCount(h, k - 1); };
      EXPECT_EQ(CliqueDownward(g, k, oracle), CliqueCountNaive(g, k));
    }
  }
  const auto k3 = [](const Graph& h) { return CliqueCount(h, 2); };
  EXPECT_EQ(CliqueDownward(Graph::Complete(4), 3, k3), 4u);
  EXPECT_EQ(CliqueDownward(Graph::Complete(5), 3, k3), 10u);
}

TEST(Ensemble, CliqueLevelsChain) {
  const CliqueEnsemble e(6);
  EXPECT_EQ(e.input_bits(), 15u);
  EXPECT_EQ(e.levels(), 5u);
  EXPECT_FALSE(e.has_random_sr());
  Rng rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const Individual x = Graph::Random(6, 0.7, rng).Encode();
    for (std::size_t i = 2; i <= e.levels(); ++i) {
      const auto prev = [&e, i](const Individual& z) { return e.Eval(i - 1, z); };
      EXPECT_EQ(e.Downward(i, x, prev), e.Eval(i, x));
    }
  }
  EXPECT_THROW(e.Eval(0, Individual::FromIndex(15, 0)), DomainError);
  EXPECT_THROW(CliqueEnsemble(1), ConfigError);
}

TEST(Ensemble, LinearDownwardAndSelfReduction) {
  const LinearEnsemble e(10, 4, 3);
  Rng rng(65);
  for (std::size_t i = 1; i <= 4; ++i) {
    for (std::size_t j = 0; j < 1; ++j) EXPECT_GE(__builtin_popcountll(e.Row(i, j)), 3);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Individual x = Individual::FromIndex(10, UniformBelow(rng, 1024));
    for (std::size_t i = 2; i <= 4; ++i) {
      const auto prev = [&e, i](const Individual& z) { return e.Eval(i - 1, z); };
      EXPECT_EQ(e.Downward(i, x, prev), e.Eval(i, x));
      const auto exact = [&e, i](const Individual& z) { return e.Eval(i, z); };
      EXPECT_EQ(e.RandomSr(i, x, exact, rng), e.Eval(i, x));
    }
  }
}

TEST(Ensemble, RandomSelfReductionToleratesErrors) {
  const LinearEnsemble e(12, 2, 4);
  Rng noise(66);
  const auto noisy = [&](const Individual& z) {
    return e.Eval(2, z) ^ static_cast<std::uint64_t>(Bernoulli(noise, 0.1));
  };
  Rng rng(67);
  int correct = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Individual x = Individual::FromIndex(12, UniformBelow(rng, 4096));
    correct += e.RandomSr(2, x, noisy, rng) == e.Eval(2, x);
  }
  EXPECT_GE(correct, 2.0 / 3.0 * trials);
}

TEST(Goldreich, ReconstructsFromSevenEighths) {
  const std::size_t y = 8;
  Rng setup(68);
  const std::uint64_t x = UniformBelow(setup, 256);
  std::vector<std::uint8_t> flip(256);
  for (std::size_t r = 0; r < 256; ++r) flip[r] = r % 8 == 3;
  const auto g = [&](std::uint64_t r) { return InnerProduct(x, r) ^ flip[r]; };
  Rng rng(69);
  const std::size_t reps = GlRepetitions(y, 1);
  int ok = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t j = t % y;
    ok += GlReconstructBit(g, y, j, reps, rng) == static_cast<int>((x >> j) & 1);
  }
  EXPECT_GE(ok, 0.99 * trials);
}

TEST(Goldreich, BooleanizedEnsembleAgrees) {
  const auto inner = std::make_shared<LinearEnsemble>(6, 3, 9, 3);
  const BooleanizedEnsemble b(inner);
  EXPECT_TRUE(b.boolean());
  EXPECT_EQ(b.input_bits(), 6u + 3u);
  Rng rng(70);
  for (int trial = 0; trial < 50; ++trial) {
    const Individual x = Individual::FromIndex(6, UniformBelow(rng, 64));
    const std::uint64_t r = UniformBelow(rng, 8);
    for (std::size_t i = 1; i <= 3; ++i) {
      EXPECT_EQ(b.Eval(i, b.Join(x, r)),
                static_cast<std::uint64_t>(InnerProduct(inner->Eval(i, x), r)));
    }
  }
}

TEST(Hardness, MajorityAndTails) {
  EXPECT_NEAR(BinomialUpperTail(1, 0.3, 1), 0.3, 1e-15);
  EXPECT_NEAR(BinomialUpperTail(3, 0.5, 2), 0.5, 1e-15);
  EXPECT_NEAR(BinomialUpperTail(4, 0.5, 0), 1.0, 1e-15);
  EXPECT_EQ(BinomialUpperTail(4, 0.5, 5), 0.0);
  EXPECT_EQ(MajorityCount(1), 47u);
  for (std::uint64_t q : {1u, 4u, 16u}) {
    const std::size_t t = MajorityCount(q);
    EXPECT_EQ(t % 2, 1u);
    EXPECT_LE(BinomialUpperTail(t, 1.0 / 3.0, t / 2 + 1), 1.0 / (100.0 * q));
    EXPECT_GT(BinomialUpperTail(t - 2, 1.0 / 3.0, t / 2), 1.0 / (100.0 * q));
  }
}

TEST(Hardness, LevelCodingRoundTrip) {
  const LevelCoding c = MakeLevelCoding(6, 3);
  EXPECT_EQ(c.level_bits, 2u);
  EXPECT_EQ(MakeLevelCoding(6, 1).level_bits, 1u);
  for (std::size_t i = 1; i <= 3; ++i) {
    for (std::uint64_t x = 0; x < 64; ++x) {
      const Individual z = c.Encode(i, x);
      EXPECT_EQ(c.Level(z), i);
      EXPECT_EQ(c.Input(z).index(), x);
    }
  }
}

class SmallHardInstance : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    instance_ = new HardInstance(BuildHardNature(std::make_shared<LinearEnsemble>(8, 3, 11)));
  }
  static void TearDownTestSuite() { delete instance_; }
  static HardInstance* instance_;
};
HardInstance* SmallHardInstance::instance_ = nullptr;

TEST_F(SmallHardInstance, Parameters) {
  const HardInstance& h = *instance_;
  EXPECT_DOUBLE_EQ(h.epsilon, 1.0 / 300.0);
  EXPECT_EQ(h.majority, 47u);
  EXPECT_EQ(h.budget, 47u * 18u);
  EXPECT_EQ(h.nature->dimension(), 10u);
  ASSERT_EQ(h.levels.size(), 3u);
  EXPECT_EQ(h.levels[1]->level(), AccessLevel::kOracleAccess);
  EXPECT_EQ(h.stripped[1]->level(), AccessLevel::kSampleAccess);
}

TEST_F(SmallHardInstance, TruthAndCheaterAdvantages) {
  const HardInstance& h = *instance_;
  const Predictor truth = TruthPredictor(h);
  const Predictor cheat = LevelInvertedPredictor(h, 2);
  for (std::size_t i = 1; i <= 3; ++i) {
    EXPECT_NEAR(ExactLinearLevelAdvantage(h, truth, i), 0.0, 1e-9);
    EXPECT_NEAR(LevelAccuracy(h, truth, i), 1.0, 1e-12);
  }
  EXPECT_NEAR(LevelAccuracy(h, cheat, 2), 0.0, 1e-12);
  EXPECT_GT(ExactLinearLevelAdvantage(h, cheat, 2), 10 * h.epsilon);
  EXPECT_NEAR(ExactLinearLevelAdvantage(h, ConstantHalfPredictor(h), 1), 1.0 / 6.0, 1e-9);
}

TEST_F(SmallHardInstance, MonteCarloMatchesExactWithinBudget) {
  const HardInstance& h = *instance_;
  const Predictor cheat = LevelInvertedPredictor(h, 2);
  const auto& a = *h.levels[1];
  a.ResetCounters();
  const auto mc = Advantage(a, *h.nature, cheat, AuditMode::MonteCarlo(3000, 1));
  EXPECT_NEAR(mc.value, ExactLinearLevelAdvantage(h, cheat, 2), mc.radius);
  EXPECT_GT(a.calls(), 0u);
  EXPECT_LE(a.max_queries(), h.budget);
}

TEST_F(SmallHardInstance, StrippedFamilyMissesCheater) {
  const HardInstance& h = *instance_;
  const Predictor cheat = LevelInvertedPredictor(h, 2);
  const Family matched = MatchedSampleFamily(h);
  EXPECT_GT(matched.size(), 3u);
  const ModelView view(*h.nature, cheat);
  for (const auto& e : AuditFamily(matched, view, AuditMode::Exact())) {
    EXPECT_LE(e.magnitude(), h.epsilon);
  }
}

TEST_F(SmallHardInstance, InductionClaimsHold) {
  const HardInstance& h = *instance_;
  std::vector<Predictor> candidates = {TruthPredictor(h), LevelInvertedPredictor(h, 2),
                                       ConstantHalfPredictor(h)};
  for (std::uint64_t s = 0; s < 6; ++s) candidates.push_back(FuzzedCandidate(h, s));
  const InductionReport r = InductionClaimsCheck(h, candidates);
  EXPECT_EQ(r.rows.size(), candidates.size());
  EXPECT_EQ(r.counterexamples, 0u);
}

TEST(Hardness, RejectsNonBooleanEnsemble) {
  EXPECT_THROW(BuildHardNature(std::make_shared<LinearEnsemble>(6, 2, 1, 3)), ConfigError);
}

}  // namespace
}  // namespace oilab
