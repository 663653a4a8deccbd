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

#ifndef OILAB_HARDNESS_H_
#define OILAB_HARDNESS_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/advantage.h"
#include "oilab/distinguisher.h"
#include "oilab/ensemble.h"
#include "oilab/nature.h"
#include "oilab/predictor.h"

namespace oilab {

// Smallest odd t with Pr[Bin(t, 2/3) <= t/2] <= 1/(100 q_Q).
std::size_t MajorityCount(std::uint64_t q_q);

// Pr[Bin(t, p) >= k].
double BinomialUpperTail(std::size_t t, double p, std::size_t k);

// Individuals z = (i, x): x in the low n bits, i - 1 in the next L bits.
struct LevelCoding {
  std::size_t n = 0;
  std::size_t levels = 0;
  std::size_t level_bits = 0;

  std::size_t dimension() const { return n + level_bits; }
  Individual Encode(std::size_t i, const Individual& x) const;
  Individual Encode(std::size_t i, std::uint64_t x) const;
  // Level in [1, 2^L]; may exceed levels() for unused codes.
  std::size_t Level(const Individual& z) const;
  Individual Input(const Individual& z) const;
};

LevelCoding MakeLevelCoding(std::size_t n, std::size_t levels);

// A_i for i in [1, m]. Rejects unless the individual sits at level i. Level 1
// compares the outcome with Q(1, x); higher levels answer each f_{i-1} query of
// the downward reduction with a majority of t random self-reduction runs over
// the rounded predictor, then compare the outcome with the result.
// The stripped variant has Sample access only and runs Q(i, x) against the
// all-zero oracle.
class HardLevelDistinguisher : public Distinguisher {
 public:
  HardLevelDistinguisher(EnsemblePtr ensemble, LevelCoding coding,
                         std::size_t level, std::size_t majority,
                         bool stripped = false);

  Randomness randomness() const override;
  std::size_t target_level() const { return level_; }
  bool stripped() const { return stripped_; }

  std::uint64_t total_queries() const { return total_queries_.load(); }
  std::uint64_t max_queries() const { return max_queries_.load(); }
  std::uint64_t calls() const { return calls_.load(); }
  void ResetCounters() const;

 protected:
  int DecideImpl(const Individual& z, int o, const AccessContext& ctx,
                 Rng& rng) const override;
  nlohmann::json RuleJson() const override;

 private:
  std::uint64_t Compute(const Individual& x, const AccessContext& ctx,
                        Rng& rng) const;

  EnsemblePtr ensemble_;
  LevelCoding coding_;
  std::size_t level_;
  std::size_t majority_;
  bool stripped_;
  mutable std::atomic<std::uint64_t> total_queries_{0};
  mutable std::atomic<std::uint64_t> max_queries_{0};
  mutable std::atomic<std::uint64_t> calls_{0};
};

struct HardInstance {
  EnsemblePtr ensemble;
  LevelCoding coding;
  double epsilon = 0.0;
  std::size_t majority = 0;
  std::uint64_t budget = 0;
  std::shared_ptr<const Nature> nature;
  std::vector<std::shared_ptr<const HardLevelDistinguisher>> levels;
  std::vector<std::shared_ptr<const HardLevelDistinguisher>> stripped;

  Family family() const;
  Family stripped_family() const;
};

// Boolean ensemble with a uniform hard distribution and n + L <= 24.
HardInstance BuildHardNature(EnsemblePtr ensemble);

// Full tables over the hard universe. Unused level codes carry 1/2.
Predictor TruthPredictor(const HardInstance& h);
Predictor LevelInvertedPredictor(const HardInstance& h, std::size_t level);
Predictor ConstantHalfPredictor(const HardInstance& h);
// Truth with per-level flip rates and soft noise drawn from seed.
Predictor FuzzedCandidate(const HardInstance& h, std::uint64_t seed);

// Stripped A_i plus every conjunction of at most two literals over the
// hard universe with outcome filter 1.
Family MatchedSampleFamily(const HardInstance& h);

// Pr_{x ~ D_i}[round(p(i, x)) = f_i(x)].
double LevelAccuracy(const HardInstance& h, const Predictor& p, std::size_t i);

// Walsh-Hadamard transform in place; length must be a power of two.
void Fwht(std::vector<double>& a);

// Exact signed advantage of A_i against p for a single-output linear
// ensemble, with the coins of the random self-reduction and the majority
// marginalized in closed form.
double ExactLinearLevelAdvantage(const HardInstance& h, const Predictor& p,
                                 std::size_t i);

struct InductionRow {
  std::vector<double> accuracy;   // per level
  std::vector<double> advantage;  // exact signed Delta_{A_i}
  bool basis_applies = false;
  bool basis_holds = true;
  std::vector<bool> step_applies;  // index i-2 for level i
  std::vector<bool> step_holds;
};

struct InductionReport {
  std::vector<InductionRow> rows;
  std::size_t counterexamples = 0;
  nlohmann::json ToJson() const;
};

inline constexpr double kBasisAccuracy = 0.98;
inline constexpr double kStepAccuracy = 0.94;

// Requires a single-output linear ensemble.
InductionReport InductionClaimsCheck(const HardInstance& h,
                                     const std::vector<Predictor>& candidates);

struct HardnessDemoConfig {
  std::string ensemble = "linear";
  std::size_t n = 16;
  std::size_t levels = 3;
  std::optional<double> epsilon;  // default 1/(100 m)
  std::uint64_t seed = 7;
  std::uint64_t samples = 20000;
  std::size_t fuzz = 0;
};

struct DemoLevelRow {
  std::size_t level = 0;
  double accuracy = 0.0;
  double exact_advantage = 0.0;
  AdvantageEstimate measured;
  std::uint64_t queries = 0;
  std::uint64_t max_queries_per_call = 0;
};

struct DemoPredictorReport {
  std::string name;
  std::vector<DemoLevelRow> rows;
  double matched_max_advantage = 0.0;
  std::string matched_argmax;
};

struct HardnessDemoReport {
  nlohmann::json ensemble;
  double epsilon = 0.0;
  std::size_t majority = 0;
  std::uint64_t budget = 0;
  std::size_t matched_family_size = 0;
  std::vector<DemoPredictorReport> predictors;
  std::optional<InductionReport> induction;
  bool truth_passes = false;
  bool cheater_caught = false;
  bool cheater_passes_matched = false;

  bool passed() const {
    return truth_passes && cheater_caught && cheater_passes_matched;
  }
  nlohmann::json ToJson() const;
};

HardnessDemoReport RunHardnessDemo(const HardnessDemoConfig& config);

}  // namespace oilab

#endif  // OILAB_HARDNESS_H_
