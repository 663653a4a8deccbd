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

#ifndef OILAB_ENSEMBLE_H_
#define OILAB_ENSEMBLE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/individual.h"
#include "oilab/rng.h"

namespace oilab {

struct EnsembleCosts {
  std::uint64_t t_q = 0;
  std::uint64_t q_q = 0;
  std::uint64_t t_r = 0;
  std::uint64_t q_r = 0;
  std::uint64_t t_d = 0;
};

// Indexed family f_1..f_m over inputs of input_bits() bits with y-bit values,
// a downward self-reduction (f_i from an oracle for f_{i-1}; f_1 from
// nothing), and optionally a random self-reduction that recovers f_i(x) with
// probability >= 2/3 from any oracle whose error rate on the hard
// distribution is below error_rate().
class ScalableEnsemble {
 public:
  using LevelOracle = std::function<std::uint64_t(const Individual&)>;

  virtual ~ScalableEnsemble() = default;
  virtual std::string name() const = 0;
  virtual std::size_t levels() const = 0;
  virtual std::size_t input_bits() const = 0;
  virtual std::size_t output_bits() const = 0;
  bool boolean() const { return output_bits() == 1; }

  virtual std::uint64_t Eval(std::size_t i, const Individual& x) const = 0;
  virtual std::uint64_t Downward(std::size_t i, const Individual& x,
                                 const LevelOracle& prev) const = 0;
  virtual bool has_random_sr() const { return false; }
  virtual std::uint64_t RandomSr(std::size_t i, const Individual& x,
                                 const LevelOracle& candidate, Rng& rng) const;
  // Default hard distribution: uniform bits.
  virtual Individual SampleHard(std::size_t i, Rng& rng) const;
  virtual bool hard_is_uniform() const { return true; }
  virtual double error_rate() const { return 0.0; }
  virtual EnsembleCosts costs() const = 0;

  nlohmann::json Describe() const;

 protected:
  void CheckLevel(std::size_t i) const;
};

using EnsemblePtr = std::shared_ptr<const ScalableEnsemble>;

// f_1(x) = A_1 x over GF(2) and f_i(x) = f_{i-1}(T_i x), i.e. A_i = A_{i-1} T_i,
// with hidden random A_1 and published T_i. Every row of every A_i has
// Hamming weight >= 3. The random self-reduction takes a bitwise majority of
// g(x xor r) xor g(r) over 9 uniform r.
class LinearEnsemble : public ScalableEnsemble {
 public:
  static constexpr std::size_t kPairs = 9;
  static constexpr double kErrorRate = 0.2;

  LinearEnsemble(std::size_t n, std::size_t m, std::uint64_t seed,
                 std::size_t y = 1);

  std::string name() const override { return "linear"; }
  std::size_t levels() const override { return m_; }
  std::size_t input_bits() const override { return n_; }
  std::size_t output_bits() const override { return y_; }
  std::uint64_t Eval(std::size_t i, const Individual& x) const override;
  std::uint64_t Downward(std::size_t i, const Individual& x,
                         const LevelOracle& prev) const override;
  bool has_random_sr() const override { return true; }
  std::uint64_t RandomSr(std::size_t i, const Individual& x,
                         const LevelOracle& candidate, Rng& rng) const override;
  double error_rate() const override { return kErrorRate; }
  EnsembleCosts costs() const override;

  // T_i x; i >= 2.
  Individual Transition(std::size_t i, const Individual& x) const;
  // Row j of A_i as a bit mask.
  std::uint64_t Row(std::size_t i, std::size_t j) const { return rows_[i - 1][j]; }

 private:
  std::size_t n_, m_, y_;
  std::vector<std::vector<std::uint64_t>> rows_;        // rows_[i-1] = A_i
  std::vector<std::vector<std::uint64_t>> transitions_;  // transitions_[i-1] = T_i
};

// Level i counts (i+1)-cliques of an n-vertex graph encoded in C(n,2) bits:
// level 1 counts edges directly and higher levels use the neighborhood
// identity with n oracle calls. No random self-reduction.
class CliqueEnsemble : public ScalableEnsemble {
 public:
  explicit CliqueEnsemble(std::size_t n);
  std::string name() const override { return "clique"; }
  std::size_t levels() const override { return n_ - 1; }
  std::size_t input_bits() const override;
  std::size_t output_bits() const override;
  std::uint64_t Eval(std::size_t i, const Individual& x) const override;
  std::uint64_t Downward(std::size_t i, const Individual& x,
                         const LevelOracle& prev) const override;
  EnsembleCosts costs() const override;

 private:
  std::size_t n_;
};

// Inner product <v, r> over GF(2).
inline int InnerProduct(std::uint64_t v, std::uint64_t r) {
  return __builtin_parityll(v & r);
}

// Majority over reps of g(rho) xor g(rho xor e_j), rho uniform in {0,1}^y.
int GlReconstructBit(const std::function<int(std::uint64_t)>& g, std::size_t y,
                     std::size_t j, std::size_t reps, Rng& rng);
// Odd repetition count 2 ceil(4 ln(100 y q_R)) + 1.
std::size_t GlRepetitions(std::size_t y, std::uint64_t q_r);

// g_i(x, r) = <f_i(x), r> on inputs x || r (x in the low bits). The downward
// step simulates each f-query with y g-queries on unit vectors; the random
// self-reduction rebuilds f-values bitwise from XOR pairs and feeds them to
// the inner reduction, repeated three times under a majority vote.
class BooleanizedEnsemble : public ScalableEnsemble {
 public:
  explicit BooleanizedEnsemble(EnsemblePtr inner);

  std::string name() const override { return "gl(" + inner_->name() + ")"; }
  std::size_t levels() const override { return inner_->levels(); }
  std::size_t input_bits() const override;
  std::size_t output_bits() const override { return 1; }
  std::uint64_t Eval(std::size_t i, const Individual& x) const override;
  std::uint64_t Downward(std::size_t i, const Individual& x,
                         const LevelOracle& prev) const override;
  bool has_random_sr() const override { return inner_->has_random_sr(); }
  std::uint64_t RandomSr(std::size_t i, const Individual& x,
                         const LevelOracle& candidate, Rng& rng) const override;
  bool hard_is_uniform() const override { return inner_->hard_is_uniform(); }
  Individual SampleHard(std::size_t i, Rng& rng) const override;
  double error_rate() const override;
  EnsembleCosts costs() const override;

  const ScalableEnsemble& inner() const { return *inner_; }
  std::size_t repetitions() const { return reps_; }
  Individual Join(const Individual& x, std::uint64_t r) const;

 private:
  EnsemblePtr inner_;
  std::size_t reps_;
};

// Bitwise GF(2) product of a row-major matrix with x (rows as masks).
std::uint64_t ApplyRows(const std::vector<std::uint64_t>& rows, std::uint64_t x);

}  // namespace oilab

#endif  // OILAB_ENSEMBLE_H_
