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

#include "oilab/ensemble.h"

#include <bit>
#include <cmath>

#include "oilab/error.h"
#include "oilab/graph.h"

namespace oilab {

std::uint64_t ScalableEnsemble::RandomSr(std::size_t, const Individual&,
                                         const LevelOracle&, Rng&) const {
  throw ConfigError("ensemble '" + name() + "' has no random self-reduction");
}

Individual ScalableEnsemble::SampleHard(std::size_t i, Rng& rng) const {
  CheckLevel(i);
  Individual x(input_bits());
  for (std::size_t b = 0; b < input_bits(); ++b) x.set_bit(b, (rng() >> 63) != 0);
  return x;
}

void ScalableEnsemble::CheckLevel(std::size_t i) const {
  if (i < 1 || i > levels()) {
    throw DomainError("level " + std::to_string(i) + " outside [1, " +
                      std::to_string(levels()) + "]");
  }
}

nlohmann::json ScalableEnsemble::Describe() const {
  const EnsembleCosts c = costs();
  return {{"name", name()},
          {"levels", levels()},
          {"input_bits", input_bits()},
          {"output_bits", output_bits()},
          {"random_self_reduction", has_random_sr()},
          {"error_rate", error_rate()},
          {"costs",
           {{"t_q", c.t_q}, {"q_q", c.q_q}, {"t_r", c.t_r}, {"q_r", c.q_r}, {"t_d", c.t_d}}}};
}

std::uint64_t ApplyRows(const std::vector<std::uint64_t>& rows, std::uint64_t x) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    out |= static_cast<std::uint64_t>(InnerProduct(rows[j], x)) << j;
  }
  return out;
}

namespace {

std::uint64_t RandomMask(Rng& rng, std::size_t bits) {
  const std::uint64_t x = rng();
  return bits >= 64 ? x : x & ((std::uint64_t{1} << bits) - 1);
}

bool HeavyRows(const std::vector<std::uint64_t>& rows, std::size_t min_weight) {
  for (std::uint64_t r : rows) {
    if (static_cast<std::size_t>(std::popcount(r)) < min_weight) return false;
  }
  return true;
}

}  // namespace

LinearEnsemble::LinearEnsemble(std::size_t n, std::size_t m, std::uint64_t seed,
                               std::size_t y)
    : n_(n), m_(m), y_(y) {
  if (n < 1 || n > 63) throw ConfigError("linear ensemble needs 1 <= n <= 63");
  if (m < 1) throw ConfigError("linear ensemble needs m >= 1");
  if (y < 1 || y > 63) throw ConfigError("linear ensemble needs 1 <= y <= 63");
  Rng rng(seed);
  const std::size_t min_weight = std::min<std::size_t>(3, n);
  std::vector<std::uint64_t> a(y);
  do {
    for (auto& row : a) row = RandomMask(rng, n);
  } while (!HeavyRows(a, min_weight));
  rows_.push_back(a);
  transitions_.emplace_back();  // T_1 unused
  for (std::size_t i = 2; i <= m; ++i) {
    std::vector<std::uint64_t> t(n), next(y);
    do {
      for (auto& row : t) row = RandomMask(rng, n);
      // Row j of A_{i-1} T_i is the XOR of the rows of T_i selected by it.
      for (std::size_t j = 0; j < y; ++j) {
        next[j] = 0;
        for (std::size_t r = 0; r < n; ++r) {
          if ((rows_.back()[j] >> r) & 1) next[j] ^= t[r];
        }
      }
    } while (!HeavyRows(next, min_weight));
    transitions_.push_back(t);
    rows_.push_back(next);
  }
}

std::uint64_t LinearEnsemble::Eval(std::size_t i, const Individual& x) const {
  CheckLevel(i);
  return ApplyRows(rows_[i - 1], x.field(0, n_));
}

Individual LinearEnsemble::Transition(std::size_t i, const Individual& x) const {
  if (i < 2) throw DomainError("T_i is defined for i >= 2");
  CheckLevel(i);
  return Individual::FromIndex(n_, ApplyRows(transitions_[i - 1], x.field(0, n_)));
}

std::uint64_t LinearEnsemble::Downward(std::size_t i, const Individual& x,
                                       const LevelOracle& prev) const {
  CheckLevel(i);
  if (i == 1) return Eval(1, x);
  return prev(Transition(i, x));
}

std::uint64_t LinearEnsemble::RandomSr(std::size_t i, const Individual& x,
                                       const LevelOracle& candidate, Rng& rng) const {
  CheckLevel(i);
  const std::uint64_t xv = x.field(0, n_);
  std::vector<std::size_t> ones(y_, 0);
  for (std::size_t k = 0; k < kPairs; ++k) {
    const std::uint64_t r = RandomMask(rng, n_);
    const std::uint64_t v = candidate(Individual::FromIndex(n_, xv ^ r)) ^
                            candidate(Individual::FromIndex(n_, r));
    for (std::size_t j = 0; j < y_; ++j) ones[j] += (v >> j) & 1;
  }
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < y_; ++j) {
    if (2 * ones[j] > kPairs) out |= std::uint64_t{1} << j;
  }
  return out;
}

EnsembleCosts LinearEnsemble::costs() const {
  EnsembleCosts c;
  c.t_q = n_ * n_;
  c.q_q = 1;
  c.t_r = kPairs * (2 * n_ + y_);
  c.q_r = 2 * kPairs;
  c.t_d = n_;
  return c;
}

CliqueEnsemble::CliqueEnsemble(std::size_t n) : n_(n) {
  if (n < 2 || n > 16) throw ConfigError("clique ensemble needs 2 <= n <= 16");
}

std::size_t CliqueEnsemble::input_bits() const { return Graph::EdgeBits(n_); }

std::size_t CliqueEnsemble::output_bits() const {
  // Enough bits for C(n, n/2), the largest possible count.
  std::uint64_t c = 1;
  for (std::size_t k = 1; k <= n_ / 2; ++k) c = c * (n_ - k + 1) / k;
  return std::bit_width(c);
}

std::uint64_t CliqueEnsemble::Eval(std::size_t i, const Individual& x) const {
  CheckLevel(i);
  return CliqueCount(Graph::Decode(n_, x), i + 1);
}

std::uint64_t CliqueEnsemble::Downward(std::size_t i, const Individual& x,
                                       const LevelOracle& prev) const {
  CheckLevel(i);
  const Graph g = Graph::Decode(n_, x);
  if (i == 1) return g.edge_count();
  return CliqueDownward(g, i + 1,
                        [&prev](const Graph& h) { return prev(h.Encode()); });
}

EnsembleCosts CliqueEnsemble::costs() const {
  EnsembleCosts c;
  c.t_q = n_ * n_ * n_;
  c.q_q = n_;
  c.t_d = Graph::EdgeBits(n_);
  return c;
}

int GlReconstructBit(const std::function<int(std::uint64_t)>& g, std::size_t y,
                     std::size_t j, std::size_t reps, Rng& rng) {
  std::size_t ones = 0;
  const std::uint64_t unit = std::uint64_t{1} << j;
  for (std::size_t k = 0; k < reps; ++k) {
    const std::uint64_t rho = RandomMask(rng, y);
    ones += static_cast<std::size_t>(g(rho) ^ g(rho ^ unit));
  }
  return 2 * ones > reps ? 1 : 0;
}

std::size_t GlRepetitions(std::size_t y, std::uint64_t q_r) {
  const double arg = 100.0 * static_cast<double>(y) *
                     static_cast<double>(std::max<std::uint64_t>(1, q_r));
  return 2 * static_cast<std::size_t>(std::ceil(4.0 * std::log(arg))) + 1;
}

BooleanizedEnsemble::BooleanizedEnsemble(EnsemblePtr inner)
    : inner_(std::move(inner)) {
  if (inner_->input_bits() + inner_->output_bits() > 64) {
    throw ConfigError("booleanized inputs must fit in 64 bits");
  }
  reps_ = GlRepetitions(inner_->output_bits(), inner_->costs().q_r);
}

std::size_t BooleanizedEnsemble::input_bits() const {
  return inner_->input_bits() + inner_->output_bits();
}

Individual BooleanizedEnsemble::Join(const Individual& x, std::uint64_t r) const {
  Individual z(input_bits());
  z.set_field(0, inner_->input_bits(), x.field(0, inner_->input_bits()));
  z.set_field(inner_->input_bits(), inner_->output_bits(), r);
  return z;
}

std::uint64_t BooleanizedEnsemble::Eval(std::size_t i, const Individual& z) const {
  const std::size_t n = inner_->input_bits();
  const Individual x = Individual::FromIndex(n, z.field(0, n));
  return InnerProduct(inner_->Eval(i, x), z.field(n, inner_->output_bits()));
}

std::uint64_t BooleanizedEnsemble::Downward(std::size_t i, const Individual& z,
                                            const LevelOracle& prev) const {
  CheckLevel(i);
  const std::size_t n = inner_->input_bits();
  const std::size_t y = inner_->output_bits();
  const Individual x = Individual::FromIndex(n, z.field(0, n));
  const LevelOracle simulated = [&](const Individual& xp) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < y; ++j) {
      v |= (prev(Join(xp, std::uint64_t{1} << j)) & 1) << j;
    }
    return v;
  };
  return InnerProduct(inner_->Downward(i, x, simulated), z.field(n, y));
}

std::uint64_t BooleanizedEnsemble::RandomSr(std::size_t i, const Individual& z,
                                            const LevelOracle& candidate,
                                            Rng& rng) const {
  CheckLevel(i);
  const std::size_t n = inner_->input_bits();
  const std::size_t y = inner_->output_bits();
  const Individual x = Individual::FromIndex(n, z.field(0, n));
  const std::uint64_t r = z.field(n, y);
  const LevelOracle rebuilt = [&](const Individual& xp) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < y; ++j) {
      const int bit = GlReconstructBit(
          [&](std::uint64_t rho) {
            return static_cast<int>(candidate(Join(xp, rho)) & 1);
          },
          y, j, reps_, rng);
      v |= static_cast<std::uint64_t>(bit) << j;
    }
    return v;
  };
  int votes = 0;
  for (int k = 0; k < 3; ++k) {
    votes += InnerProduct(inner_->RandomSr(i, x, rebuilt, rng), r);
  }
  return votes >= 2 ? 1 : 0;
}

Individual BooleanizedEnsemble::SampleHard(std::size_t i, Rng& rng) const {
  const Individual x = inner_->SampleHard(i, rng);
  return Join(x, RandomMask(rng, inner_->output_bits()));
}

double BooleanizedEnsemble::error_rate() const {
  return (0.25 - 0.01) * inner_->error_rate();
}

EnsembleCosts BooleanizedEnsemble::costs() const {
  const EnsembleCosts in = inner_->costs();
  const std::uint64_t y = inner_->output_bits();
  EnsembleCosts c;
  c.t_q = in.t_q + in.q_q * y;
  c.q_q = in.q_q * y;
  c.t_r = 3 * (in.t_r + in.q_r * y * 2 * reps_);
  c.q_r = 3 * in.q_r * y * 2 * reps_;
  c.t_d = in.t_d + y;
  return c;
}

}  // namespace oilab
