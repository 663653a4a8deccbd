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

#ifndef OILAB_CONSTRUCT_H_
#define OILAB_CONSTRUCT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/advantage.h"
#include "oilab/distinguisher.h"
#include "oilab/nature.h"
#include "oilab/predictor.h"
#include "oilab/size_account.h"

namespace oilab {

enum class SelectionRule { kFirstViolation, kMaxAbsAdvantage };

struct ConstructConfig {
  double epsilon = 0.1;
  // Defaults to IterationBound(epsilon) + 1, doubled on a lattice.
  std::optional<std::uint64_t> max_iterations;
  bool exact = true;
  // m_t: fresh nature and model samples per member per iteration.
  std::uint64_t samples_per_iteration = 0;
  SelectionRule selection = SelectionRule::kMaxAbsAdvantage;
  std::uint64_t seed = 0;
  std::optional<double> warm_start;
  // Lattice half-width; defaults to epsilon / 4. Zero keeps values continuous.
  std::optional<double> precision;
};

// ceil(4 / (3 eps^2)).
std::uint64_t IterationBound(double epsilon);
std::uint64_t MaxIterations(const ConstructConfig& cfg);
// Lattice denominator K = ceil(1 / (2 precision)), or 0 for continuous.
std::uint64_t GridDenominator(const ConstructConfig& cfg);
// ceil(ln(2 |A| / 0.05) * 8 / eps^2).
std::uint64_t RequiredSamples(double epsilon, std::size_t family_size);

struct TraceRecord {
  std::uint64_t t = 0;
  std::optional<std::string> chosen;
  double signed_advantage = 0.0;  // of the chosen member, else the max |.|
  double coefficient = 0.0;
  std::optional<double> potential;  // phi(p^(t))
  SizeBound size_bound;
  double radius = 0.0;
};

struct ConstructResult {
  Predictor predictor;
  std::vector<TraceRecord> trace;  // last record has no chosen member
  std::vector<AdvantageEstimate> final_audit;
};

// Audits the family against p^(t) and adds (Delta/2) delta_A for a violated
// member until none has |Delta| > epsilon. Throws NonTermination past
// MaxIterations(cfg).
ConstructResult ConstructOi(const Nature& nature, const Family& family,
                            const ConstructConfig& cfg);

// p + (Delta/2) delta_A projected and snapped; Delta/2 rounds up to the
// lattice so the potential still falls by at least 3 Delta^2 / 4.
Predictor UpdateStep(const Predictor& p, DistinguisherPtr a, double signed_delta);

// Rebuilds the predictor from an initial predictor and a trace.
Predictor ReplayTrace(const Predictor& initial, const Family& family,
                      const std::vector<TraceRecord>& trace);

nlohmann::json TraceToJson(const std::vector<TraceRecord>& trace);

}  // namespace oilab

#endif  // OILAB_CONSTRUCT_H_
