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

#ifndef OILAB_ADVANTAGE_H_
#define OILAB_ADVANTAGE_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "oilab/access.h"
#include "oilab/distinguisher.h"
#include "oilab/nature.h"
#include "oilab/predictor.h"

namespace oilab {

struct AuditMode {
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static AuditMode Exact() { return {}; }
  static AuditMode MonteCarlo(std::uint64_t samples, std::uint64_t seed) {
    return {false, samples, seed};
  }
};

// Signed advantage Pr_nature[A=1] - Pr_model[A=1]. radius is 0 in exact mode
// and the 95% Hoeffding half-width otherwise.
struct AdvantageEstimate {
  double value = 0.0;
  double radius = 0.0;
  double nature_acceptance = 0.0;
  double model_acceptance = 0.0;
  std::uint64_t samples = 0;

  double magnitude() const { return value < 0 ? -value : value; }
};

// A predictor as seen by distinguishers during an audit: its values on the
// population's atoms, an oracle, and (lazily) its serialized description.
class ModelView {
 public:
  // Tabulates p when the dimension is at most 20.
  ModelView(const Nature& nature, const Predictor& p);
  // Uses a precomputed full table of p.
  ModelView(const Nature& nature, const Predictor& p, std::vector<double> table);

  const Nature& nature() const { return nature_; }
  const Predictor& predictor() const { return predictor_; }
  // Aligned with nature().population().atoms(); explicit populations only.
  const std::vector<double>& on_atoms() const { return on_atoms_; }
  const Oracle& oracle() const { return *oracle_; }
  double Value(const Individual& i) const;
  std::shared_ptr<const std::string> description() const;
  AccessContext Context(double v) const;

 private:
  void Init();

  const Nature& nature_;
  const Predictor& predictor_;
  std::vector<double> table_;
  std::vector<double> on_atoms_;
  std::unique_ptr<Oracle> oracle_;
  mutable std::once_flag description_once_;
  mutable std::shared_ptr<const std::string> description_;
};

AdvantageEstimate ExactAdvantage(const Distinguisher& a, const ModelView& view);
AdvantageEstimate MonteCarloAdvantage(const Distinguisher& a,
                                      const ModelView& view,
                                      std::uint64_t samples, std::uint64_t seed);
AdvantageEstimate Advantage(const Distinguisher& a, const ModelView& view,
                            const AuditMode& mode);
AdvantageEstimate Advantage(const Distinguisher& a, const Nature& nature,
                            const Predictor& p, const AuditMode& mode);

// Audits every member (in parallel). In Monte-Carlo mode member k uses the
// seed DeriveSeed(mode.seed, k).
std::vector<AdvantageEstimate> AuditFamily(const Family& family,
                                           const ModelView& view,
                                           const AuditMode& mode);

// E_{i ~ D_X}[(p*_i - p_i) * delta_A(i)]: the correlation form of the signed
// advantage, computed without forming acceptance probabilities per world.
double CorrelationForm(const Distinguisher& a, const ModelView& view);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};
IdentityCheck AdvantageIdentityCheck(const Distinguisher& a,
                                     const ModelView& view);

}  // namespace oilab

#endif  // OILAB_ADVANTAGE_H_
