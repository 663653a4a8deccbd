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

#ifndef OILAB_PREDICTION_INDIST_H_
#define OILAB_PREDICTION_INDIST_H_

#include <cstdint>
#include <vector>

#include "oilab/advantage.h"
#include "oilab/distinguisher.h"
#include "oilab/multi_sample.h"
#include "oilab/nature.h"
#include "oilab/predictor.h"

namespace oilab {

// Rejects with probability |o - v|. Acceptance has the closed form
// 1 - |o - v|, so exact audits never simulate its coin.
class L1Distinguisher : public Distinguisher {
 public:
  L1Distinguisher();
  Randomness randomness() const override { return Randomness::kContinuous; }
  bool has_exact_acceptance() const override { return true; }

 protected:
  double AcceptanceImpl(const Individual& i, int o,
                        const AccessContext& ctx) const override;
  int DecideImpl(const Individual& i, int o, const AccessContext& ctx,
                 Rng& rng) const override;
};

// Pr[A(i, o*, p*_i) = 1] - Pr[A(i, o*, p_i) = 1], outcomes from nature in
// both worlds. The rule sees only (i, o, v).
AdvantageEstimate PiAdvantage(const Distinguisher& a, const Nature& nature,
                              const Predictor& p, const AuditMode& mode);

struct L1ClosenessReport {
  double pi_advantage = 0.0;
  double l1_distance = 0.0;   // ||p* - p||_1
  double delta_l1 = 0.0;      // ||p* - f||_1
  double bound = 0.0;         // 4 tau + epsilon
  bool hypothesis = false;    // |pi_advantage| <= epsilon
  bool conclusion = false;    // l1_distance <= bound
  bool holds = true;          // hypothesis implies conclusion
};

// f must be Boolean on the support (ConfigError otherwise) and within tau of
// p* in l1 (HypothesisViolated otherwise).
L1ClosenessReport L1ClosenessCheck(const Nature& nature, const Predictor& p,
                                   double epsilon, double tau, const Predictor& f);

struct PiFamilyMember {
  MultiSamplePtr rule;
  double q = 0.0;  // declared acceptance level q_A
};

struct ValidModelReport {
  struct Row {
    std::string id;
    double q = 0.0;
    double max_deviation = 0.0;  // over the probe predictors
    double oi_advantage = 0.0;
    double pi_advantage = 0.0;
    bool oi_to_pi = true;        // OI <= eps implies PI <= 3 eps
    bool pi_to_oi = true;        // PI <= eps implies OI <= 3 eps
  };
  std::vector<Row> rows;
  std::size_t probes = 0;
  bool holds = true;
};

// Verifies the valid-model property against 20 seeded random predictors plus
// p* and p (PropertyNotSatisfied when some acceptance leaves q_A +- epsilon,
// widened by the Monte-Carlo radius in sampled mode), then checks both
// implications with the 3 epsilon degradation.
ValidModelReport ValidModelCheck(const std::vector<PiFamilyMember>& family,
                                 double epsilon, const Nature& nature,
                                 const Predictor& p, const AuditMode& mode);

}  // namespace oilab

#endif  // OILAB_PREDICTION_INDIST_H_
