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

#include "oilab/prediction_indist.h"

#include <cmath>

#include "oilab/error.h"

namespace oilab {

L1Distinguisher::L1Distinguisher()
    : Distinguisher("A_l1", AccessLevel::kSampleAccess, 0, 1) {}

double L1Distinguisher::AcceptanceImpl(const Individual&, int o,
                                       const AccessContext& ctx) const {
  return 1.0 - std::fabs(static_cast<double>(o) - RequirePrediction(ctx));
}

int L1Distinguisher::DecideImpl(const Individual&, int o,
                                const AccessContext& ctx, Rng& rng) const {
  const double reject = std::fabs(static_cast<double>(o) - RequirePrediction(ctx));
  return Uniform01(rng) < reject ? 0 : 1;
}

AdvantageEstimate PiAdvantage(const Distinguisher& a, const Nature& nature,
                              const Predictor& p, const AuditMode& mode) {
  if (a.level() > AccessLevel::kSampleAccess) {
    throw ConfigError("prediction-indistinguishability rules see (i, o, v) only");
  }
  AdvantageEstimate e;
  const auto& pop = nature.population();
  if (mode.exact) {
    if (!pop.is_explicit()) throw ConfigError("exact mode requires an explicit population");
    if (!a.has_exact_acceptance()) {
      throw ConfigError("distinguisher '" + a.id() + "' has no exact acceptance");
    }
    const auto& atoms = pop.atoms();
    const auto& truth = nature.truth_on_atoms();
    const auto model = ValuesOnAtoms(p, pop);
    KahanSum with_truth, with_model;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const Individual i = Individual::FromIndex(pop.dimension(), atoms[k].index);
      for (int o = 0; o <= 1; ++o) {
        const double w = atoms[k].mass * (o ? truth[k] : 1.0 - truth[k]);
        if (w == 0.0) continue;
        with_truth.Add(w * a.Acceptance(i, o, {truth[k], nullptr, nullptr}));
        with_model.Add(w * a.Acceptance(i, o, {model[k], nullptr, nullptr}));
      }
    }
    e.nature_acceptance = with_truth.value();
    e.model_acceptance = with_model.value();
  } else {
    if (mode.samples == 0) throw ConfigError("Monte-Carlo mode needs samples > 0");
    Rng rng(mode.seed);
    std::uint64_t hits_truth = 0, hits_model = 0;
    for (std::uint64_t s = 0; s < mode.samples; ++s) {
      const Individual i = pop.Sample(rng);
      const double ps = nature.truth().Evaluate(i);
      const int o = Bernoulli(rng, ps);
      hits_truth += a.Decide(i, o, {ps, nullptr, nullptr}, rng);
      hits_model += a.Decide(i, o, {p.Evaluate(i), nullptr, nullptr}, rng);
    }
    e.samples = mode.samples;
    e.nature_acceptance = static_cast<double>(hits_truth) / mode.samples;
    e.model_acceptance = static_cast<double>(hits_model) / mode.samples;
    e.radius = DifferenceRadius(mode.samples);
  }
  e.value = e.nature_acceptance - e.model_acceptance;
  return e;
}

L1ClosenessReport L1ClosenessCheck(const Nature& nature, const Predictor& p,
                                   double epsilon, double tau,
                                   const Predictor& f) {
  const auto& pop = nature.population();
  const auto f_values = ValuesOnAtoms(f, pop);
  for (double v : f_values) {
    if (v != 0.0 && v != 1.0) throw ConfigError("reference function is not Boolean");
  }
  L1ClosenessReport r;
  r.delta_l1 = L1Distance(nature.truth(), f, pop).value;
  if (r.delta_l1 > tau + 1e-12) {
    throw HypothesisViolated("||p* - f||_1 = " + std::to_string(r.delta_l1) +
                             " exceeds tau = " + std::to_string(tau));
  }
  static const L1Distinguisher kL1;
  r.pi_advantage = PiAdvantage(kL1, nature, p, AuditMode::Exact()).value;
  r.l1_distance = L1Distance(nature.truth(), p, pop).value;
  r.bound = 4.0 * tau + epsilon;
  r.hypothesis = std::fabs(r.pi_advantage) <= epsilon;
  r.conclusion = r.l1_distance <= r.bound + 1e-9;
  r.holds = !r.hypothesis || r.conclusion;
  return r;
}

namespace {

double Acceptance(const MultiSampleDistinguisher& a, const Nature& nature,
                  SampleSource source, const AuditMode& mode, std::uint64_t stream,
                  double* radius) {
  if (mode.exact) {
    *radius = 0.0;
    return ExactMultiAcceptance(a, nature, source);
  }
  const Estimate e = MonteCarloMultiAcceptance(a, nature, source, mode.samples,
                                               DeriveSeed(mode.seed, stream));
  *radius = e.radius;
  return e.value;
}

}  // namespace

ValidModelReport ValidModelCheck(const std::vector<PiFamilyMember>& family,
                                 double epsilon, const Nature& nature,
                                 const Predictor& p, const AuditMode& mode) {
  constexpr std::size_t kRandomProbes = 20;
  const std::size_t d = nature.dimension();
  if (d > kMaxExplicitDimension) throw ConfigError("probe predictors need d <= 24");
  std::vector<Predictor> probes;
  Rng rng(DeriveSeed(mode.seed, 0x5eed));
  for (std::size_t k = 0; k < kRandomProbes; ++k) {
    std::vector<double> table(std::size_t{1} << d);
    for (double& v : table) v = Uniform01(rng);
    probes.push_back(Predictor::Table(d, std::move(table)));
  }
  probes.push_back(nature.truth());
  probes.push_back(p);

  ValidModelReport report;
  report.probes = probes.size();
  std::uint64_t stream = 1;
  for (const PiFamilyMember& member : family) {
    const auto& a = *member.rule;
    ValidModelReport::Row row;
    row.id = a.id();
    row.q = member.q;
    for (const Predictor& probe : probes) {
      // Nature replaced by D(probe): outcomes and shown values both from probe.
      double radius = 0.0;
      const double acc = Acceptance(a, nature, {&probe, &probe}, mode, stream++, &radius);
      row.max_deviation = std::max(row.max_deviation, std::fabs(acc - member.q) - radius);
    }
    if (row.max_deviation > epsilon) {
      throw PropertyNotSatisfied("rule '" + a.id() + "' deviates from q_A by " +
                                 std::to_string(row.max_deviation) +
                                 " > epsilon = " + std::to_string(epsilon));
    }
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    const double nature_shown_model = Acceptance(a, nature, {nullptr, &p}, mode, stream++, &r1);
    const double model_world = Acceptance(a, nature, {&p, &p}, mode, stream++, &r2);
    const double nature_shown_truth = Acceptance(a, nature, {nullptr, nullptr}, mode, stream++, &r3);
    row.oi_advantage = std::fabs(nature_shown_model - model_world);
    row.pi_advantage = std::fabs(nature_shown_truth - nature_shown_model);
    const double slack_oi = r1 + r2;
    const double slack_pi = r1 + r3;
    row.oi_to_pi = row.oi_advantage > epsilon + slack_oi ||
                   row.pi_advantage <= 3.0 * epsilon + slack_pi + 1e-12;
    row.pi_to_oi = row.pi_advantage > epsilon + slack_pi ||
                   row.oi_advantage <= 3.0 * epsilon + slack_oi + 1e-12;
    report.holds = report.holds && row.oi_to_pi && row.pi_to_oi;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace oilab
