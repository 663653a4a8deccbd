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

#include "oilab/construct.h"

#include <cmath>
#include <unordered_map>

#include "oilab/error.h"

namespace oilab {

std::uint64_t IterationBound(double epsilon) {
  return static_cast<std::uint64_t>(std::ceil(4.0 / (3.0 * epsilon * epsilon) - 1e-9));
}

std::uint64_t GridDenominator(const ConstructConfig& cfg) {
  const double precision = cfg.precision.value_or(cfg.epsilon / 4.0);
  if (precision <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(0.5 / precision - 1e-9));
}

std::uint64_t MaxIterations(const ConstructConfig& cfg) {
  if (cfg.max_iterations) return *cfg.max_iterations;
  const std::uint64_t base = IterationBound(cfg.epsilon) + 1;
  return GridDenominator(cfg) > 0 ? 2 * base : base;
}

std::uint64_t RequiredSamples(double epsilon, std::size_t family_size) {
  const double a = static_cast<double>(std::max<std::size_t>(1, family_size));
  return static_cast<std::uint64_t>(
      std::ceil(std::log(2.0 * a / 0.05) * 8.0 / (epsilon * epsilon)));
}

Predictor UpdateStep(const Predictor& p, DistinguisherPtr a, double signed_delta) {
  return p.WithTerm({p.RoundCoefficient(signed_delta / 2.0), std::move(a), nullptr});
}

namespace {

void Validate(const Nature& nature, const Family& family,
              const ConstructConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw ConfigError("epsilon must lie in (0,1)");
  }
  if (family.empty()) throw ConfigError("construction needs a nonempty family");
  if (cfg.exact && !nature.population().is_explicit()) {
    throw ConfigError("exact construction requires an explicit population");
  }
  if (!cfg.exact) {
    const std::uint64_t need = RequiredSamples(cfg.epsilon, family.size());
    if (cfg.samples_per_iteration < need) {
      throw ConfigError("sampled audit needs m_t >= " + std::to_string(need) +
                        " samples per iteration");
    }
  }
  if (nature.dimension() > kMaxExplicitDimension) {
    throw ConfigError("construction tabulates predictors; dimension must be <= 24");
  }
}

std::optional<std::size_t> Select(const std::vector<AdvantageEstimate>& audit,
                                  double epsilon, SelectionRule rule) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < audit.size(); ++k) {
    if (audit[k].magnitude() <= epsilon) continue;
    if (rule == SelectionRule::kFirstViolation) return k;
    if (!best || audit[k].magnitude() > audit[*best].magnitude()) best = k;
  }
  return best;
}

}  // namespace

ConstructResult ConstructOi(const Nature& nature, const Family& family,
                            const ConstructConfig& cfg) {
  Validate(nature, family, cfg);
  const std::uint64_t limit = MaxIterations(cfg);
  const bool track_potential = nature.population().is_explicit();

  Predictor p = Predictor::Constant(nature.dimension(), cfg.warm_start.value_or(0.5))
                    .WithGrid(GridDenominator(cfg));
  std::vector<double> table = p.Tabulate();
  ConstructResult result;

  for (std::uint64_t t = 0;; ++t) {
    ModelView view(nature, p, table);
    if (view.oracle().version() != t || p.terms().size() != t) {
      throw Error("oracle handle serves version " +
                  std::to_string(view.oracle().version()) + " at iteration " +
                  std::to_string(t));
    }
    const AuditMode mode = cfg.exact
                               ? AuditMode::Exact()
                               : AuditMode::MonteCarlo(cfg.samples_per_iteration,
                                                       DeriveSeed(cfg.seed, t));
    std::vector<AdvantageEstimate> audit = AuditFamily(family, view, mode);

    TraceRecord rec;
    rec.t = t;
    rec.size_bound = p.size_account().bound();
    if (track_potential) rec.potential = Potential(view.on_atoms(), nature);
    const std::optional<std::size_t> pick = Select(audit, cfg.epsilon, cfg.selection);
    if (!pick) {
      for (const auto& e : audit) {
        if (e.magnitude() > std::fabs(rec.signed_advantage)) {
          rec.signed_advantage = e.value;
          rec.radius = e.radius;
        }
      }
      result.trace.push_back(rec);
      result.final_audit = std::move(audit);
      break;
    }
    if (t >= limit) {
      throw NonTermination("no convergence within " + std::to_string(limit) +
                           " updates at epsilon " + std::to_string(cfg.epsilon));
    }
    const DistinguisherPtr& chosen = family[*pick];
    UpdateTerm term{p.RoundCoefficient(audit[*pick].value / 2.0), chosen, nullptr};
    if (chosen->level() == AccessLevel::kCodeAccess) term.description = view.description();
    rec.chosen = chosen->id();
    rec.signed_advantage = audit[*pick].value;
    rec.coefficient = term.coefficient;
    rec.radius = audit[*pick].radius;
    result.trace.push_back(rec);

    Predictor next = p.WithTerm(std::move(term));
    table = next.ApplyTerm(t, table);
    p = std::move(next);
  }
  result.predictor = std::move(p);
  return result;
}

Predictor ReplayTrace(const Predictor& initial, const Family& family,
                      const std::vector<TraceRecord>& trace) {
  std::unordered_map<std::string, DistinguisherPtr> by_id;
  for (const auto& a : family) by_id.emplace(a->id(), a);
  Predictor p = initial;
  for (const TraceRecord& rec : trace) {
    if (!rec.chosen) continue;
    auto it = by_id.find(*rec.chosen);
    if (it == by_id.end()) {
      throw ConfigError("trace names unknown distinguisher '" + *rec.chosen + "'");
    }
    p = p.WithTerm({rec.coefficient, it->second, nullptr});
  }
  return p;
}

nlohmann::json TraceToJson(const std::vector<TraceRecord>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const TraceRecord& r : trace) {
    nlohmann::json j;
    j["t"] = r.t;
    j["chosen"] = r.chosen ? nlohmann::json(*r.chosen) : nlohmann::json(nullptr);
    j["signed_advantage"] = r.signed_advantage;
    j["coefficient"] = r.coefficient;
    j["potential"] = r.potential ? nlohmann::json(*r.potential) : nlohmann::json(nullptr);
    j["size_bound"] = r.size_bound.str();
    j["radius"] = r.radius;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace oilab
