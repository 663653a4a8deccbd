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

#include "oilab/distinguisher.h"

#include <optional>

#include "oilab/error.h"

namespace oilab {

Distinguisher::Distinguisher(std::string id, AccessLevel level,
                             std::uint64_t budget, std::uint64_t cost)
    : id_(std::move(id)), level_(level), budget_(budget), cost_(cost) {
  if (cost_ == 0) throw ConfigError("distinguisher '" + id_ + "' has cost 0");
}

AccessContext RestrictContext(const AccessContext& ctx, AccessLevel level) {
  AccessContext out;
  if (level >= AccessLevel::kSampleAccess) out.prediction = ctx.prediction;
  if (level == AccessLevel::kOracleAccess) out.oracle = ctx.oracle;
  if (level == AccessLevel::kCodeAccess) out.description = ctx.description;
  return out;
}

namespace {

// Holds the per-invocation query counter alive for the duration of a call.
struct ScopedContext {
  ScopedContext(const AccessContext& ctx, AccessLevel level,
                std::uint64_t budget)
      : view(RestrictContext(ctx, level)) {
    if (view.oracle != nullptr) {
      counter.emplace(*view.oracle, budget);
      view.oracle = &*counter;
    }
  }
  AccessContext view;
  std::optional<BudgetedOracle> counter;
};

}  // namespace

double Distinguisher::Acceptance(const Individual& i, int outcome,
                                 const AccessContext& ctx) const {
  ScopedContext scoped(ctx, level_, budget_);
  return AcceptanceImpl(i, outcome, scoped.view);
}

int Distinguisher::Decide(const Individual& i, int outcome,
                          const AccessContext& ctx, Rng& rng) const {
  ScopedContext scoped(ctx, level_, budget_);
  return DecideImpl(i, outcome, scoped.view, rng) != 0 ? 1 : 0;
}

double Distinguisher::Delta(const Individual& i,
                            const AccessContext& ctx) const {
  return Acceptance(i, 1, ctx) - Acceptance(i, 0, ctx);
}

double Distinguisher::AcceptanceImpl(const Individual& i, int outcome,
                                     const AccessContext& ctx) const {
  if (randomness() != Randomness::kDeterministic) {
    throw ConfigError("distinguisher '" + id_ +
                      "' has no exact acceptance probability");
  }
  // Deterministic rules never draw from it; seeding an engine per call is
  // the dominant cost of exact audits.
  thread_local Rng unused(0);
  return DecideImpl(i, outcome, ctx, unused) != 0 ? 1.0 : 0.0;
}

nlohmann::json Distinguisher::RuleJson() const {
  throw ConfigError("distinguisher '" + id_ + "' is not serializable");
}

nlohmann::json Distinguisher::ToJson() const {
  nlohmann::json j;
  j["id"] = id_;
  j["level"] = std::string(ToString(level_));
  if (level_ == AccessLevel::kOracleAccess) j["budget"] = budget_;
  j["cost"] = cost_;
  j["rule"] = RuleJson();
  return j;
}

double Distinguisher::RequirePrediction(const AccessContext& ctx) {
  if (!ctx.prediction) {
    throw DomainError("rule needs a prediction value but none was supplied");
  }
  return *ctx.prediction;
}

}  // namespace oilab
