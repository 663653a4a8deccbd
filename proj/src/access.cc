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

#include "oilab/access.h"

#include "oilab/error.h"

namespace oilab {

std::string_view ToString(AccessLevel level) {
  switch (level) {
    case AccessLevel::kNoAccess:
      return "no-access";
    case AccessLevel::kSampleAccess:
      return "sample-access";
    case AccessLevel::kOracleAccess:
      return "oracle-access";
    case AccessLevel::kCodeAccess:
      return "code-access";
  }
  return "unknown";
}

AccessLevel ParseAccessLevel(std::string_view text) {
  if (text == "no-access") return AccessLevel::kNoAccess;
  if (text == "sample-access") return AccessLevel::kSampleAccess;
  if (text == "oracle-access") return AccessLevel::kOracleAccess;
  if (text == "code-access") return AccessLevel::kCodeAccess;
  throw ConfigError("unknown access level '" + std::string(text) + "'");
}

double TableOracle::Query(const Individual& i) const {
  if (i.dimension() != dimension_) {
    throw DomainError("oracle query with dimension " +
                      std::to_string(i.dimension()) + ", expected " +
                      std::to_string(dimension_));
  }
  return values_[i.index()];
}

double BudgetedOracle::Query(const Individual& i) const {
  if (++used_ > budget_) {
    throw QueryBudgetExceeded("oracle query " + std::to_string(used_) +
                              " exceeds budget " + std::to_string(budget_));
  }
  return inner_.Query(i);
}

}  // namespace oilab
