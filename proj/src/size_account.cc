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

#include "oilab/size_account.h"

#include <cmath>
#include <string>

#include "oilab/error.h"

namespace oilab {

SizeBound DescriptionLength(const SizeBound& s) {
  if (s <= 1) return 0;
  const std::size_t msb = boost::multiprecision::msb(s);
  if (msb < 52) {
    const double x = s.convert_to<double>();
    return SizeBound(static_cast<std::uint64_t>(std::ceil(x * std::log2(x))));
  }
  // Beyond double precision use the upper bound s * (msb + 1).
  return s * (msb + 1);
}

SizeBound NextSizeBound(AccessLevel level, std::uint64_t s, std::uint64_t q,
                        const SizeBound& prev) {
  const SizeBound base = SizeBound(3) * s;
  switch (level) {
    case AccessLevel::kNoAccess:
    case AccessLevel::kSampleAccess:
      return base + prev;
    case AccessLevel::kOracleAccess:
      return base + (SizeBound(2) * q + 1) * prev;
    case AccessLevel::kCodeAccess:
      return base + 2 * DescriptionLength(prev) + prev;
  }
  return base + prev;
}

SizeBound OracleClosedForm(std::uint64_t s, std::uint64_t q, std::uint64_t t) {
  if (q == 0) return SizeBound(3) * s * (t + 1);
  SizeBound ratio = SizeBound(2) * q + 1;
  SizeBound power = boost::multiprecision::pow(ratio, static_cast<unsigned>(t + 1));
  return SizeBound(3) * s * (power - 1) / (SizeBound(2) * q);
}

SizeAccount SizeAccount::Advanced(AccessLevel level, std::uint64_t s,
                                  std::uint64_t q) const {
  SizeAccount next = *this;
  next.iterations_ += 1;
  next.max_cost_ = std::max(max_cost_, s);
  if (level == AccessLevel::kOracleAccess) {
    next.max_queries_ = std::max(max_queries_, q);
  }
  if (level == AccessLevel::kCodeAccess) {
    next.description_length_ = DescriptionLength(bound_);
  }
  next.bound_ = NextSizeBound(level, s, q, bound_);
  return next;
}

nlohmann::json SizeAccount::ToJson() const {
  nlohmann::json j;
  j["t"] = iterations_;
  j["s"] = max_cost_;
  j["q"] = max_queries_;
  j["w"] = 1;
  j["initial"] = initial_.str();
  j["bound"] = bound_.str();
  j["description_length"] = description_length_.str();
  return j;
}

SizeAccount SizeAccount::FromJson(const nlohmann::json& j) {
  try {
    SizeAccount a;
    a.iterations_ = j.at("t").get<std::uint64_t>();
    a.max_cost_ = j.at("s").get<std::uint64_t>();
    a.max_queries_ = j.at("q").get<std::uint64_t>();
    a.initial_ = SizeBound(j.at("initial").get<std::string>());
    a.bound_ = SizeBound(j.at("bound").get<std::string>());
    a.description_length_ =
        SizeBound(j.value("description_length", std::string("0")));
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed size_account: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("malformed size_account: ") + e.what());
  }
}

}  // namespace oilab
