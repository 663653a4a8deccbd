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

#ifndef OILAB_SIZE_ACCOUNT_H_
#define OILAB_SIZE_ACCOUNT_H_

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "oilab/access.h"

namespace oilab {

using SizeBound = boost::multiprecision::cpp_int;

// Next analytic size bound after one update with a distinguisher of declared
// cost s and query budget q:
//   no/sample access  s' = 3s + prev
//   oracle access     s' = 3s + (2q + 1) prev
//   code access       s' = 3s + 2 n(prev) + prev, n(x) = ceil(x log2 x)
SizeBound NextSizeBound(AccessLevel level, std::uint64_t s, std::uint64_t q,
                        const SizeBound& prev);

// 3s((2q+1)^(T+1) - 1) / 2q, or 3s(T+1) when q = 0. Equals the oracle
// recurrence after T updates started from 3s.
SizeBound OracleClosedForm(std::uint64_t s, std::uint64_t q, std::uint64_t t);

// ceil(s log2 s); 0 for s <= 1.
SizeBound DescriptionLength(const SizeBound& s);

// Analytic circuit-size bookkeeping carried by a predictor. The declared
// costs are metadata supplied by the distinguishers, not measurements.
class SizeAccount {
 public:
  SizeAccount() = default;
  explicit SizeAccount(SizeBound initial) : initial_(initial), bound_(initial) {}

  std::uint64_t iterations() const { return iterations_; }
  std::uint64_t max_cost() const { return max_cost_; }
  std::uint64_t max_queries() const { return max_queries_; }
  const SizeBound& initial() const { return initial_; }
  const SizeBound& bound() const { return bound_; }
  // n(s) of the most recent code-access description, 0 if none.
  const SizeBound& description_length() const { return description_length_; }

  SizeAccount Advanced(AccessLevel level, std::uint64_t s,
                       std::uint64_t q) const;

  nlohmann::json ToJson() const;
  static SizeAccount FromJson(const nlohmann::json& j);

 private:
  std::uint64_t iterations_ = 0;
  std::uint64_t max_cost_ = 0;
  std::uint64_t max_queries_ = 0;
  SizeBound initial_ = 1;
  SizeBound bound_ = 1;
  SizeBound description_length_ = 0;
};

}  // namespace oilab

#endif  // OILAB_SIZE_ACCOUNT_H_
