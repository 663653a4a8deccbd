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

#ifndef OILAB_MEMBERSHIP_H_
#define OILAB_MEMBERSHIP_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oilab/individual.h"
#include "oilab/population.h"

namespace oilab {

// Boolean rule over individuals. Shares the JSON catalog with distinguisher
// rules:
//   {"type": "all"} | {"type": "none"}
//   {"type": "members", "members": ["0110", ...]}
//   {"type": "conjunction", "literals": [[bit, value], ...]}
//   {"type": "parity", "bits": [...], "value": 0|1}
class MembershipRule {
 public:
  virtual ~MembershipRule() = default;
  virtual bool Contains(const Individual& i) const = 0;
  virtual nlohmann::json ToJson() const = 0;
};

using MembershipPtr = std::shared_ptr<const MembershipRule>;

MembershipPtr AllMembers();
MembershipPtr NoMembers();
MembershipPtr MemberList(std::size_t dimension, std::vector<std::uint64_t> indices);
MembershipPtr Conjunction(std::vector<std::pair<std::size_t, bool>> literals);
MembershipPtr Parity(std::vector<std::size_t> bits, bool value);
// Serializes by enumerating members; requires dimension <= 24 at ToJson time.
MembershipPtr Predicate(std::size_t dimension,
                        std::function<bool(const Individual&)> fn);

MembershipPtr MembershipFromJson(const nlohmann::json& j, std::size_t dimension);
// Explicit member list of rule over the whole universe (dimension <= 24).
std::vector<std::uint64_t> Enumerate(const MembershipRule& rule,
                                     std::size_t dimension);

struct Subpopulation {
  std::string id;
  MembershipPtr rule;
};

// Pr_{D_X}[i in S]; explicit populations only.
double Mass(const MembershipRule& rule, const PopulationDistribution& pop);

std::vector<Subpopulation> SubpopulationsFromJson(const nlohmann::json& j,
                                                  std::size_t dimension);
nlohmann::json SubpopulationsToJson(const std::vector<Subpopulation>& c);

}  // namespace oilab

#endif  // OILAB_MEMBERSHIP_H_
