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

#include "oilab/membership.h"

#include <algorithm>

#include "oilab/error.h"

namespace oilab {

namespace {

class ConstantRule : public MembershipRule {
 public:
  explicit ConstantRule(bool value) : value_(value) {}
  bool Contains(const Individual&) const override { return value_; }
  nlohmann::json ToJson() const override {
    return {{"type", value_ ? "all" : "none"}};
  }

 private:
  bool value_;
};

class ListRule : public MembershipRule {
 public:
  ListRule(std::size_t dimension, std::vector<std::uint64_t> indices)
      : dimension_(dimension), indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  }
  bool Contains(const Individual& i) const override {
    if (i.dimension() != dimension_) return false;
    return std::binary_search(indices_.begin(), indices_.end(), i.index());
  }
  nlohmann::json ToJson() const override {
    nlohmann::json members = nlohmann::json::array();
    for (std::uint64_t k : indices_) {
      members.push_back(Individual::FromIndex(dimension_, k).ToString());
    }
    return {{"type", "members"}, {"members", std::move(members)}};
  }

 private:
  std::size_t dimension_;
  std::vector<std::uint64_t> indices_;
};

class ConjunctionRule : public MembershipRule {
 public:
  explicit ConjunctionRule(std::vector<std::pair<std::size_t, bool>> literals)
      : literals_(std::move(literals)) {}
  bool Contains(const Individual& i) const override {
    for (const auto& [bit, value] : literals_) {
      if (bit >= i.dimension() || i.bit(bit) != value) return false;
    }
    return true;
  }
  nlohmann::json ToJson() const override {
    nlohmann::json lits = nlohmann::json::array();
    for (const auto& [bit, value] : literals_) lits.push_back({bit, value ? 1 : 0});
    return {{"type", "conjunction"}, {"literals", std::move(lits)}};
  }

 private:
  std::vector<std::pair<std::size_t, bool>> literals_;
};

class ParityRule : public MembershipRule {
 public:
  ParityRule(std::vector<std::size_t> bits, bool value)
      : bits_(std::move(bits)), value_(value) {}
  bool Contains(const Individual& i) const override {
    bool x = false;
    for (std::size_t b : bits_) {
      if (b >= i.dimension()) return false;
      x ^= i.bit(b);
    }
    return x == value_;
  }
  nlohmann::json ToJson() const override {
    return {{"type", "parity"}, {"bits", bits_}, {"value", value_ ? 1 : 0}};
  }

 private:
  std::vector<std::size_t> bits_;
  bool value_;
};

class PredicateRule : public MembershipRule {
 public:
  PredicateRule(std::size_t dimension, std::function<bool(const Individual&)> fn)
      : dimension_(dimension), fn_(std::move(fn)) {}
  bool Contains(const Individual& i) const override { return fn_(i); }
  nlohmann::json ToJson() const override {
    return ListRule(dimension_, Enumerate(*this, dimension_)).ToJson();
  }

 private:
  std::size_t dimension_;
  std::function<bool(const Individual&)> fn_;
};

}  // namespace

MembershipPtr AllMembers() { return std::make_shared<ConstantRule>(true); }
MembershipPtr NoMembers() { return std::make_shared<ConstantRule>(false); }

MembershipPtr MemberList(std::size_t dimension,
                         std::vector<std::uint64_t> indices) {
  return std::make_shared<ListRule>(dimension, std::move(indices));
}

MembershipPtr Conjunction(std::vector<std::pair<std::size_t, bool>> literals) {
  return std::make_shared<ConjunctionRule>(std::move(literals));
}

MembershipPtr Parity(std::vector<std::size_t> bits, bool value) {
  return std::make_shared<ParityRule>(std::move(bits), value);
}

MembershipPtr Predicate(std::size_t dimension,
                        std::function<bool(const Individual&)> fn) {
  return std::make_shared<PredicateRule>(dimension, std::move(fn));
}

std::vector<std::uint64_t> Enumerate(const MembershipRule& rule,
                                     std::size_t dimension) {
  if (dimension > kMaxExplicitDimension) {
    throw ConfigError("membership enumeration requires dimension <= 24");
  }
  std::vector<std::uint64_t> out;
  const std::uint64_t size = std::uint64_t{1} << dimension;
  for (std::uint64_t k = 0; k < size; ++k) {
    if (rule.Contains(Individual::FromIndex(dimension, k))) out.push_back(k);
  }
  return out;
}

MembershipPtr MembershipFromJson(const nlohmann::json& j, std::size_t dimension) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "all") return AllMembers();
    if (type == "none") return NoMembers();
    if (type == "members") {
      std::vector<std::uint64_t> indices;
      for (const auto& m : j.at("members")) {
        const Individual i = Individual::FromString(m.get<std::string>());
        if (i.dimension() != dimension) {
          throw ConfigError("member '" + m.get<std::string>() +
                            "' has wrong dimension");
        }
        indices.push_back(i.index());
      }
      return MemberList(dimension, std::move(indices));
    }
    if (type == "conjunction") {
      std::vector<std::pair<std::size_t, bool>> lits;
      for (const auto& l : j.at("literals")) {
        const std::size_t bit = l.at(0).get<std::size_t>();
        if (bit >= dimension) throw ConfigError("literal bit out of range");
        lits.emplace_back(bit, l.at(1).get<int>() != 0);
      }
      return Conjunction(std::move(lits));
    }
    if (type == "parity") {
      auto bits = j.at("bits").get<std::vector<std::size_t>>();
      for (std::size_t b : bits) {
        if (b >= dimension) throw ConfigError("parity bit out of range");
      }
      return Parity(std::move(bits), j.value("value", 1) != 0);
    }
    throw ConfigError("unknown membership type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed membership rule: ") + e.what());
  }
}

double Mass(const MembershipRule& rule, const PopulationDistribution& pop) {
  KahanSum sum;
  for (const Atom& a : pop.atoms()) {
    if (rule.Contains(Individual::FromIndex(pop.dimension(), a.index))) {
      sum.Add(a.mass);
    }
  }
  return sum.value();
}

std::vector<Subpopulation> SubpopulationsFromJson(const nlohmann::json& j,
                                                  std::size_t dimension) {
  if (!j.is_array()) throw ConfigError("subpopulation file must be a list");
  std::vector<Subpopulation> out;
  for (const auto& entry : j) {
    try {
      out.push_back({entry.at("id").get<std::string>(),
                     MembershipFromJson(entry.at("rule"), dimension)});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed subpopulation: ") + e.what());
    }
  }
  return out;
}

nlohmann::json SubpopulationsToJson(const std::vector<Subpopulation>& c) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : c) out.push_back({{"id", s.id}, {"rule", s.rule->ToJson()}});
  return out;
}

}  // namespace oilab
