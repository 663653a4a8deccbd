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

#ifndef OILAB_INDIVIDUAL_H_
#define OILAB_INDIVIDUAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace oilab {

// Exhaustive (explicit) operations refuse to run above this dimension.
inline constexpr std::size_t kMaxExplicitDimension = 24;

// A fixed-length bit vector. Bit k of the vector is bit k of index() for
// dimensions up to 64; longer vectors spill into heap words.
class Individual {
 public:
  Individual() = default;
  explicit Individual(std::size_t dimension);

  static Individual FromIndex(std::size_t dimension, std::uint64_t index);
  // Parses "0110": character k is bit k.
  static Individual FromString(std::string_view bits);

  std::size_t dimension() const { return dimension_; }
  bool bit(std::size_t k) const;
  void set_bit(std::size_t k, bool value);

  // Requires dimension() <= 64.
  std::uint64_t index() const;

  // Bits [offset, offset + width) packed into an integer (width <= 64).
  std::uint64_t field(std::size_t offset, std::size_t width) const;
  void set_field(std::size_t offset, std::size_t width, std::uint64_t value);

  std::size_t popcount() const;
  Individual operator^(const Individual& other) const;
  bool operator==(const Individual& other) const = default;

  std::string ToString() const;
  std::size_t Hash() const;

 private:
  std::uint32_t dimension_ = 0;
  std::uint64_t low_ = 0;
  std::vector<std::uint64_t> high_;
};

}  // namespace oilab

template <>
struct std::hash<oilab::Individual> {
  std::size_t operator()(const oilab::Individual& i) const noexcept {
    return i.Hash();
  }
};

#endif  // OILAB_INDIVIDUAL_H_
