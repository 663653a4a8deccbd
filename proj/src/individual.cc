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

#include "oilab/individual.h"

#include <bit>

#include "oilab/error.h"

namespace oilab {

Individual::Individual(std::size_t dimension)
    : dimension_(static_cast<std::uint32_t>(dimension)) {
  if (dimension > 64) high_.assign((dimension - 1) / 64, 0);
}

Individual Individual::FromIndex(std::size_t dimension, std::uint64_t index) {
  Individual out(dimension);
  if (dimension < 64 && (index >> dimension) != 0) {
    throw DomainError("index " + std::to_string(index) +
                      " does not fit in dimension " +
                      std::to_string(dimension));
  }
  out.low_ = index;
  return out;
}

Individual Individual::FromString(std::string_view bits) {
  Individual out(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != '0' && bits[k] != '1') {
      throw DomainError("bit string contains '" + std::string(1, bits[k]) +
                        "'");
    }
    out.set_bit(k, bits[k] == '1');
  }
  return out;
}

bool Individual::bit(std::size_t k) const {
  if (k >= dimension_) throw DomainError("bit index out of range");
  if (k < 64) return (low_ >> k) & 1U;
  return (high_[(k - 64) / 64] >> ((k - 64) % 64)) & 1U;
}

void Individual::set_bit(std::size_t k, bool value) {
  if (k >= dimension_) throw DomainError("bit index out of range");
  std::uint64_t& word = k < 64 ? low_ : high_[(k - 64) / 64];
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  word = value ? (word | mask) : (word & ~mask);
}

std::uint64_t Individual::index() const {
  if (dimension_ > 64) {
    throw DomainError("index() needs dimension <= 64, got " +
                      std::to_string(dimension_));
  }
  return low_;
}

std::uint64_t Individual::field(std::size_t offset, std::size_t width) const {
  if (offset + width <= 64) {
    if (width == 64) return low_;
    return (low_ >> offset) & ((std::uint64_t{1} << width) - 1);
  }
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < width; ++k) {
    out |= static_cast<std::uint64_t>(bit(offset + k)) << k;
  }
  return out;
}

void Individual::set_field(std::size_t offset, std::size_t width,
                           std::uint64_t value) {
  for (std::size_t k = 0; k < width; ++k) set_bit(offset + k, (value >> k) & 1U);
}

std::size_t Individual::popcount() const {
  std::size_t total = std::popcount(low_);
  for (std::uint64_t w : high_) total += std::popcount(w);
  return total;
}

Individual Individual::operator^(const Individual& other) const {
  if (other.dimension_ != dimension_) {
    throw DomainError("xor of individuals with different dimensions");
  }
  Individual out = *this;
  out.low_ ^= other.low_;
  for (std::size_t w = 0; w < high_.size(); ++w) out.high_[w] ^= other.high_[w];
  return out;
}

std::string Individual::ToString() const {
  std::string out(dimension_, '0');
  for (std::size_t k = 0; k < dimension_; ++k) {
    if (bit(k)) out[k] = '1';
  }
  return out;
}

std::size_t Individual::Hash() const {
  // splitmix64 finalizer over the words
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(low_ ^ dimension_);
  for (std::uint64_t w : high_) h = mix(h ^ w);
  return static_cast<std::size_t>(h);
}

}  // namespace oilab
