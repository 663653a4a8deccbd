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

#include "oilab/graph.h"

#include <bit>

#include "oilab/error.h"

namespace oilab {

Graph::Graph(std::size_t n) : n_(n), adj_(n, 0) {
  if (n > 64) throw DomainError("graphs are limited to 64 vertices");
}

Graph Graph::Complete(std::size_t n) {
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) g.set_edge(u, v, true);
  }
  return g;
}

Graph Graph::Random(std::size_t n, double q, Rng& rng) {
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) g.set_edge(u, v, Bernoulli(rng, q) == 1);
  }
  return g;
}

std::size_t Graph::EdgeIndex(std::size_t n, std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

Graph Graph::Decode(std::size_t n, const Individual& bits) {
  if (bits.dimension() != EdgeBits(n)) {
    throw DomainError("graph encoding has wrong length");
  }
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (bits.bit(EdgeIndex(n, u, v))) g.set_edge(u, v, true);
    }
  }
  return g;
}

void Graph::set_edge(std::size_t u, std::size_t v, bool present) {
  if (u == v || u >= n_ || v >= n_) throw DomainError("invalid edge");
  if (present) {
    adj_[u] |= std::uint64_t{1} << v;
    adj_[v] |= std::uint64_t{1} << u;
  } else {
    adj_[u] &= ~(std::uint64_t{1} << v);
    adj_[v] &= ~(std::uint64_t{1} << u);
  }
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (std::uint64_t a : adj_) twice += std::popcount(a);
  return twice / 2;
}

Individual Graph::Encode() const {
  Individual bits(EdgeBits(n_));
  for (std::size_t u = 0; u < n_; ++u) {
    for (std::size_t v = u + 1; v < n_; ++v) {
      if (edge(u, v)) bits.set_bit(EdgeIndex(n_, u, v), true);
    }
  }
  return bits;
}

Graph Graph::NeighborhoodGraph(std::size_t v) const {
  Graph h(n_);
  const std::uint64_t nv = adj_[v];
  for (std::size_t u = 0; u < n_; ++u) {
    if ((nv >> u) & 1) h.adj_[u] = adj_[u] & nv;
  }
  return h;
}

namespace {

std::uint64_t CountFrom(const Graph& g, std::uint64_t candidates, std::size_t k) {
  if (k == 0) return 1;
  if (static_cast<std::size_t>(std::popcount(candidates)) < k) return 0;
  if (k == 1) return std::popcount(candidates);
  std::uint64_t total = 0;
  while (candidates != 0) {
    const std::size_t v = std::countr_zero(candidates);
    candidates &= candidates - 1;
    // Only later vertices, so each clique is counted once.
    total += CountFrom(g, candidates & g.neighbors(v), k - 1);
  }
  return total;
}

}  // namespace

std::uint64_t CliqueCount(const Graph& g, std::size_t k) {
  if (k > g.size()) return 0;
  const std::size_t n = g.size();
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return CountFrom(g, all, k);
}

std::uint64_t CliqueCountNaive(const Graph& g, std::size_t k) {
  const std::size_t n = g.size();
  if (k > n) return 0;
  if (k == 0) return 1;
  std::vector<std::size_t> pick(k);
  for (std::size_t j = 0; j < k; ++j) pick[j] = j;
  std::uint64_t count = 0;
  while (true) {
    bool clique = true;
    for (std::size_t a = 0; a < k && clique; ++a) {
      for (std::size_t b = a + 1; b < k && clique; ++b) {
        clique = g.edge(pick[a], pick[b]);
      }
    }
    count += clique;
    std::size_t j = k;
    while (j > 0 && pick[j - 1] == n - k + (j - 1)) --j;
    if (j == 0) break;
    ++pick[j - 1];
    for (std::size_t t = j; t < k; ++t) pick[t] = pick[t - 1] + 1;
  }
  return count;
}

std::uint64_t CliqueDownward(const Graph& g, std::size_t k,
                             const std::function<std::uint64_t(const Graph&)>& oracle) {
  if (k < 3) {
    throw ConfigError("downward clique step needs k >= 3; smaller levels count directly");
  }
  std::uint64_t sum = 0;
  for (std::size_t v = 0; v < g.size(); ++v) sum += oracle(g.NeighborhoodGraph(v));
  if (sum % k != 0) {
    throw OracleInconsistent("neighborhood counts sum to " + std::to_string(sum) +
                             ", not divisible by " + std::to_string(k));
  }
  return sum / k;
}

}  // namespace oilab
