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

#ifndef OILAB_GRAPH_H_
#define OILAB_GRAPH_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "oilab/individual.h"
#include "oilab/rng.h"

namespace oilab {

// Simple undirected graph on up to 64 vertices as adjacency bitmasks.
class Graph {
 public:
  explicit Graph(std::size_t n);
  static Graph Complete(std::size_t n);
  // Each edge present independently with probability q.
  static Graph Random(std::size_t n, double q, Rng& rng);
  // Edge (u, v), u < v, is bit EdgeIndex(n, u, v) of the encoding.
  static Graph Decode(std::size_t n, const Individual& bits);
  static std::size_t EdgeBits(std::size_t n) { return n * (n - 1) / 2; }
  static std::size_t EdgeIndex(std::size_t n, std::size_t u, std::size_t v);

  std::size_t size() const { return n_; }
  bool edge(std::size_t u, std::size_t v) const { return (adj_[u] >> v) & 1; }
  void set_edge(std::size_t u, std::size_t v, bool present);
  std::uint64_t neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t edge_count() const;
  Individual Encode() const;

  // Same vertex set, keeping only edges between neighbors of v.
  Graph NeighborhoodGraph(std::size_t v) const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> adj_;
};

// Number of k-cliques; 0 when k > n. Bitset-intersection recursion.
std::uint64_t CliqueCount(const Graph& g, std::size_t k);
// Same count by checking every k-subset.
std::uint64_t CliqueCountNaive(const Graph& g, std::size_t k);

// Downward step k * f_k(G) = sum_v f_{k-1}(G^(v)) for k >= 3, using exactly
// n oracle calls. OracleInconsistent when the sum is not divisible by k.
std::uint64_t CliqueDownward(const Graph& g, std::size_t k,
                             const std::function<std::uint64_t(const Graph&)>& oracle);

}  // namespace oilab

#endif  // OILAB_GRAPH_H_
