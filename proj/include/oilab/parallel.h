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

#ifndef OILAB_PARALLEL_H_
#define OILAB_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace oilab {

// Worker count: OI_LAB_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t ThreadCount();

// Runs body(k) for k in [0, n). Work is split in contiguous blocks, so
// results written by index are independent of the thread count. The first
// exception (by index) is rethrown after all workers finish.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace oilab

#endif  // OILAB_PARALLEL_H_
