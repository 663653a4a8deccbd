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

#ifndef OILAB_IO_H_
#define OILAB_IO_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oilab/nature.h"

namespace oilab {

// Sorted keys, two-space indent, floats with 12 significant digits, -0 as 0.
// Arrays of scalars stay on one line.
std::string CanonicalDump(const nlohmann::json& j);

// Whole-file helpers; "-" means stdout. Failures surface the OS message.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);
nlohmann::json ReadJsonFile(const std::string& path);

// Writes report with report["config"] = config.
void EmitReport(const std::string& path, nlohmann::json report,
                const nlohmann::json& config);

// {dimension, mode, masses?, bit_probs?, truth}
//   mode "explicit": masses is {"0101": mass, ...}
//   mode "uniform":  no masses
//   mode "product":  bit_probs lists Pr[bit k = 1]
// truth is a number, a full table of 2^d values, {"values": {...}, "default"}
// or a serialized predictor.
nlohmann::json NatureToJson(const Nature& nature);
Nature NatureFromJson(const nlohmann::json& j);

struct IngestResult {
  Nature nature;
  std::size_t rows = 0;
  std::size_t dimension = 0;
  std::size_t distinct = 0;
};

// CSV with d bit columns then an outcome column; an optional header row
// whose cells are all non-numeric; blank lines ignored. Masses are empirical
// frequencies and p* the empirical outcome mean; unseen individuals get 1/2.
IngestResult IngestCsv(std::istream& in);
IngestResult IngestSamples(const std::string& path);

}  // namespace oilab

#endif  // OILAB_IO_H_
