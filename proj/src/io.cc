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

#include "oilab/io.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "oilab/catalog.h"
#include "oilab/error.h"

namespace oilab {

namespace {

std::string FormatDouble(double v) {
  if (!std::isfinite(v)) throw Error("cannot serialize a non-finite number");
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (s == "-0") return "0";
  return s;
}

bool IsScalar(const nlohmann::json& j) {
  return !j.is_array() && !j.is_object();
}

void Dump(const nlohmann::json& j, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::number_float:
      out += FormatDouble(j.get<double>());
      return;
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        Dump(it.value(), depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && IsScalar(e);
      if (flat) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k > 0) out += ", ";
          Dump(j[k], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k > 0) out += ",\n";
        out += pad;
        Dump(j[k], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string CanonicalDump(const nlohmann::json& j) {
  std::string out;
  Dump(j, 0, out);
  out += "\n";
  return out;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "': " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

nlohmann::json ReadJsonFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void EmitReport(const std::string& path, nlohmann::json report,
                const nlohmann::json& config) {
  report["config"] = config;
  WriteTextFile(path, CanonicalDump(report));
}

nlohmann::json NatureToJson(const Nature& nature) {
  const PopulationDistribution& pop = nature.population();
  nlohmann::json j;
  j["dimension"] = pop.dimension();
  if (pop.is_explicit()) {
    j["mode"] = "explicit";
    nlohmann::json masses = nlohmann::json::object();
    nlohmann::json values = nlohmann::json::object();
    const auto& atoms = pop.atoms();
    const auto& truth = nature.truth_on_atoms();
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::string key =
          Individual::FromIndex(pop.dimension(), atoms[k].index).ToString();
      masses[key] = atoms[k].mass;
      values[key] = truth[k];
    }
    j["masses"] = std::move(masses);
    j["truth"] = {{"values", std::move(values)}, {"default", 0.5}};
    return j;
  }
  if (pop.bit_probs().empty()) {
    throw ConfigError("population '" + pop.name() + "' cannot be serialized");
  }
  j["mode"] = "product";
  j["bit_probs"] = pop.bit_probs();
  j["truth"] = nature.truth().ToJson();
  return j;
}

namespace {

Predictor TruthFromJson(const nlohmann::json& t, std::size_t d) {
  if (t.is_number()) return Predictor::Constant(d, t.get<double>());
  if (t.is_array()) return Predictor::Table(d, t.get<std::vector<double>>());
  if (t.is_object() && t.contains("values")) {
    if (d > kMaxExplicitDimension) {
      throw ConfigError("sparse truth values need dimension <= 24");
    }
    std::vector<double> table(std::size_t{1} << d, t.value("default", 0.5));
    for (auto it = t.at("values").begin(); it != t.at("values").end(); ++it) {
      const Individual i = Individual::FromString(it.key());
      if (i.dimension() != d) {
        throw ConfigError("truth key '" + it.key() + "' has the wrong length");
      }
      table[i.index()] = it.value().get<double>();
    }
    return Predictor::Table(d, std::move(table));
  }
  if (t.is_object() && t.contains("base")) {
    Predictor p = PredictorFromJson(t);
    if (p.dimension() != d) throw ConfigError("truth dimension mismatch");
    return p;
  }
  throw ConfigError("unrecognized truth encoding");
}

}  // namespace

Nature NatureFromJson(const nlohmann::json& j) {
  try {
    const std::size_t d = j.at("dimension").get<std::size_t>();
    const std::string mode = j.value("mode", std::string("explicit"));
    PopulationDistribution pop = PopulationDistribution::Uniform(0);
    if (mode == "explicit") {
      std::vector<Atom> atoms;
      for (auto it = j.at("masses").begin(); it != j.at("masses").end(); ++it) {
        const Individual i = Individual::FromString(it.key());
        if (i.dimension() != d) {
          throw ConfigError("mass key '" + it.key() + "' has the wrong length");
        }
        atoms.push_back({i.index(), it.value().get<double>()});
      }
      pop = PopulationDistribution::Explicit(d, std::move(atoms));
    } else if (mode == "uniform") {
      pop = PopulationDistribution::Uniform(d);
    } else if (mode == "product") {
      const auto probs = j.at("bit_probs").get<std::vector<double>>();
      if (probs.size() != d) throw ConfigError("bit_probs length differs from dimension");
      pop = PopulationDistribution::ProductBernoulli(probs);
    } else {
      throw ConfigError("unknown nature mode '" + mode + "'");
    }
    return Nature(std::move(pop), TruthFromJson(j.at("truth"), d));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed nature: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("malformed nature: ") + e.what());
  }
}

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool LooksNumeric(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end != nullptr && *end == '\0';
}

}  // namespace

IngestResult IngestCsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::size_t rows = 0;
  bool first = true;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> counts;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    if (first) {
      first = false;
      bool header = true;
      for (const auto& c : cells) header = header && !c.empty() && !LooksNumeric(c);
      if (header) {
        columns = cells.size();
        if (columns < 2) throw ParseError(line_no, "need at least one bit column and an outcome");
        continue;
      }
    }
    if (columns == 0) {
      columns = cells.size();
      if (columns < 2) throw ParseError(line_no, "need at least one bit column and an outcome");
    }
    if (cells.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) +
                                    " cells, found " + std::to_string(cells.size()));
    }
    if (columns - 1 > kMaxExplicitDimension) {
      throw ParseError(line_no, "more than 24 bit columns");
    }
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < columns; ++k) {
      if (cells[k] != "0" && cells[k] != "1") {
        throw ParseError(line_no, "cell " + std::to_string(k + 1) + " is '" +
                                      cells[k] + "', expected 0 or 1");
      }
      if (k + 1 < columns && cells[k] == "1") index |= std::uint64_t{1} << k;
    }
    auto& [n, ones] = counts[index];
    ++n;
    if (cells.back() == "1") ++ones;
    ++rows;
  }
  if (rows == 0) throw ParseError(line_no, "no data rows");
  const std::size_t d = columns - 1;
  std::vector<Atom> atoms;
  std::vector<double> truth(std::size_t{1} << d, 0.5);
  for (const auto& [index, c] : counts) {
    atoms.push_back({index, static_cast<double>(c.first) / static_cast<double>(rows)});
    truth[index] = static_cast<double>(c.second) / static_cast<double>(c.first);
  }
  IngestResult r{Nature(PopulationDistribution::Explicit(d, std::move(atoms)),
                        Predictor::Table(d, std::move(truth))),
                 rows, d, counts.size()};
  return r;
}

IngestResult IngestSamples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  return IngestCsv(in);
}

}  // namespace oilab
