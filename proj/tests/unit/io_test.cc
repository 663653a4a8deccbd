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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "oilab/error.h"
#include "oilab/io.h"

namespace oilab {
namespace {

const std::string kData = OILAB_DATA_DIR;

TEST(CanonicalDump, SortedAndStable) {
  const auto j = nlohmann::json::parse(R"({"b": [1, 2.5, -0.0], "a": {"z": null, "y": true}})");
  EXPECT_EQ(CanonicalDump(j),
            "{\n  \"a\": {\n    \"y\": true,\n    \"z\": null\n  },\n"
            "  \"b\": [1, 2.5, 0]\n}\n");
  EXPECT_EQ(CanonicalDump(nlohmann::json(0.1 + 0.2)), "0.3\n");
  EXPECT_EQ(CanonicalDump(nlohmann::json::parse(CanonicalDump(j))), CanonicalDump(j));
}

TEST(NatureJson, RoundTripsAllModes) {
  Rng rng(71);
  const Nature explicit_nature = testing::RandomNature(4, rng, 0.3);
  const Nature uniform(PopulationDistribution::Uniform(3),
                       Predictor::Table(3, testing::RandomTable(3, rng)));
  const Nature product(PopulationDistribution::ProductBernoulli({0.2, 0.9}),
                       Predictor::Constant(2, 0.25));
  for (const Nature* n : {&explicit_nature, &uniform, &product}) {
    const auto j = NatureToJson(*n);
    const Nature back = NatureFromJson(nlohmann::json::parse(CanonicalDump(j)));
    EXPECT_EQ(CanonicalDump(NatureToJson(back)), CanonicalDump(j));
    EXPECT_EQ(back.dimension(), n->dimension());
    // Reports carry 12 significant digits; truth off the support is not kept.
    if (!n->population().is_explicit()) continue;
    const auto& a = back.truth_on_atoms();
    const auto& b = n->truth_on_atoms();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-11);
  }
}

TEST(NatureJson, RejectsMalformedInput) {
  EXPECT_THROW(NatureFromJson(nlohmann::json::parse(R"({"dimension": 2})")), ConfigError);
  EXPECT_THROW(NatureFromJson(nlohmann::json::parse(
                   R"({"dimension": 2, "mode": "uniform", "truth": 1.5})")),
               ConfigError);
  EXPECT_THROW(NatureFromJson(nlohmann::json::parse(
                   R"({"dimension": 2, "mode": "explicit", "masses": {"00": 0.5}, "truth": 0.5})")),
               ConfigError);
  EXPECT_THROW(ReadJsonFile(kData + "/samples.csv"), ConfigError);
  EXPECT_THROW(ReadJsonFile(kData + "/missing.json"), IoError);
}

TEST(Ingest, SmallExample) {
  std::istringstream in("b0,b1,outcome\n0,0,1\n\n0,0,0\n1,1,1\n");
  const IngestResult r = IngestCsv(in);
  EXPECT_EQ(r.rows, 3u);
  EXPECT_EQ(r.dimension, 2u);
  EXPECT_EQ(r.distinct, 2u);
  EXPECT_DOUBLE_EQ(r.nature.population().MassOf(Individual::FromIndex(2, 0)), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.nature.truth().Evaluate(Individual::FromIndex(2, 0)), 0.5);
  EXPECT_DOUBLE_EQ(r.nature.truth().Evaluate(Individual::FromIndex(2, 3)), 1.0);
  EXPECT_DOUBLE_EQ(r.nature.truth().Evaluate(Individual::FromIndex(2, 1)), 0.5);
}

TEST(Ingest, ReportsBadLines) {
  try {
    IngestSamples(kData + "/bad.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream ragged("0,1\n0,1,1\n");
  EXPECT_THROW(IngestCsv(ragged), ParseError);
  EXPECT_THROW(IngestSamples(kData + "/none.csv"), IoError);
}

TEST(Ingest, LargeSampleRecoversTruth) {
  Rng rng(72);
  const std::size_t d = 3;
  const Nature n(PopulationDistribution::Uniform(d),
                 Predictor::Table(d, testing::RandomTable(d, rng)));
  std::ostringstream csv;
  for (int k = 0; k < 10000; ++k) {
    const LabeledDraw s = n.SamplePair(rng);
    for (std::size_t b = 0; b < d; ++b) csv << ((s.individual.index() >> b) & 1) << ",";
    csv << s.outcome << "\n";
  }
  std::istringstream in(csv.str());
  const IngestResult r = IngestCsv(in);
  EXPECT_EQ(r.rows, 10000u);
  for (std::uint64_t k = 0; k < 8; ++k) {
    const Individual i = Individual::FromIndex(d, k);
    const double mass = r.nature.population().MassOf(i);
    const double truth = r.nature.truth().Evaluate(i);
    const double gen = n.truth().Evaluate(i);
    // Joint (individual, outcome) cells.
    EXPECT_NEAR(mass * truth, 0.125 * gen, 0.02);
    EXPECT_NEAR(mass * (1 - truth), 0.125 * (1 - gen), 0.02);
    EXPECT_NEAR(truth, gen, 0.05);
  }
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(OILAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, ExitCodes) {
  const std::string out = ::testing::TempDir() + "oilab_cli_test.json";
  EXPECT_EQ(RunCli("construct --nature " + kData + "/k4_nature.json --family " + kData +
                   "/k4_family.json --epsilon 0.05 --out " + out),
            0);
  const auto predictor = nlohmann::json::parse(Slurp(out));
  EXPECT_EQ(predictor["dimension"], 6);
  EXPECT_EQ(RunCli("audit --nature " + kData + "/k4_nature.json --predictor " + kData +
                   "/k4_predictor.json --subpops " + kData + "/k4_subpops.json --alpha 0.05 "
                   "--grid 10 --out " + out),
            1);
  EXPECT_EQ(RunCli("pi-check --nature " + kData + "/pi_nature.json --predictor " + kData +
                   "/pi_predictor.json --tau 0.05 --epsilon 0.1 --out " + out),
            0);
  EXPECT_EQ(RunCli("pi-check --nature " + kData + "/k4_nature.json --predictor " + kData +
                   "/k4_predictor.json --tau 0.05 --epsilon 0.1 --out " + out),
            2);
  EXPECT_EQ(RunCli("ingest --csv " + kData + "/bad.csv --out " + out), 2);
  EXPECT_EQ(RunCli("ingest --csv " + kData + "/samples.csv --out " + out), 0);
  EXPECT_EQ(RunCli("construct --nature " + kData + "/missing.json --family " + kData +
                   "/k4_family.json --out " + out),
            2);
  EXPECT_EQ(RunCli("no-such-command"), 2);
  EXPECT_EQ(RunCli("construct --nature " + kData + "/k4_nature.json --family " + kData +
                   "/k4_family.json --epsilon 0.001 --max-iterations 1 --out " + out),
            1);
}

}  // namespace
}  // namespace oilab
