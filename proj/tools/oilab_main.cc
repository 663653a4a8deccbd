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

// oilab: construct, audit and stress outcome-indistinguishable predictors.
// Exit codes: 0 pass, 1 verdict failure, 2 config/parse/io error, 3 internal.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "oilab/advantage.h"
#include "oilab/catalog.h"
#include "oilab/construct.h"
#include "oilab/error.h"
#include "oilab/fairness.h"
#include "oilab/hardness.h"
#include "oilab/io.h"
#include "oilab/membership.h"
#include "oilab/prediction_indist.h"
#include "oilab/reports.h"

namespace {

using nlohmann::json;
using namespace oilab;

constexpr int kPass = 0;
constexpr int kVerdictFailure = 1;
constexpr int kConfigError = 2;
constexpr int kInternal = 3;

json Unwrap(const json& j, const char* key) {
  if (j.is_object() && j.contains(key)) return j.at(key);
  return j;
}

Family LoadFamily(const std::string& path, std::size_t d) {
  return FamilyFromJson(Unwrap(ReadJsonFile(path), "family"), d);
}

std::vector<Subpopulation> LoadSubpops(const std::string& path, std::size_t d) {
  return SubpopulationsFromJson(Unwrap(ReadJsonFile(path), "subpopulations"), d);
}

Predictor LoadPredictor(const std::string& path) {
  return PredictorFromJson(ReadJsonFile(path));
}

AuditMode ModeFrom(const std::string& mode, std::uint64_t samples,
                   std::uint64_t seed) {
  if (mode == "exact") return AuditMode::Exact();
  if (mode == "sampled") {
    if (samples == 0) throw ConfigError("sampled mode needs --samples > 0");
    return AuditMode::MonteCarlo(samples, seed);
  }
  throw ConfigError("unknown mode '" + mode + "'");
}

bool AllWithin(const std::vector<AdvantageEstimate>& audit, double epsilon) {
  for (const auto& e : audit) {
    if (e.magnitude() > epsilon) return false;
  }
  return true;
}

struct ConstructOpts {
  std::string nature, family, mode = "exact", selection = "max", out = "-", trace;
  double epsilon = 0.05;
  std::uint64_t seed = 0, samples = 0, max_iterations = 0;
  double precision = 0.0;
};

int RunConstruct(const ConstructOpts& o) {
  const Nature nature = NatureFromJson(ReadJsonFile(o.nature));
  const Family family = LoadFamily(o.family, nature.dimension());
  ConstructConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.seed = o.seed;
  if (o.mode == "exact") {
    cfg.exact = true;
  } else if (o.mode == "sampled") {
    cfg.exact = false;
    cfg.samples_per_iteration =
        o.samples > 0 ? o.samples : RequiredSamples(o.epsilon, family.size());
  } else {
    throw ConfigError("unknown mode '" + o.mode + "'");
  }
  if (o.selection == "max") {
    cfg.selection = SelectionRule::kMaxAbsAdvantage;
  } else if (o.selection == "first") {
    cfg.selection = SelectionRule::kFirstViolation;
  } else {
    throw ConfigError("unknown selection '" + o.selection + "'");
  }
  if (o.max_iterations > 0) cfg.max_iterations = o.max_iterations;
  if (o.precision > 0.0) cfg.precision = o.precision;

  const json config = {{"subcommand", "construct"},
                       {"nature", o.nature},
                       {"family", o.family},
                       {"epsilon", o.epsilon},
                       {"mode", o.mode},
                       {"samples", cfg.samples_per_iteration},
                       {"seed", o.seed},
                       {"selection", o.selection},
                       {"max_iterations", MaxIterations(cfg)},
                       {"grid", GridDenominator(cfg)},
                       {"out", o.out},
                       {"trace", o.trace}};
  const ConstructResult r = ConstructOi(nature, family, cfg);
  const bool pass = AllWithin(r.final_audit, o.epsilon);
  EmitReport(o.out, r.predictor.ToJson(), config);
  if (!o.trace.empty()) {
    EmitReport(o.trace,
               {{"trace", TraceToJson(r.trace)},
                {"iterations", r.trace.empty() ? 0 : r.trace.size() - 1},
                {"final_audit", AuditRowsToJson(family, r.final_audit)},
                {"pass", pass}},
               config);
  }
  return pass ? kPass : kVerdictFailure;
}

struct AuditOpts {
  std::string nature, predictor, subpops, family, mode = "exact", out = "-";
  double alpha = 0.1, epsilon = 0.05;
  std::size_t grid = 10;
  std::uint64_t samples = 0, seed = 0;
};

int RunAudit(const AuditOpts& o) {
  const Nature nature = NatureFromJson(ReadJsonFile(o.nature));
  const Predictor p = LoadPredictor(o.predictor);
  if (p.dimension() != nature.dimension()) {
    throw ConfigError("predictor and nature dimensions differ");
  }
  const auto c = LoadSubpops(o.subpops, nature.dimension());
  const Grid grid(o.grid);
  json config = {{"subcommand", "audit"}, {"nature", o.nature},
                 {"predictor", o.predictor}, {"subpops", o.subpops},
                 {"alpha", o.alpha}, {"grid", o.grid}, {"out", o.out},
                 {"family", o.family}};
  const FairnessAudit audit = AuditFairness(p, c, grid, o.alpha, nature);
  json report = FairnessAuditToJson(audit);
  report["minimal_mc_alpha"] = MinimalMcAlpha(RoundToGrid(p, grid), c, grid, nature);
  bool pass = audit.ma_pass && audit.mc_pass;
  if (!o.family.empty()) {
    config["epsilon"] = o.epsilon;
    config["mode"] = o.mode;
    config["samples"] = o.samples;
    config["seed"] = o.seed;
    const Family family = LoadFamily(o.family, nature.dimension());
    const ModelView view(nature, p);
    const auto rows = AuditFamily(family, view, ModeFrom(o.mode, o.samples, o.seed));
    const bool oi = AllWithin(rows, o.epsilon);
    report["oi"] = {{"epsilon", o.epsilon},
                    {"rows", AuditRowsToJson(family, rows)},
                    {"pass", oi}};
    pass = pass && oi;
  }
  report["pass"] = pass;
  EmitReport(o.out, report, config);
  return pass ? kPass : kVerdictFailure;
}

struct PiOpts {
  std::string nature, predictor, out = "-";
  double tau = 0.05, epsilon = 0.02;
};

int RunPiCheck(const PiOpts& o) {
  const Nature nature = NatureFromJson(ReadJsonFile(o.nature));
  const Predictor p = LoadPredictor(o.predictor);
  if (p.dimension() != nature.dimension()) {
    throw ConfigError("predictor and nature dimensions differ");
  }
  std::vector<double> f = nature.truth().Tabulate();
  for (double& v : f) v = RoundPrediction(v);
  const L1ClosenessReport r = L1ClosenessCheck(
      nature, p, o.epsilon, o.tau, Predictor::Table(nature.dimension(), std::move(f)));
  json report = L1ClosenessToJson(r);
  report["pass"] = r.hypothesis && r.holds;
  EmitReport(o.out, report,
             {{"subcommand", "pi-check"}, {"nature", o.nature},
              {"predictor", o.predictor}, {"tau", o.tau},
              {"epsilon", o.epsilon}, {"out", o.out}});
  return r.hypothesis && r.holds ? kPass : kVerdictFailure;
}

struct DemoOpts {
  std::string ensemble = "linear", epsilon = "auto", out = "-";
  std::size_t n = 16, levels = 3, fuzz = 0;
  std::uint64_t seed = 7, samples = 20000;
};

int RunHardnessDemoCmd(const DemoOpts& o) {
  HardnessDemoConfig cfg;
  cfg.ensemble = o.ensemble;
  cfg.n = o.n;
  cfg.levels = o.levels;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.fuzz = o.fuzz;
  if (o.epsilon != "auto") {
    try {
      std::size_t used = 0;
      cfg.epsilon = std::stod(o.epsilon, &used);
      if (used != o.epsilon.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("--epsilon must be 'auto' or a number");
    }
  }
  const HardnessDemoReport r = RunHardnessDemo(cfg);
  EmitReport(o.out, r.ToJson(),
             {{"subcommand", "hardness-demo"}, {"ensemble", o.ensemble},
              {"n", o.n}, {"levels", o.levels}, {"epsilon", o.epsilon},
              {"seed", o.seed}, {"samples", o.samples}, {"fuzz", o.fuzz},
              {"out", o.out}});
  bool pass = r.passed();
  if (r.induction && r.induction->counterexamples > 0) pass = false;
  return pass ? kPass : kVerdictFailure;
}

struct ReduceOpts {
  std::string direction, subpops, family, out = "-";
  std::size_t dimension = 0, grid = 10;
};

int RunReduce(const ReduceOpts& o) {
  if (o.dimension == 0) throw ConfigError("--dimension is required");
  json report = {{"direction", o.direction}};
  json config = {{"subcommand", "reduce"}, {"direction", o.direction},
                 {"dimension", o.dimension}, {"out", o.out}};
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw ConfigError(std::string(flag) + " is required for this direction");
  };
  if (o.direction == "ma-to-oi" || o.direction == "mc-to-oi") {
    need(o.subpops, "--subpops");
    config["subpops"] = o.subpops;
    const auto c = LoadSubpops(o.subpops, o.dimension);
    Family f;
    if (o.direction == "ma-to-oi") {
      f = MaToOiFamily(c);
    } else {
      config["grid"] = o.grid;
      f = McToOiFamily(c, Grid(o.grid));
    }
    report["family"] = FamilyToJson(f);
  } else if (o.direction == "oi-to-ma" || o.direction == "oi-to-mc") {
    need(o.family, "--family");
    config["family"] = o.family;
    const Family f = LoadFamily(o.family, o.dimension);
    std::vector<Subpopulation> c;
    if (o.direction == "oi-to-ma") {
      c = OiToMaFamily(f, o.dimension);
    } else {
      config["grid"] = o.grid;
      c = OiToMcFamily(f, Grid(o.grid), o.dimension);
    }
    report["subpopulations"] = SubpopulationsToJson(c);
  } else {
    throw ConfigError("unknown direction '" + o.direction + "'");
  }
  EmitReport(o.out, report, config);
  return kPass;
}

struct IngestOpts {
  std::string csv, out = "-";
};

int RunIngest(const IngestOpts& o) {
  const IngestResult r = IngestSamples(o.csv);
  json report = NatureToJson(r.nature);
  report["rows"] = r.rows;
  report["distinct"] = r.distinct;
  EmitReport(o.out, report,
             {{"subcommand", "ingest"}, {"csv", o.csv}, {"out", o.out}});
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oilab: outcome indistinguishability toolkit"};
  app.require_subcommand(1);

  ConstructOpts co;
  auto* construct = app.add_subcommand("construct", "build an OI predictor");
  construct->add_option("--nature", co.nature)->required();
  construct->add_option("--family", co.family)->required();
  construct->add_option("--epsilon", co.epsilon);
  construct->add_option("--mode", co.mode)->check(CLI::IsMember({"exact", "sampled"}));
  construct->add_option("--samples", co.samples, "per iteration; default from the budget");
  construct->add_option("--seed", co.seed);
  construct->add_option("--selection", co.selection)->check(CLI::IsMember({"max", "first"}));
  construct->add_option("--max-iterations", co.max_iterations);
  construct->add_option("--precision", co.precision);
  construct->add_option("--out", co.out);
  construct->add_option("--trace", co.trace);

  AuditOpts ao;
  auto* audit = app.add_subcommand("audit", "multi-accuracy / multi-calibration audit");
  audit->add_option("--nature", ao.nature)->required();
  audit->add_option("--predictor", ao.predictor)->required();
  audit->add_option("--subpops", ao.subpops)->required();
  audit->add_option("--alpha", ao.alpha);
  audit->add_option("--grid", ao.grid);
  audit->add_option("--family", ao.family, "also audit OI against this family");
  audit->add_option("--epsilon", ao.epsilon);
  audit->add_option("--mode", ao.mode)->check(CLI::IsMember({"exact", "sampled"}));
  audit->add_option("--samples", ao.samples);
  audit->add_option("--seed", ao.seed);
  audit->add_option("--out", ao.out);

  PiOpts po;
  auto* pi = app.add_subcommand("pi-check", "prediction-indistinguishability closeness check");
  pi->add_option("--nature", po.nature)->required();
  pi->add_option("--predictor", po.predictor)->required();
  pi->add_option("--tau", po.tau);
  pi->add_option("--epsilon", po.epsilon);
  pi->add_option("--out", po.out);

  DemoOpts dopt;
  auto* demo = app.add_subcommand("hardness-demo", "oracle vs sample access separation");
  demo->add_option("--ensemble", dopt.ensemble);
  demo->add_option("--n", dopt.n);
  demo->add_option("--levels", dopt.levels);
  demo->add_option("--epsilon", dopt.epsilon, "'auto' or a number");
  demo->add_option("--seed", dopt.seed);
  demo->add_option("--samples", dopt.samples);
  demo->add_option("--fuzz", dopt.fuzz, "fuzzed candidates for the induction claims");
  demo->add_option("--out", dopt.out);

  ReduceOpts ro;
  auto* reduce = app.add_subcommand("reduce", "translate between MA/MC collections and OI families");
  reduce->add_option("--direction", ro.direction)
      ->required()
      ->check(CLI::IsMember({"ma-to-oi", "oi-to-ma", "mc-to-oi", "oi-to-mc"}));
  reduce->add_option("--subpops", ro.subpops);
  reduce->add_option("--family", ro.family);
  reduce->add_option("--dimension", ro.dimension)->required();
  reduce->add_option("--grid", ro.grid);
  reduce->add_option("--out", ro.out);

  IngestOpts io;
  auto* ingest = app.add_subcommand("ingest", "CSV samples to an empirical nature");
  ingest->add_option("--csv", io.csv)->required();
  ingest->add_option("--out", io.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*construct) return RunConstruct(co);
    if (*audit) return RunAudit(ao);
    if (*pi) return RunPiCheck(po);
    if (*demo) return RunHardnessDemoCmd(dopt);
    if (*reduce) return RunReduce(ro);
    if (*ingest) return RunIngest(io);
  } catch (const NonTermination& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kVerdictFailure;
  } catch (const ConfigError& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const HypothesisViolated& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const NotDeterministic& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const EmptySubpopulation& e) {
    std::cerr << "oilab: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "oilab: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
