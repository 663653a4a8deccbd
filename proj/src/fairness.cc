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

#include "oilab/fairness.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "oilab/catalog.h"
#include "oilab/error.h"

namespace oilab {

Grid::Grid(std::size_t m) : m_(m) {
  if (m_ == 0) throw ConfigError("grid needs at least one bin");
}

double Grid::Center(std::size_t k) const {
  return (2.0 * static_cast<double>(k) + 1.0) / (2.0 * static_cast<double>(m_));
}

std::size_t Grid::Bin(double v) const {
  const double scaled = std::floor(v * static_cast<double>(m_));
  if (scaled <= 0.0) return 0;
  return std::min(m_ - 1, static_cast<std::size_t>(scaled));
}

bool Grid::Contains(double v) const { return std::fabs(Round(v) - v) <= 1e-9; }

Predictor RoundToGrid(const Predictor& p, const Grid& grid) {
  std::vector<double> table = p.Tabulate();
  for (double& v : table) v = grid.Round(v);
  return Predictor::Table(p.dimension(), std::move(table));
}

double MaViolation(std::span<const double> model_on_atoms,
                   const MembershipRule& s, const Nature& nature) {
  const auto& pop = nature.population();
  const auto& atoms = pop.atoms();
  const auto& truth = nature.truth_on_atoms();
  KahanSum mass, gap;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!s.Contains(Individual::FromIndex(pop.dimension(), atoms[k].index))) continue;
    mass.Add(atoms[k].mass);
    gap.Add(atoms[k].mass * (truth[k] - model_on_atoms[k]));
  }
  if (mass.value() <= 0.0) throw EmptySubpopulation("subpopulation has zero mass");
  return std::fabs(gap.value() / mass.value());
}

double MaViolation(const Predictor& p, const MembershipRule& s,
                   const Nature& nature) {
  const auto values = ValuesOnAtoms(p, nature.population());
  return MaViolation(values, s, nature);
}

McCell McViolation(std::span<const double> rounded_on_atoms,
                   const Subpopulation& s, std::size_t bin, const Grid& grid,
                   double alpha, const Nature& nature) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  const auto& pop = nature.population();
  const auto& atoms = pop.atoms();
  const auto& truth = nature.truth_on_atoms();
  const double v = grid.Center(bin);
  KahanSum s_mass, joint, truth_sum;
  std::set<std::size_t> support;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!s.rule->Contains(Individual::FromIndex(pop.dimension(), atoms[k].index))) {
      continue;
    }
    const double u = rounded_on_atoms[k];
    if (!grid.Contains(u)) {
      throw DomainError("rounded predictor takes value off the grid: " +
                        std::to_string(u));
    }
    s_mass.Add(atoms[k].mass);
    support.insert(grid.Bin(u));
    if (grid.Bin(u) == bin) {
      joint.Add(atoms[k].mass);
      truth_sum.Add(atoms[k].mass * truth[k]);
    }
  }
  if (s_mass.value() <= 0.0) throw EmptySubpopulation("subpopulation '" + s.id + "' has zero mass");
  McCell c;
  c.subpopulation = s.id;
  c.bin = bin;
  c.value = v;
  c.joint_mass = joint.value();
  c.conditional_mass = joint.value() / s_mass.value();
  c.support_size = support.size();
  c.exempt = c.conditional_mass < alpha / static_cast<double>(c.support_size);
  if (c.joint_mass > 0.0) {
    c.violation = std::fabs(truth_sum.value() / c.joint_mass - v);
  } else if (!c.exempt) {
    throw Error("empty level set was not exempt");
  }
  c.satisfied = c.exempt || c.violation <= alpha;
  return c;
}

FairnessAudit AuditFairness(const Predictor& p, const std::vector<Subpopulation>& c,
                            const Grid& grid, double alpha, const Nature& nature) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  const auto& pop = nature.population();
  FairnessAudit out;
  out.alpha = alpha;
  out.gamma = MinimumMass(c, pop);
  const auto values = ValuesOnAtoms(p, pop);
  std::vector<double> rounded(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) rounded[k] = grid.Round(values[k]);
  for (const Subpopulation& s : c) {
    MaRow row;
    row.subpopulation = s.id;
    row.mass = Mass(*s.rule, pop);
    if (row.mass > 0.0) {
      row.violation = MaViolation(values, *s.rule, nature);
      row.satisfied = row.violation <= alpha;
    } else {
      row.satisfied = true;
    }
    out.ma_pass = out.ma_pass && row.satisfied;
    out.ma.push_back(row);
    for (std::size_t b = 0; b < grid.size(); ++b) {
      McCell cell;
      if (row.mass > 0.0) {
        cell = McViolation(rounded, s, b, grid, alpha, nature);
      } else {
        cell.subpopulation = s.id;
        cell.bin = b;
        cell.value = grid.Center(b);
        cell.exempt = true;
        cell.satisfied = true;
      }
      out.mc_pass = out.mc_pass && cell.satisfied;
      out.mc.push_back(cell);
    }
  }
  return out;
}

double MinimalMcAlpha(const Predictor& pbar, const std::vector<Subpopulation>& c,
                      const Grid& grid, const Nature& nature) {
  const auto& pop = nature.population();
  const auto values = ValuesOnAtoms(pbar, pop);
  double alpha = 0.0;
  for (const Subpopulation& s : c) {
    if (Mass(*s.rule, pop) <= 0.0) continue;
    for (std::size_t b = 0; b < grid.size(); ++b) {
      // alpha = 1 gives the support size and masses without depending on alpha.
      const McCell cell = McViolation(values, s, b, grid, 1.0, nature);
      if (cell.joint_mass <= 0.0) continue;
      // Satisfied iff alpha >= violation or alpha > conditional * support.
      const double exempt_at =
          cell.conditional_mass * static_cast<double>(cell.support_size);
      alpha = std::max(alpha, std::min(cell.violation, exempt_at));
    }
  }
  return alpha * (1.0 + 1e-12) + 1e-15;
}

bool IsMultiAccurate(const Predictor& p, const std::vector<Subpopulation>& c,
                     double alpha, const Nature& nature) {
  const auto values = ValuesOnAtoms(p, nature.population());
  for (const Subpopulation& s : c) {
    if (Mass(*s.rule, nature.population()) <= 0.0) continue;
    if (MaViolation(values, *s.rule, nature) > alpha) return false;
  }
  return true;
}

bool IsMultiCalibrated(const Predictor& pbar, const std::vector<Subpopulation>& c,
                       const Grid& grid, double alpha, const Nature& nature) {
  const auto values = ValuesOnAtoms(pbar, nature.population());
  for (const Subpopulation& s : c) {
    if (Mass(*s.rule, nature.population()) <= 0.0) continue;
    for (std::size_t b = 0; b < grid.size(); ++b) {
      if (!McViolation(values, s, b, grid, alpha, nature).satisfied) return false;
    }
  }
  return true;
}

bool IsOutcomeIndistinguishable(const Family& family, const Predictor& p,
                                double epsilon, const Nature& nature) {
  ModelView view(nature, p);
  for (const auto& a : family) {
    if (ExactAdvantage(*a, view).magnitude() > epsilon) return false;
  }
  return true;
}

double MinimumMass(const std::vector<Subpopulation>& c,
                   const PopulationDistribution& pop) {
  if (c.empty()) return 0.0;
  double gamma = 1.0;
  for (const auto& s : c) gamma = std::min(gamma, Mass(*s.rule, pop));
  return gamma;
}

Family MaToOiFamily(const std::vector<Subpopulation>& c) {
  Family out;
  for (const auto& s : c) {
    out.push_back(std::make_shared<SubsetDistinguisher>("ma:" + s.id, s.rule, 1));
  }
  return out;
}

namespace {

void RequireDeterministic(const Distinguisher& a, AccessLevel max_level) {
  if (!a.deterministic()) {
    throw NotDeterministic("distinguisher '" + a.id() + "' is randomized");
  }
  if (a.level() > max_level) {
    throw ConfigError("distinguisher '" + a.id() + "' needs level at most " +
                      std::string(ToString(max_level)));
  }
}

}  // namespace

std::vector<Subpopulation> OiToMaFamily(const Family& family,
                                        std::size_t dimension) {
  std::vector<Subpopulation> out;
  for (const auto& a : family) {
    RequireDeterministic(*a, AccessLevel::kNoAccess);
    for (int b = 0; b <= 1; ++b) {
      DistinguisherPtr keep = a;
      out.push_back({a->id() + ":b" + std::to_string(b),
                     Predicate(dimension, [keep, b](const Individual& i) {
                       return keep->Acceptance(i, b, {}) > 0.5;
                     })});
    }
  }
  return out;
}

Family McToOiFamily(const std::vector<Subpopulation>& c, const Grid& grid) {
  Family out;
  for (const auto& s : c) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out.push_back(std::make_shared<LevelSetDistinguisher>(
          "mc:" + s.id + ":u" + std::to_string(k), grid.Center(k),
          grid.half_width(), s.rule, 1));
    }
  }
  return out;
}

std::vector<Subpopulation> OiToMcFamily(const Family& family, const Grid& grid,
                                        std::size_t dimension) {
  std::vector<Subpopulation> out;
  for (const auto& a : family) {
    RequireDeterministic(*a, AccessLevel::kSampleAccess);
    for (int b = 0; b <= 1; ++b) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        DistinguisherPtr keep = a;
        const double u = grid.Center(k);
        out.push_back({a->id() + ":b" + std::to_string(b) + ":u" + std::to_string(k),
                       Predicate(dimension, [keep, b, u](const Individual& i) {
                         return keep->Acceptance(i, b, {u, nullptr, nullptr}) > 0.5;
                       })});
      }
    }
  }
  return out;
}

}  // namespace oilab
