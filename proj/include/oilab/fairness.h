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

#ifndef OILAB_FAIRNESS_H_
#define OILAB_FAIRNESS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oilab/advantage.h"
#include "oilab/distinguisher.h"
#include "oilab/membership.h"
#include "oilab/nature.h"
#include "oilab/predictor.h"

namespace oilab {

// Bin centers {(2k+1)/2m : k < m}.
class Grid {
 public:
  explicit Grid(std::size_t m);
  std::size_t size() const { return m_; }
  double Center(std::size_t k) const;
  std::size_t Bin(double v) const;
  double Round(double v) const { return Center(Bin(v)); }
  double half_width() const { return 0.5 / static_cast<double>(m_); }
  // True when v is a bin center (to 1e-9).
  bool Contains(double v) const;

 private:
  std::size_t m_;
};

// p rounded onto the grid, as a table predictor.
Predictor RoundToGrid(const Predictor& p, const Grid& grid);

// |E[p* | S] - E[p | S]|; throws EmptySubpopulation for zero mass.
double MaViolation(std::span<const double> model_on_atoms,
                   const MembershipRule& s, const Nature& nature);
double MaViolation(const Predictor& p, const MembershipRule& s,
                   const Nature& nature);

struct McCell {
  std::string subpopulation;
  std::size_t bin = 0;
  double value = 0.0;
  double violation = 0.0;          // |E[p* | pbar = v, S] - v|, 0 if empty
  double joint_mass = 0.0;         // Pr[pbar = v and i in S]
  double conditional_mass = 0.0;   // Pr[pbar = v | i in S]
  std::size_t support_size = 0;    // |supp_S(pbar)|
  bool exempt = false;             // conditional_mass < alpha / support_size
  bool satisfied = false;          // exempt or violation <= alpha
};

// One cell. pbar must take values in the grid. alpha must be positive.
McCell McViolation(std::span<const double> rounded_on_atoms,
                   const Subpopulation& s, std::size_t bin, const Grid& grid,
                   double alpha, const Nature& nature);

struct MaRow {
  std::string subpopulation;
  double mass = 0.0;
  double violation = 0.0;
  bool satisfied = false;
};

struct FairnessAudit {
  double alpha = 0.0;
  double gamma = 0.0;  // minimum subpopulation mass
  std::vector<MaRow> ma;
  std::vector<McCell> mc;  // every (S, v) pair, in (S, bin) order
  bool ma_pass = true;
  bool mc_pass = true;
};

// MA on p itself; MC on p rounded to the grid. Subpopulations of zero mass
// are reported with violation 0 and do not fail the verdict.
FairnessAudit AuditFairness(const Predictor& p, const std::vector<Subpopulation>& c,
                            const Grid& grid, double alpha, const Nature& nature);

// Smallest alpha (up to a relative 1e-12 margin) for which pbar is (C, alpha)-MC.
double MinimalMcAlpha(const Predictor& pbar, const std::vector<Subpopulation>& c,
                      const Grid& grid, const Nature& nature);

bool IsMultiAccurate(const Predictor& p, const std::vector<Subpopulation>& c,
                     double alpha, const Nature& nature);
bool IsMultiCalibrated(const Predictor& pbar, const std::vector<Subpopulation>& c,
                       const Grid& grid, double alpha, const Nature& nature);
// Exact audit: every member has |Delta| <= epsilon.
bool IsOutcomeIndistinguishable(const Family& family, const Predictor& p,
                                double epsilon, const Nature& nature);

double MinimumMass(const std::vector<Subpopulation>& c,
                   const PopulationDistribution& pop);

// A_S(i, b) = 1[i in S and b = 1], one per subpopulation.
Family MaToOiFamily(const std::vector<Subpopulation>& c);
// S_{A,b} = {i : A(i, b) = 1}, two per member (b = 0 then b = 1).
// Deterministic no-access members only.
std::vector<Subpopulation> OiToMaFamily(const Family& family, std::size_t dimension);
// A_{u,S}(i, b, v) = 1[i in S, b = 1, |u - v| <= 1/2m] for every S and u.
Family McToOiFamily(const std::vector<Subpopulation>& c, const Grid& grid);
// S_{A,b,u} = {i : A(i, b, u) = 1} for b in {0,1} and every u.
// Deterministic members of level at most sample access.
std::vector<Subpopulation> OiToMcFamily(const Family& family, const Grid& grid,
                                        std::size_t dimension);

}  // namespace oilab

#endif  // OILAB_FAIRNESS_H_
