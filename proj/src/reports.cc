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

#include "oilab/reports.h"

namespace oilab {

nlohmann::json EstimateToJson(const AdvantageEstimate& e) {
  return {{"value", e.value},
          {"radius", e.radius},
          {"nature_acceptance", e.nature_acceptance},
          {"model_acceptance", e.model_acceptance},
          {"samples", e.samples}};
}

nlohmann::json AuditRowsToJson(const Family& family,
                               const std::vector<AdvantageEstimate>& audit) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < family.size(); ++k) {
    nlohmann::json row = EstimateToJson(audit[k]);
    row["id"] = family[k]->id();
    row["level"] = std::string(ToString(family[k]->level()));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json FairnessAuditToJson(const FairnessAudit& audit) {
  nlohmann::json ma = nlohmann::json::array();
  for (const MaRow& r : audit.ma) {
    ma.push_back({{"subpopulation", r.subpopulation},
                  {"mass", r.mass},
                  {"violation", r.violation},
                  {"satisfied", r.satisfied}});
  }
  nlohmann::json mc = nlohmann::json::array();
  for (const McCell& c : audit.mc) {
    mc.push_back({{"subpopulation", c.subpopulation},
                  {"bin", c.bin},
                  {"value", c.value},
                  {"violation", c.violation},
                  {"joint_mass", c.joint_mass},
                  {"conditional_mass", c.conditional_mass},
                  {"support_size", c.support_size},
                  {"exempt", c.exempt},
                  {"satisfied", c.satisfied}});
  }
  return {{"alpha", audit.alpha},
          {"gamma", audit.gamma},
          {"ma", std::move(ma)},
          {"mc", std::move(mc)},
          {"ma_pass", audit.ma_pass},
          {"mc_pass", audit.mc_pass}};
}

nlohmann::json L1ClosenessToJson(const L1ClosenessReport& r) {
  return {{"pi_advantage", r.pi_advantage},
          {"l1_distance", r.l1_distance},
          {"delta_l1", r.delta_l1},
          {"bound", r.bound},
          {"hypothesis", r.hypothesis},
          {"conclusion", r.conclusion},
          {"holds", r.holds}};
}

}  // namespace oilab
