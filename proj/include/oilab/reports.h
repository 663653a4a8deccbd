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

#ifndef OILAB_REPORTS_H_
#define OILAB_REPORTS_H_

#include <vector>

#include "json.hpp"
#include "oilab/advantage.h"
#include "oilab/construct.h"
#include "oilab/fairness.h"
#include "oilab/prediction_indist.h"

namespace oilab {

nlohmann::json EstimateToJson(const AdvantageEstimate& e);
nlohmann::json AuditRowsToJson(const Family& family,
                               const std::vector<AdvantageEstimate>& audit);
nlohmann::json FairnessAuditToJson(const FairnessAudit& audit);
nlohmann::json L1ClosenessToJson(const L1ClosenessReport& r);

}  // namespace oilab

#endif  // OILAB_REPORTS_H_
