#pragma once

#include <string>
#include <vector>

#include "rvpp/core/types.hpp"
#include "rvpp/model/decision.hpp"

namespace rvpp::model {

struct InvariantFailure {
  std::string check;   // e.g. "balance", "sos2", "ts_exclusive"
  std::string detail;  // where and by how much
};

// Structural checks on a decoded schedule: three-scenario and heat balance,
// SOS-2 adjacency, storage mode exclusivity, storage energy margins and
// cyclicity, minimum up/down run lengths, kappa reserve caps, demand reserve
// shares and minimum energies. `tol` is absolute, scaled by (1 + magnitude)
// of the quantity compared. Empty result means all checks pass.
std::vector<InvariantFailure> check_invariants(const FirstStageDecision& decision, const RvppInstance& instance,
                                               double tol = 1e-6);

}  // namespace rvpp::model
