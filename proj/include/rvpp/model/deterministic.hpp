#pragma once

#include "rvpp/core/types.hpp"
#include "rvpp/milp/model.hpp"
#include "rvpp/model/decision.hpp"

namespace rvpp::model {

// Deterministic scheduling MILP of the nominal projection of `instance`.
// Disabled markets keep their rows; their variables are fixed to zero.
// Throws BuildError on statically infeasible data.
milp::MilpModel build_deterministic(const RvppInstance& instance, const MarketSet& markets);

}  // namespace rvpp::model
