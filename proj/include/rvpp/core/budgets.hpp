#pragma once

#include <string>
#include <vector>

#include "rvpp/core/types.hpp"

namespace rvpp {

enum class Strategy { deterministic, optimistic, balanced, pessimistic };

const char* to_string(Strategy s);
// Accepts the full names and the short forms det, opt, bal, pes.
Strategy parse_strategy(const std::string& text);
std::vector<Strategy> all_strategies();

// Budget levels of one preset row: prices, wind, pv, solar field, demands.
struct PresetLevels {
  int prices = 0;
  int wind = 0;
  int pv = 0;
  int solar_field = 0;
  int demands = 0;
};
PresetLevels preset_levels(Strategy s);

// Expand a preset onto the units of an instance. Levels are clamped to T.
UncertaintyBudgets preset_budgets(Strategy s, const RvppInstance& instance);

// Number of periods with a positive upper bound.
int daylight_periods(const BoundSeries& b);

// Scalar-to-vector rule used by budget sweeps: every source gets
// min(gamma, cap) where cap is T, or the daylight-period count for pv units
// and solar fields.
UncertaintyBudgets scalar_budgets(int gamma, const RvppInstance& instance);

}  // namespace rvpp
