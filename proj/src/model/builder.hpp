#pragma once

#include "rvpp/core/types.hpp"
#include "rvpp/milp/model.hpp"

namespace rvpp::model::detail {

// Adds the full scheduling model of `instance` to `model`. Uncertain series
// enter at the values the robust counterpart starts from: DAM price median,
// SRM prices upper, SF and ND-RES production upper, demand lower. On a
// nominal projection these are the nominal values.
void add_scheduling_model(milp::MilpModel& model, const RvppInstance& instance, const MarketSet& markets);

// Row names shared with the robust layer.
std::string sf_cap_row(const std::string& unit, int t);
std::string ndres_cap_row(const std::string& unit, int t);
std::string ed_floor_row(const std::string& unit, int t);
std::string td_floor_row(const std::string& unit, int t);

// Sum of nameplate capacities used by the trading caps.
struct Capacities {
  double generation = 0.0;  // ND-RES p_max + turbine_max
  double demand = 0.0;      // ED p_max
  double heat = 0.0;        // TD h_max
};
Capacities capacities(const RvppInstance& instance);

}  // namespace rvpp::model::detail
