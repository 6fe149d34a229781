#pragma once

#include <array>
#include <string>
#include <vector>

#include "rvpp/core/types.hpp"
#include "rvpp/milp/model.hpp"
#include "rvpp/model/names.hpp"

namespace rvpp::model {

struct CspSchedule {
  std::string name;
  Series p_sf, p_pb, p_charge, p_discharge, energy, heat;
  Series p, r_up, r_down;
  Series r_ts_up, r_ts_down;
  Series r_charge_up, r_charge_down, r_discharge_up, r_discharge_down;
  Series u, v_startup, v_shutdown, u_ts;
  double sigma_up = 0.0;
  double sigma_down = 0.0;
  // Interpolation weights and segment binaries, indexed [scenario][t][k].
  std::array<std::vector<Series>, 3> x;
  std::array<std::vector<Series>, 3> seg;
};

struct NdResSchedule {
  std::string name;
  Series p, r_up, r_down;
};

struct ElectricSchedule {
  std::string name;
  Series p, r_up, r_down;
};

struct ThermalSchedule {
  std::string name;
  Series h;
};

// First-stage decision decoded from an optimal deterministic or robust
// solution. p_da is positive when selling.
struct FirstStageDecision {
  MarketSet markets;
  Series p_da, r_sr_up, r_sr_down, h_hpa;
  std::vector<CspSchedule> csp;
  std::vector<NdResSchedule> ndres;
  std::vector<ElectricSchedule> electric;
  std::vector<ThermalSchedule> thermal;
};

// Abscissae and ordinates of the power-block conversion curve, in the order
// the interpolation weights x[.,.,k] use: the origin, the dead-band edge with
// zero output, then each breakpoint at its efficiency.
struct PwlPoints {
  std::vector<double> input;
  std::vector<double> output;
};
PwlPoints pwl_points(const CspUnit& unit);

// Throws InvariantError when a variable of the instance is missing.
FirstStageDecision extract_first_stage(const milp::MilpSolution& solution, const RvppInstance& instance,
                                       const MarketSet& markets);

// Negative objective of the deterministic model evaluated at the nominal
// prices of `instance`: positive values are net expenses.
double total_cost(const FirstStageDecision& decision, const RvppInstance& instance);

// Electric balance residual (supply - demand - traded) for period t and an
// activation scenario. Zero for a consistent decision.
double balance_residual(const FirstStageDecision& decision, int t, Scenario s);
double heat_residual(const FirstStageDecision& decision, int t);

}  // namespace rvpp::model
