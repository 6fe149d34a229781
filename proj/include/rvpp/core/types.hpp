#pragma once

#include <map>
#include <string>
#include <vector>

namespace rvpp {

using Series = std::vector<double>;

struct TimeGrid {
  int periods = 0;  // T; periods are t = 1..T
  double delta_t = 1.0;  // hours
};

struct BoundSeries {
  Series median;
  Series lower;
  Series upper;

  static BoundSeries constant(int T, double value);
  static BoundSeries degenerate(const Series& values);
  static BoundSeries from_bounds(const Series& lower, const Series& upper);

  std::size_t size() const { return median.size(); }
  bool is_degenerate() const;
};

struct CspUnit {
  std::string name;
  double sf_max_thermal = 0.0;
  std::vector<double> pb_breakpoints;
  std::vector<double> pb_efficiencies;
  double pb_max = 0.0;
  double pb_min = 0.0;
  double turbine_max = 0.0;
  double turbine_min = 0.0;
  double startup_loss_k = 0.2;
  double heat_efficiency = 1.0;
  int min_up = 1;
  int min_down = 1;
  int initial_on = 0;
  int initial_off = 0;
  double ts_e_max = 0.0;
  double ts_e_min = 0.0;
  double ts_charge_max = 0.0;
  double ts_charge_min = 0.0;
  double ts_discharge_max = 0.0;
  double ts_discharge_min = 0.0;
  double ts_eta_charge = 1.0;
  double ts_eta_discharge = 1.0;
  double srm_ramp_up = 0.0;    // MW/min
  double srm_ramp_down = 0.0;  // MW/min
  double srm_capacity_share = 1.0;
  double op_cost = 0.0;
  BoundSeries sf_bounds;
};

enum class NdResKind { wind, pv };

const char* to_string(NdResKind kind);

struct NdResUnit {
  std::string name;
  NdResKind kind = NdResKind::wind;
  double p_max = 0.0;
  double p_min = 0.0;
  double srm_ramp_up = 0.0;
  double srm_ramp_down = 0.0;
  double op_cost = 0.0;
  BoundSeries production_bounds;
};

struct ElectricDemand {
  std::string name;
  double p_max = 0.0;
  double p_min = 0.0;
  double min_energy = 0.0;
  Series beta_up;
  Series beta_down;
  double srm_ramp_up = 0.0;
  double srm_ramp_down = 0.0;
  BoundSeries consumption_bounds;
};

struct ThermalDemand {
  std::string name;
  double h_max = 0.0;
  double h_min = 0.0;
  double min_energy = 0.0;
  BoundSeries consumption_bounds;
};

struct MarketData {
  BoundSeries dam_price;
  BoundSeries srm_up_price;
  BoundSeries srm_down_price;
  Series hpa_price;
  double kappa = 0.0;
  double t_sr = 5.0;  // minutes
};

// Missing map entries mean a budget of zero.
struct UncertaintyBudgets {
  int gamma_dam = 0;
  int gamma_srm_up = 0;
  int gamma_srm_down = 0;
  std::map<std::string, int> gamma_per_csp;
  std::map<std::string, int> gamma_per_ndres;
  std::map<std::string, int> gamma_per_demand;

  int csp(const std::string& name) const;
  int ndres(const std::string& name) const;
  int demand(const std::string& name) const;
  bool all_zero() const;
};

struct MarketSet {
  bool dam_enabled = true;
  bool srm_enabled = true;
  bool hpa_enabled = true;

  static MarketSet dam_only() { return {true, false, false}; }
  static MarketSet all() { return {true, true, true}; }
  // Accepts "dam", "dam,hpa", "dam,srm", "dam,srm,hpa" in any order.
  static MarketSet parse(const std::string& text);
  // The four sets in the column order DAM, DAM+HPA, DAM+SRM, DAM+SRM+HPA.
  static std::vector<MarketSet> all_combinations();

  std::string label() const;  // e.g. "DAM+SRM+HPA"
  std::string key() const;    // e.g. "dam,srm,hpa"
  bool operator==(const MarketSet&) const = default;
};

struct RvppInstance {
  int schema_version = 1;
  TimeGrid time_grid;
  std::vector<CspUnit> csp_units;
  std::vector<NdResUnit> ndres_units;
  std::vector<ElectricDemand> electric_demands;
  std::vector<ThermalDemand> thermal_demands;
  MarketData market;
  UncertaintyBudgets budgets;

  int T() const { return time_grid.periods; }
  double dt() const { return time_grid.delta_t; }
};

// Throws InvariantError naming the first broken invariant.
void validate(const RvppInstance& instance);

// Collapse every uncertain series to its nominal value: DAM price median,
// SRM prices and productions at their upper bound, demands at their lower bound.
RvppInstance nominal_projection(const RvppInstance& instance);

// Deviation series used by the robust counterpart.
struct PriceDeviations {
  Series dam_up;    // lambda-hat: upper - median
  Series dam_down;  // lambda-check: median - lower
  Series srm_up;    // upper - lower
  Series srm_down;  // upper - lower
};
PriceDeviations price_deviations(const MarketData& market);

// Production deviation (upper - lower) and demand deviation (upper - lower).
Series spread(const BoundSeries& b);

}  // namespace rvpp
