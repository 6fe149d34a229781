#include "rvpp/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rvpp/core/error.hpp"

namespace rvpp {

BoundSeries BoundSeries::constant(int T, double value) {
  Series s(static_cast<std::size_t>(T), value);
  return {s, s, s};
}

BoundSeries BoundSeries::degenerate(const Series& values) { return {values, values, values}; }

BoundSeries BoundSeries::from_bounds(const Series& lower, const Series& upper) {
  Series mid(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) mid[i] = 0.5 * (lower[i] + upper[i]);
  return {mid, lower, upper};
}

bool BoundSeries::is_degenerate() const { return lower == upper && median == lower; }

const char* to_string(NdResKind kind) { return kind == NdResKind::wind ? "wind" : "pv"; }

namespace {

int lookup(const std::map<std::string, int>& m, const std::string& name) {
  auto it = m.find(name);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

int UncertaintyBudgets::csp(const std::string& name) const { return lookup(gamma_per_csp, name); }
int UncertaintyBudgets::ndres(const std::string& name) const { return lookup(gamma_per_ndres, name); }
int UncertaintyBudgets::demand(const std::string& name) const { return lookup(gamma_per_demand, name); }

bool UncertaintyBudgets::all_zero() const {
  if (gamma_dam || gamma_srm_up || gamma_srm_down) return false;
  for (const auto* m : {&gamma_per_csp, &gamma_per_ndres, &gamma_per_demand})
    for (const auto& [k, v] : *m)
      if (v != 0) return false;
  return true;
}

MarketSet MarketSet::parse(const std::string& text) {
  MarketSet ms{false, false, false};
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::string t;
    for (char c : tok)
      if (!std::isspace(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(c));
    if (t == "dam")
      ms.dam_enabled = true;
    else if (t == "srm")
      ms.srm_enabled = true;
    else if (t == "hpa")
      ms.hpa_enabled = true;
    else
      throw InvariantError("unknown market '" + tok + "' (expected dam, srm, hpa)");
  }
  if (!ms.dam_enabled) throw InvariantError("market set must include dam: '" + text + "'");
  return ms;
}

std::vector<MarketSet> MarketSet::all_combinations() {
  return {{true, false, false}, {true, false, true}, {true, true, false}, {true, true, true}};
}

std::string MarketSet::label() const {
  std::string s = "DAM";
  if (srm_enabled) s += "+SRM";
  if (hpa_enabled) s += "+HPA";
  return s;
}

std::string MarketSet::key() const {
  std::string s = "dam";
  if (srm_enabled) s += ",srm";
  if (hpa_enabled) s += ",hpa";
  return s;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

void check_len(const Series& s, int T, const std::string& where) {
  require(static_cast<int>(s.size()) == T,
          where + ": expected " + std::to_string(T) + " entries, got " + std::to_string(s.size()));
}

void check_bounds(const BoundSeries& b, int T, const std::string& where) {
  check_len(b.median, T, where + ".median");
  check_len(b.lower, T, where + ".lower");
  check_len(b.upper, T, where + ".upper");
  for (int t = 0; t < T; ++t) {
    require(std::isfinite(b.lower[t]) && std::isfinite(b.median[t]) && std::isfinite(b.upper[t]),
            where + "[" + std::to_string(t + 1) + "]: non-finite value");
    require(b.lower[t] <= b.median[t] && b.median[t] <= b.upper[t],
            where + "[" + std::to_string(t + 1) + "]: lower <= median <= upper violated");
  }
}

void check_nonneg(const BoundSeries& b, const std::string& where) {
  for (std::size_t t = 0; t < b.size(); ++t)
    require(b.lower[t] >= 0.0, where + "[" + std::to_string(t + 1) + "]: negative value");
}

void check_within(const BoundSeries& b, double lo, double hi, const std::string& where) {
  for (std::size_t t = 0; t < b.size(); ++t)
    require(b.lower[t] >= lo - 1e-9 && b.upper[t] <= hi + 1e-9,
            where + "[" + std::to_string(t + 1) + "]: bounds outside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
}

void check_fraction(double v, bool allow_zero, const std::string& where) {
  require(std::isfinite(v) && (allow_zero ? v >= 0.0 : v > 0.0) && v <= 1.0,
          where + ": must lie in " + std::string(allow_zero ? "[0, 1]" : "(0, 1]"));
}

void check_budget(int g, int T, const std::string& where) {
  require(g >= 0 && g <= T, where + ": budget " + std::to_string(g) + " outside [0, " + std::to_string(T) + "]");
}

template <class Units>
std::set<std::string> unique_names(const Units& units, const std::string& what) {
  std::set<std::string> names;
  for (const auto& u : units) {
    require(!u.name.empty(), what + ": unit without a name");
    require(names.insert(u.name).second, what + ": duplicate name '" + u.name + "'");
  }
  return names;
}

}  // namespace

void validate(const RvppInstance& in) {
  const int T = in.T();
  const double dt = in.dt();
  require(T >= 1, "time_grid: T >= 1");
  require(std::isfinite(dt) && dt > 0.0, "time_grid: delta_t > 0");

  auto csp_names = unique_names(in.csp_units, "csp_units");
  auto res_names = unique_names(in.ndres_units, "ndres_units");
  auto ed_names = unique_names(in.electric_demands, "electric_demands");
  auto td_names = unique_names(in.thermal_demands, "thermal_demands");

  for (std::size_t i = 0; i < in.csp_units.size(); ++i) {
    const auto& c = in.csp_units[i];
    const std::string w = "csp_units[" + std::to_string(i) + "] '" + c.name + "'";
    require(!c.pb_breakpoints.empty(), w + ": pb_breakpoints must not be empty");
    require(c.pb_breakpoints.size() == c.pb_efficiencies.size(),
            w + ": pb_breakpoints and pb_efficiencies differ in length");
    require(c.pb_breakpoints.front() > 0.0, w + ": first pb breakpoint must be positive");
    for (std::size_t k = 1; k < c.pb_breakpoints.size(); ++k)
      require(c.pb_breakpoints[k] > c.pb_breakpoints[k - 1], w + ": pb_breakpoints strictly increasing");
    for (double e : c.pb_efficiencies) check_fraction(e, false, w + ".pb_efficiencies");
    check_fraction(c.heat_efficiency, false, w + ".heat_efficiency");
    check_fraction(c.ts_eta_charge, false, w + ".ts_eta_charge");
    check_fraction(c.ts_eta_discharge, false, w + ".ts_eta_discharge");
    check_fraction(c.srm_capacity_share, true, w + ".srm_capacity_share");
    require(c.startup_loss_k >= 0.0, w + ": startup_loss_k >= 0");
    require(c.pb_min >= 0.0 && c.pb_min <= c.pb_max, w + ": 0 <= pb_min <= pb_max");
    require(c.pb_breakpoints.back() <= c.pb_max + 1e-9, w + ": last pb breakpoint must not exceed pb_max");
    require(c.turbine_min >= 0.0 && c.turbine_min <= c.turbine_max, w + ": 0 <= turbine_min <= turbine_max");
    require(c.ts_e_min >= 0.0 && c.ts_e_min < c.ts_e_max, w + ": 0 <= ts_e_min < ts_e_max");
    require(c.ts_charge_min >= 0.0 && c.ts_charge_min <= c.ts_charge_max, w + ": 0 <= ts_charge_min <= ts_charge_max");
    require(c.ts_discharge_min >= 0.0 && c.ts_discharge_min <= c.ts_discharge_max,
            w + ": 0 <= ts_discharge_min <= ts_discharge_max");
    require(c.min_up >= 1 && c.min_down >= 1, w + ": min_up, min_down >= 1");
    require(c.initial_on >= 0 && c.initial_off >= 0, w + ": initial_on, initial_off >= 0");
    require(c.initial_on == 0 || c.initial_off == 0, w + ": initial_on and initial_off cannot both be positive");
    require(c.srm_ramp_up >= 0.0 && c.srm_ramp_down >= 0.0, w + ": srm ramps >= 0");
    require(c.sf_max_thermal >= 0.0, w + ": sf_max_thermal >= 0");
    check_bounds(c.sf_bounds, T, w + ".sf_bounds");
    check_within(c.sf_bounds, 0.0, c.sf_max_thermal, w + ".sf_bounds");
  }

  for (std::size_t i = 0; i < in.ndres_units.size(); ++i) {
    const auto& r = in.ndres_units[i];
    const std::string w = "ndres_units[" + std::to_string(i) + "] '" + r.name + "'";
    require(r.p_min >= 0.0 && r.p_min <= r.p_max, w + ": 0 <= p_min <= p_max");
    require(r.srm_ramp_up >= 0.0 && r.srm_ramp_down >= 0.0, w + ": srm ramps >= 0");
    check_bounds(r.production_bounds, T, w + ".production_bounds");
    check_within(r.production_bounds, r.p_min, r.p_max, w + ".production_bounds");
  }

  for (std::size_t i = 0; i < in.electric_demands.size(); ++i) {
    const auto& d = in.electric_demands[i];
    const std::string w = "electric_demands[" + std::to_string(i) + "] '" + d.name + "'";
    require(d.p_min >= 0.0 && d.p_min <= d.p_max, w + ": 0 <= p_min <= p_max");
    check_len(d.beta_up, T, w + ".beta_up");
    check_len(d.beta_down, T, w + ".beta_down");
    for (int t = 0; t < T; ++t) {
      check_fraction(d.beta_up[t], true, w + ".beta_up[" + std::to_string(t + 1) + "]");
      check_fraction(d.beta_down[t], true, w + ".beta_down[" + std::to_string(t + 1) + "]");
    }
    require(d.min_energy >= 0.0 && d.min_energy <= d.p_max * dt * T + 1e-9, w + ": min_energy <= p_max * delta_t * T");
    require(d.srm_ramp_up >= 0.0 && d.srm_ramp_down >= 0.0, w + ": srm ramps >= 0");
    check_bounds(d.consumption_bounds, T, w + ".consumption_bounds");
    check_nonneg(d.consumption_bounds, w + ".consumption_bounds");
    check_within(d.consumption_bounds, 0.0, d.p_max, w + ".consumption_bounds");
  }

  for (std::size_t i = 0; i < in.thermal_demands.size(); ++i) {
    const auto& d = in.thermal_demands[i];
    const std::string w = "thermal_demands[" + std::to_string(i) + "] '" + d.name + "'";
    require(d.h_min >= 0.0 && d.h_min <= d.h_max, w + ": 0 <= h_min <= h_max");
    require(d.min_energy >= 0.0 && d.min_energy <= d.h_max * dt * T + 1e-9, w + ": min_energy <= h_max * delta_t * T");
    check_bounds(d.consumption_bounds, T, w + ".consumption_bounds");
    check_nonneg(d.consumption_bounds, w + ".consumption_bounds");
    check_within(d.consumption_bounds, 0.0, d.h_max, w + ".consumption_bounds");
  }

  const auto& m = in.market;
  check_bounds(m.dam_price, T, "market.dam_price");
  check_bounds(m.srm_up_price, T, "market.srm_up_price");
  check_bounds(m.srm_down_price, T, "market.srm_down_price");
  check_nonneg(m.dam_price, "market.dam_price");
  check_nonneg(m.srm_up_price, "market.srm_up_price");
  check_nonneg(m.srm_down_price, "market.srm_down_price");
  check_len(m.hpa_price, T, "market.hpa_price");
  for (int t = 0; t < T; ++t)
    require(std::isfinite(m.hpa_price[t]) && m.hpa_price[t] >= 0.0,
            "market.hpa_price[" + std::to_string(t + 1) + "]: prices >= 0");
  check_fraction(m.kappa, true, "market.kappa");
  require(std::isfinite(m.t_sr) && m.t_sr > 0.0, "market.t_sr > 0");

  const auto& b = in.budgets;
  check_budget(b.gamma_dam, T, "budgets.gamma_dam");
  check_budget(b.gamma_srm_up, T, "budgets.gamma_srm_up");
  check_budget(b.gamma_srm_down, T, "budgets.gamma_srm_down");
  for (const auto& [k, v] : b.gamma_per_csp) {
    require(csp_names.count(k) > 0, "budgets.gamma_per_csp: unknown unit '" + k + "'");
    check_budget(v, T, "budgets.gamma_per_csp." + k);
  }
  for (const auto& [k, v] : b.gamma_per_ndres) {
    require(res_names.count(k) > 0, "budgets.gamma_per_ndres: unknown unit '" + k + "'");
    check_budget(v, T, "budgets.gamma_per_ndres." + k);
  }
  for (const auto& [k, v] : b.gamma_per_demand) {
    require(ed_names.count(k) > 0 || td_names.count(k) > 0, "budgets.gamma_per_demand: unknown demand '" + k + "'");
    check_budget(v, T, "budgets.gamma_per_demand." + k);
  }
}

RvppInstance nominal_projection(const RvppInstance& in) {
  RvppInstance out = in;
  auto& m = out.market;
  m.dam_price = BoundSeries::degenerate(in.market.dam_price.median);
  m.srm_up_price = BoundSeries::degenerate(in.market.srm_up_price.upper);
  m.srm_down_price = BoundSeries::degenerate(in.market.srm_down_price.upper);
  for (auto& c : out.csp_units) c.sf_bounds = BoundSeries::degenerate(c.sf_bounds.upper);
  for (auto& r : out.ndres_units) r.production_bounds = BoundSeries::degenerate(r.production_bounds.upper);
  for (auto& d : out.electric_demands) d.consumption_bounds = BoundSeries::degenerate(d.consumption_bounds.lower);
  for (auto& d : out.thermal_demands) d.consumption_bounds = BoundSeries::degenerate(d.consumption_bounds.lower);
  return out;
}

Series spread(const BoundSeries& b) {
  Series s(b.size());
  for (std::size_t t = 0; t < b.size(); ++t) s[t] = b.upper[t] - b.lower[t];
  return s;
}

PriceDeviations price_deviations(const MarketData& m) {
  PriceDeviations d;
  const std::size_t T = m.dam_price.size();
  d.dam_up.resize(T);
  d.dam_down.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    d.dam_up[t] = m.dam_price.upper[t] - m.dam_price.median[t];
    d.dam_down[t] = m.dam_price.median[t] - m.dam_price.lower[t];
  }
  d.srm_up = spread(m.srm_up_price);
  d.srm_down = spread(m.srm_down_price);
  return d;
}

}  // namespace rvpp
