#include "rvpp/core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rvpp {

namespace {

double round1(double v) { return std::round(v * 10.0) / 10.0; }

// Bounds around a median profile with multiplicative spreads, clamped to
// [floor, cap] and rounded to 0.1.
BoundSeries spread_bounds(const Series& median, double down, double up, double floor, double cap) {
  BoundSeries b;
  for (double m : median) {
    const double mm = round1(std::clamp(m, floor, cap));
    b.median.push_back(mm);
    b.lower.push_back(std::min(mm, round1(std::clamp(m * (1.0 - down), floor, cap))));
    b.upper.push_back(std::max(mm, round1(std::clamp(m * (1.0 + up), floor, cap))));
  }
  return b;
}

Series solar_bell(int T, double peak, double start, double end) {
  Series s(static_cast<std::size_t>(T), 0.0);
  for (int h = 1; h <= T; ++h) {
    const double x = (h - start) / (end - start);
    if (x > 0.0 && x < 1.0) s[static_cast<std::size_t>(h - 1)] = round1(peak * std::sin(std::numbers::pi * x));
  }
  return s;
}

CspUnit reference_csp(int T) {
  CspUnit c;
  c.name = "csp";
  c.sf_max_thermal = 300;
  c.pb_breakpoints = {35, 80, 140};
  c.pb_efficiencies = {0.27, 0.34, 0.39};
  c.pb_max = 140;
  c.pb_min = 35;
  c.turbine_max = 55;
  c.turbine_min = 5;
  c.startup_loss_k = 0.2;
  c.heat_efficiency = 0.9;
  c.min_up = 6;
  c.min_down = 6;
  c.initial_on = 0;
  c.initial_off = 0;
  c.ts_e_max = 1100;
  c.ts_e_min = 110;
  c.ts_charge_max = 140;
  c.ts_charge_min = 0;
  c.ts_discharge_max = 115;
  c.ts_discharge_min = 0;
  c.ts_eta_charge = 0.95;
  c.ts_eta_discharge = 0.95;
  c.srm_ramp_up = 25;
  c.srm_ramp_down = 25;
  c.srm_capacity_share = 0.5;
  c.op_cost = 25;
  c.sf_bounds = spread_bounds(solar_bell(T, 290, 6.5, 18.5), 0.5, 0.1, 0.0, 300.0);
  return c;
}

NdResUnit ndres(const std::string& name, NdResKind kind, const Series& median, double down, double up) {
  NdResUnit u;
  u.name = name;
  u.kind = kind;
  u.p_max = 50;
  u.p_min = 0;
  u.srm_ramp_up = kind == NdResKind::pv ? 10 : 15;
  u.srm_ramp_down = 25;
  u.op_cost = kind == NdResKind::pv ? 7.5 : 15;
  u.production_bounds = spread_bounds(median, down, up, 0.0, 50.0);
  return u;
}

ElectricDemand edemand(const std::string& name, double p_min, double p_max, double energy, double ramp,
                       const Series& median) {
  ElectricDemand d;
  d.name = name;
  d.p_min = p_min;
  d.p_max = p_max;
  d.min_energy = energy;
  d.beta_up = Series(median.size(), 0.1);
  d.beta_down = Series(median.size(), 0.1);
  d.srm_ramp_up = ramp;
  d.srm_ramp_down = ramp;
  d.consumption_bounds = spread_bounds(median, 0.15, 0.15, 0.0, p_max);
  return d;
}

ThermalDemand tdemand(const std::string& name, double h_min, double h_max, double energy, const Series& median) {
  ThermalDemand d;
  d.name = name;
  d.h_min = h_min;
  d.h_max = h_max;
  d.min_energy = energy;
  d.consumption_bounds = spread_bounds(median, 0.15, 0.15, 0.0, h_max);
  return d;
}

}  // namespace

RvppInstance reference_instance() {
  constexpr int T = 24;
  RvppInstance in;
  in.time_grid = {T, 1.0};

  in.csp_units.push_back(reference_csp(T));

  const Series wf1 = {32, 34, 35, 36, 35, 33, 30, 26, 22, 18, 15, 13, 12, 12, 14, 17, 21, 25, 28, 30, 32, 33, 33, 32};
  const Series wf2 = {20, 22, 24, 25, 26, 26, 25, 23, 20, 18, 16, 15, 15, 16, 18, 20, 22, 24, 25, 26, 25, 24, 22, 21};
  in.ndres_units.push_back(ndres("wf1", NdResKind::wind, wf1, 0.4, 0.3));
  in.ndres_units.push_back(ndres("wf2", NdResKind::wind, wf2, 0.4, 0.3));
  const double pv_peak[3] = {44, 40, 36};
  for (int i = 0; i < 3; ++i)
    in.ndres_units.push_back(ndres("pv" + std::to_string(i + 1), NdResKind::pv, solar_bell(T, pv_peak[i], 6.0, 20.0),
                                   0.45, 0.15));

  const Series ind = {15, 15, 15, 15, 15, 18, 25, 32, 35, 36, 36, 35, 33, 34, 35, 35, 33, 30, 26, 22, 20, 18, 16, 15};
  const Series ser = {14, 13, 13, 13, 14, 18, 28, 40, 48, 52, 54, 55, 54, 53, 52, 50, 46, 40, 34, 28, 22, 18, 16, 15};
  const Series res = {18, 16, 15, 14, 14, 16, 22, 27, 25, 22, 21, 21, 22, 22, 21, 22, 26, 33, 40, 44, 42, 36, 28, 22};
  in.electric_demands.push_back(edemand("industry", 2, 70, 600, 30, ind));
  in.electric_demands.push_back(edemand("service", 10, 80, 800, 25, ser));
  in.electric_demands.push_back(edemand("residential", 5, 60, 600, 10, res));

  const Series tind = {25, 25, 25, 25, 26, 28, 32, 36, 38, 38, 37, 36, 35, 35, 35, 34, 33, 31, 29, 28, 27, 26, 25, 25};
  const Series tres = {20, 18, 17, 17, 18, 22, 30, 36, 34, 30, 26, 24, 23, 23, 24, 26, 30, 36, 40, 42, 40, 34, 28, 23};
  in.thermal_demands.push_back(tdemand("industry", 10, 80, 700, tind));
  in.thermal_demands.push_back(tdemand("residential", 5, 70, 700, tres));

  const Series dam = {78,  72,  68,  65,  66,  72,  90,  112, 118, 105, 88,  75,
                      68,  66,  70,  82,  100, 125, 145, 150, 138, 118, 98,  85};
  const Series sru = {12, 11, 10, 10, 10, 11, 14, 18, 20, 17, 14, 12, 11, 10, 11, 13, 16, 20, 24, 25, 22, 18, 15, 13};
  const Series srd = {8, 7, 6, 6, 6, 7, 9, 12, 14, 12, 10, 8, 7, 6, 7, 8, 10, 13, 16, 17, 15, 12, 10, 9};
  in.market.dam_price = spread_bounds(dam, 0.3, 0.12, 35.0, 167.0);
  in.market.srm_up_price = spread_bounds(sru, 0.4, 0.2, 6.0, 29.0);
  in.market.srm_down_price = spread_bounds(srd, 0.5, 0.3, 1.0, 22.0);
  in.market.hpa_price = {70, 70, 70, 70, 70, 70, 70, 95, 95, 95, 95, 95,
                         95, 80, 80, 80, 80, 120, 120, 120, 120, 120, 70, 70};
  in.market.kappa = 0.4;
  in.market.t_sr = 5.0;
  return in;
}

RvppInstance toy_instance() {
  constexpr int T = 4;
  RvppInstance in;
  in.time_grid = {T, 1.0};
  CspUnit c = reference_csp(T);
  c.min_up = 2;
  c.min_down = 2;
  c.ts_e_max = 300;
  c.ts_e_min = 30;
  c.sf_bounds = spread_bounds({0, 180, 220, 60}, 0.5, 0.1, 0.0, 300.0);
  in.csp_units.push_back(c);
  in.ndres_units.push_back(ndres("wf1", NdResKind::wind, {30, 24, 18, 26}, 0.4, 0.3));
  in.ndres_units.push_back(ndres("pv1", NdResKind::pv, {0, 30, 40, 10}, 0.45, 0.15));
  in.electric_demands.push_back(edemand("industry", 2, 70, 100, 30, {20, 30, 35, 25}));
  in.thermal_demands.push_back(tdemand("industry", 10, 80, 100, {25, 30, 35, 25}));
  in.market.dam_price = spread_bounds({70, 110, 90, 140}, 0.3, 0.12, 35.0, 167.0);
  in.market.srm_up_price = spread_bounds({10, 18, 14, 24}, 0.4, 0.2, 6.0, 29.0);
  in.market.srm_down_price = spread_bounds({6, 12, 9, 16}, 0.5, 0.3, 1.0, 22.0);
  in.market.hpa_price = {70, 95, 80, 120};
  in.market.kappa = 0.4;
  in.market.t_sr = 5.0;
  return in;
}

namespace {

double log_binomial(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

BoundSeries random_bounds(std::mt19937_64& rng, int T, double lo, double hi, bool solar) {
  BoundSeries b;
  for (int t = 0; t < T; ++t) {
    double m = uniform(rng, lo, hi);
    if (solar && (t == 0 || t == T - 1) && T > 2) m = 0.0;
    const double l = round1(std::max(lo, m - uniform(rng, 0.0, 0.4) * (m - lo)));
    const double u = round1(std::min(hi, m + uniform(rng, 0.0, 0.4) * (hi - m)));
    m = round1(m);
    b.median.push_back(std::clamp(m, l, u));
    b.lower.push_back(l);
    b.upper.push_back(u);
  }
  return b;
}

}  // namespace

RvppInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opt) {
  std::mt19937_64 rng(seed);
  const int T = uniform_int(rng, opt.min_periods, opt.max_periods);
  RvppInstance in;
  in.time_grid = {T, 1.0};

  double supply_cap = 0.0;
  if (opt.with_csp && uniform01(rng) < 0.7) {
    CspUnit c = reference_csp(T);
    c.name = "csp1";
    c.min_up = uniform_int(rng, 1, std::min(3, T));
    c.min_down = uniform_int(rng, 1, std::min(3, T));
    c.initial_off = uniform_int(rng, 0, 1);
    c.ts_e_max = round1(uniform(rng, 150, 600));
    c.ts_e_min = round1(0.1 * c.ts_e_max);
    c.startup_loss_k = round1(uniform(rng, 0.0, 0.3));
    c.sf_bounds = random_bounds(rng, T, 0.0, 300.0, true);
    supply_cap += c.turbine_max;
    in.csp_units.push_back(std::move(c));
  }

  const int n_res = uniform_int(rng, 1, opt.max_units_per_class);
  for (int i = 0; i < n_res; ++i) {
    const bool pv = uniform01(rng) < 0.5;
    NdResUnit u;
    u.name = (pv ? "pv" : "wf") + std::to_string(i + 1);
    u.kind = pv ? NdResKind::pv : NdResKind::wind;
    u.p_max = round1(uniform(rng, 20, 60));
    u.p_min = 0;
    u.srm_ramp_up = round1(uniform(rng, 1, 15));
    u.srm_ramp_down = round1(uniform(rng, 1, 25));
    u.op_cost = pv ? 7.5 : 15;
    u.production_bounds = random_bounds(rng, T, 0.0, u.p_max, pv);
    supply_cap += u.p_max;
    in.ndres_units.push_back(std::move(u));
  }

  const int n_ed = uniform_int(rng, 0, opt.max_units_per_class);
  double demand_cap = 0.0;
  for (int i = 0; i < n_ed; ++i) {
    ElectricDemand d;
    d.name = "d" + std::to_string(i + 1);
    d.p_max = round1(std::min(uniform(rng, 10, 60), std::max(1.0, 0.9 * supply_cap - demand_cap)));
    d.p_min = round1(uniform(rng, 0.0, 0.2) * d.p_max);
    d.consumption_bounds = random_bounds(rng, T, d.p_min, d.p_max, false);
    double floor_energy = 0.0;
    for (double v : d.consumption_bounds.lower) floor_energy += v;
    d.min_energy = round1(std::min(floor_energy * uniform(rng, 0.8, 1.2), 0.95 * d.p_max * T));
    const double beta = round1(uniform(rng, 0.0, 0.3) * 100.0) / 100.0;
    d.beta_up = Series(static_cast<std::size_t>(T), beta);
    d.beta_down = Series(static_cast<std::size_t>(T), beta);
    d.srm_ramp_up = round1(uniform(rng, 1, 20));
    d.srm_ramp_down = round1(uniform(rng, 1, 20));
    demand_cap += d.p_max;
    in.electric_demands.push_back(std::move(d));
  }

  if (opt.with_thermal) {
    const int n_td = uniform_int(rng, 0, opt.max_units_per_class);
    for (int i = 0; i < n_td; ++i) {
      ThermalDemand d;
      // Share names with electric demands half the time to exercise shared budgets.
      d.name = (i < n_ed && uniform01(rng) < 0.5) ? in.electric_demands[static_cast<std::size_t>(i)].name
                                                   : "h" + std::to_string(i + 1);
      if (std::any_of(in.thermal_demands.begin(), in.thermal_demands.end(),
                      [&](const ThermalDemand& o) { return o.name == d.name; }))
        d.name = "h" + std::to_string(i + 1);
      d.h_max = round1(uniform(rng, 10, 60));
      d.h_min = round1(uniform(rng, 0.0, 0.2) * d.h_max);
      d.consumption_bounds = random_bounds(rng, T, d.h_min, d.h_max, false);
      double floor_energy = 0.0;
      for (double v : d.consumption_bounds.lower) floor_energy += v;
      d.min_energy = round1(std::min(floor_energy * uniform(rng, 0.8, 1.2), 0.95 * d.h_max * T));
      in.thermal_demands.push_back(std::move(d));
    }
  }

  in.market.dam_price = random_bounds(rng, T, 35, 167, false);
  in.market.srm_up_price = random_bounds(rng, T, 6, 29, false);
  in.market.srm_down_price = random_bounds(rng, T, 1, 22, false);
  for (int t = 0; t < T; ++t) in.market.hpa_price.push_back(round1(uniform(rng, 70, 120)));
  in.market.kappa = round1(uniform(rng, 0.1, 0.5) * 100.0) / 100.0;
  in.market.t_sr = 5.0;

  if (opt.max_budget > 0) {
    auto draw = [&] { return std::min(T, uniform_int(rng, 0, opt.max_budget)); };
    auto& b = in.budgets;
    b.gamma_dam = draw();
    b.gamma_srm_up = draw();
    b.gamma_srm_down = draw();
    for (const auto& c : in.csp_units) b.gamma_per_csp[c.name] = draw();
    for (const auto& u : in.ndres_units) b.gamma_per_ndres[u.name] = draw();
    for (const auto& d : in.electric_demands) b.gamma_per_demand[d.name] = draw();
    for (const auto& d : in.thermal_demands)
      if (!b.gamma_per_demand.count(d.name)) b.gamma_per_demand[d.name] = draw();

    // Shrink the largest budgets until the enumeration fits the cap.
    auto log_count = [&] {
      double s = log_binomial(T, b.gamma_dam) + log_binomial(T, b.gamma_srm_up) + log_binomial(T, b.gamma_srm_down);
      for (auto* m : {&b.gamma_per_csp, &b.gamma_per_ndres, &b.gamma_per_demand})
        for (const auto& [k, g] : *m) s += log_binomial(T, g);
      return s;
    };
    while (log_count() > std::log(opt.max_subsets)) {
      int* largest = &b.gamma_dam;
      for (int* g : {&b.gamma_srm_up, &b.gamma_srm_down})
        if (*g > *largest) largest = g;
      for (auto* m : {&b.gamma_per_csp, &b.gamma_per_ndres, &b.gamma_per_demand})
        for (auto& [k, g] : *m)
          if (g > *largest) largest = &g;
      --*largest;
    }
  }
  return in;
}

}  // namespace rvpp
