#include "rvpp/model/deterministic.hpp"

#include "builder.hpp"
#include "rvpp/core/error.hpp"

namespace rvpp::model {

PwlPoints pwl_points(const CspUnit& u) {
  PwlPoints p;
  p.input = {0.0, u.pb_breakpoints.front()};
  p.output = {0.0, 0.0};
  for (std::size_t n = 0; n < u.pb_breakpoints.size(); ++n) {
    p.input.push_back(u.pb_breakpoints[n]);
    p.output.push_back(u.pb_efficiencies[n] * u.pb_breakpoints[n]);
  }
  return p;
}

milp::MilpModel build_deterministic(const RvppInstance& instance, const MarketSet& markets) {
  milp::MilpModel m;
  detail::add_scheduling_model(m, nominal_projection(instance), markets);
  m.check();
  return m;
}

namespace {

Series read(const milp::MilpSolution& sol, int T, auto&& name) {
  Series s(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) s[t] = sol.value(name(t));
  return s;
}

}  // namespace

FirstStageDecision extract_first_stage(const milp::MilpSolution& sol, const RvppInstance& in, const MarketSet& ms) {
  if (!sol.has_solution()) throw InvariantError("extract_first_stage: solution holds no assignment");
  const int T = in.T();
  FirstStageDecision d;
  d.markets = ms;
  d.p_da = read(sol, T, names::p_da);
  d.r_sr_up = read(sol, T, names::r_sr_up);
  d.r_sr_down = read(sol, T, names::r_sr_dn);
  d.h_hpa = read(sol, T, names::h_hpa);
  for (const auto& u : in.csp_units) {
    CspSchedule c;
    c.name = u.name;
    auto f = [&](const char* field) { return read(sol, T, [&](int t) { return names::csp(u.name, field, t); }); };
    c.p_sf = f("p_sf");
    c.p_pb = f("p_pb");
    c.p_charge = f("p_ch");
    c.p_discharge = f("p_dis");
    c.energy = f("e");
    c.heat = f("h");
    c.p = f("p");
    c.r_up = f("r_up");
    c.r_down = f("r_dn");
    c.r_ts_up = f("r_ts_up");
    c.r_ts_down = f("r_ts_dn");
    c.r_charge_up = f("r_ch_up");
    c.r_charge_down = f("r_ch_dn");
    c.r_discharge_up = f("r_dis_up");
    c.r_discharge_down = f("r_dis_dn");
    c.u = f("u");
    c.v_startup = f("v_su");
    c.v_shutdown = f("v_sd");
    c.u_ts = f("u_ts");
    c.sigma_up = sol.value(names::csp(u.name, "sigma_up"));
    c.sigma_down = sol.value(names::csp(u.name, "sigma_dn"));
    const int K = static_cast<int>(pwl_points(u).input.size());
    for (Scenario s : kScenarios) {
      auto& xs = c.x[index(s)];
      auto& ss = c.seg[index(s)];
      for (int t = 0; t < T; ++t) {
        Series xv(K), sv(K);
        for (int k = 0; k < K; ++k) {
          xv[k] = sol.value(names::csp_pwl(u.name, "x", t, s, k));
          sv[k] = sol.value(names::csp_pwl(u.name, "seg", t, s, k));
        }
        xs.push_back(std::move(xv));
        ss.push_back(std::move(sv));
      }
    }
    d.csp.push_back(std::move(c));
  }
  for (const auto& r : in.ndres_units) {
    auto f = [&](const char* field) { return read(sol, T, [&](int t) { return names::res(r.name, field, t); }); };
    d.ndres.push_back({r.name, f("p"), f("r_up"), f("r_dn")});
  }
  for (const auto& e : in.electric_demands) {
    auto f = [&](const char* field) { return read(sol, T, [&](int t) { return names::ed(e.name, field, t); }); };
    d.electric.push_back({e.name, f("p"), f("r_up"), f("r_dn")});
  }
  for (const auto& h : in.thermal_demands)
    d.thermal.push_back({h.name, read(sol, T, [&](int t) { return names::td(h.name, "h", t); })});
  return d;
}

double total_cost(const FirstStageDecision& d, const RvppInstance& in) {
  const auto& mk = in.market;
  const double dt = in.dt();
  double profit = 0.0;
  for (std::size_t t = 0; t < d.p_da.size(); ++t) {
    profit += mk.dam_price.median[t] * d.p_da[t] * dt;
    profit += mk.srm_up_price.upper[t] * d.r_sr_up[t] + mk.srm_down_price.upper[t] * d.r_sr_down[t];
    profit -= mk.hpa_price[t] * d.h_hpa[t] * dt;
    for (std::size_t i = 0; i < d.ndres.size(); ++i) profit -= in.ndres_units[i].op_cost * d.ndres[i].p[t] * dt;
    for (std::size_t i = 0; i < d.csp.size(); ++i)
      profit -= in.csp_units[i].op_cost * (d.csp[i].p[t] + d.csp[i].heat[t]) * dt;
  }
  return -profit;
}

double balance_residual(const FirstStageDecision& d, int t, Scenario s) {
  const double sg = sign(s);
  const bool up = s == Scenario::up;
  auto res = [&](const Series& r_up, const Series& r_dn) { return s == Scenario::none ? 0.0 : sg * (up ? r_up[t] : r_dn[t]); };
  double v = 0.0;
  for (const auto& c : d.csp) v += c.p[t] + res(c.r_up, c.r_down);
  for (const auto& r : d.ndres) v += r.p[t] + res(r.r_up, r.r_down);
  for (const auto& e : d.electric) v -= e.p[t] - res(e.r_up, e.r_down);
  v -= d.p_da[t] + res(d.r_sr_up, d.r_sr_down);
  return v;
}

double heat_residual(const FirstStageDecision& d, int t) {
  double v = d.h_hpa[t];
  for (const auto& c : d.csp) v += c.heat[t];
  for (const auto& h : d.thermal) v -= h.h[t];
  return v;
}

}  // namespace rvpp::model
