#include "builder.hpp"

#include <algorithm>
#include <string>

#include "rvpp/core/error.hpp"
#include "rvpp/model/decision.hpp"
#include "rvpp/model/names.hpp"

namespace rvpp::model::detail {

using milp::kInf;
using milp::MilpModel;
using milp::Sense;
using milp::Term;
using milp::VarId;

std::string sf_cap_row(const std::string& unit, int t) { return names::csp(unit, "sf_cap", t); }
std::string ndres_cap_row(const std::string& unit, int t) { return names::res(unit, "cap", t); }
std::string ed_floor_row(const std::string& unit, int t) { return names::ed(unit, "floor", t); }
std::string td_floor_row(const std::string& unit, int t) { return names::td(unit, "floor", t); }

Capacities capacities(const RvppInstance& in) {
  Capacities c;
  for (const auto& r : in.ndres_units) c.generation += r.p_max;
  for (const auto& u : in.csp_units) c.generation += u.turbine_max;
  for (const auto& d : in.electric_demands) c.demand += d.p_max;
  for (const auto& d : in.thermal_demands) c.heat += d.h_max;
  return c;
}

namespace {

std::string tname(const char* what, int t) { return std::string(what) + ", t=" + std::to_string(t + 1); }

struct CspVars {
  std::vector<VarId> p_sf, p_pb, p_ch, p_dis, e, h, p, r_up, r_dn, r_ts_up, r_ts_dn, r_ch_up, r_ch_dn, r_dis_up,
      r_dis_dn, u, v_su, v_sd, u_ts;
  VarId sigma_up, sigma_dn;
};

class Builder {
 public:
  Builder(MilpModel& m, const RvppInstance& in, const MarketSet& ms)
      : m_(m), in_(in), ms_(ms), T_(in.T()), dt_(in.dt()), cap_(capacities(in)) {}

  void run() {
    check_static();
    market_vars();
    for (const auto& u : in_.csp_units) csp(u);
    for (const auto& r : in_.ndres_units) ndres(r);
    for (const auto& d : in_.electric_demands) electric(d);
    for (const auto& d : in_.thermal_demands) thermal(d);
    balances();
    objective();
  }

 private:
  double reserve_cap(double c) const { return ms_.srm_enabled ? c : 0.0; }

  VarId reserve(std::string name, double cap) { return m_.add_continuous(std::move(name), 0.0, reserve_cap(cap)); }

  void check_static() {
    if (!ms_.dam_enabled) throw BuildError("market set must include the DAM");
    if (ms_.srm_enabled && in_.market.kappa * (cap_.generation - cap_.demand) < 0.0)
      throw BuildError("reserve cap kappa * (generation - demand capacity) is negative; disable the SRM");
    if (!ms_.hpa_enabled && in_.csp_units.empty())
      for (const auto& d : in_.thermal_demands)
        if (d.h_min > 0.0 || d.min_energy > 0.0 ||
            std::any_of(d.consumption_bounds.lower.begin(), d.consumption_bounds.lower.end(),
                        [](double v) { return v > 0.0; }))
          throw BuildError("thermal demand '" + d.name + "' cannot be served without the HPA or a CSP unit");
  }

  void market_vars() {
    const double kcap = in_.market.kappa * (cap_.generation - cap_.demand);
    for (int t = 0; t < T_; ++t) {
      p_da_.push_back(m_.add_continuous(names::p_da(t), -kInf, kInf));
      r_sr_up_.push_back(reserve(names::r_sr_up(t), kcap));
      r_sr_dn_.push_back(reserve(names::r_sr_dn(t), kcap));
      h_hpa_.push_back(m_.add_continuous(names::h_hpa(t), 0.0, ms_.hpa_enabled ? cap_.heat : 0.0));
      add("trade.up" + idx(t), {{p_da_[t], 1.0}, {r_sr_up_[t], 1.0}}, Sense::le, cap_.generation,
          tname("traded power and up reserve within generation capacity", t));
      add("trade.dn" + idx(t), {{p_da_[t], 1.0}, {r_sr_dn_[t], -1.0}}, Sense::ge, -cap_.demand,
          tname("purchase and down reserve within demand capacity", t));
    }
  }

  static std::string idx(int t) { return "[" + std::to_string(t + 1) + "]"; }

  void add(std::string name, std::vector<Term> terms, Sense s, double rhs, std::string tag) {
    m_.tag(name, std::move(tag));
    m_.add_constraint(std::move(name), std::move(terms), s, rhs);
  }

  void csp(const CspUnit& u) {
    const std::string& n = u.name;
    CspVars v;
    const double r_up_cap = std::min(in_.market.t_sr * u.srm_ramp_up, u.srm_capacity_share * u.turbine_max);
    const double r_dn_cap = std::min(in_.market.t_sr * u.srm_ramp_down, u.srm_capacity_share * u.turbine_max);
    const double span = u.ts_e_max - u.ts_e_min;
    v.sigma_up = m_.add_continuous(names::csp(n, "sigma_up"), 0.0, 1.0);
    v.sigma_dn = m_.add_continuous(names::csp(n, "sigma_dn"), 0.0, 1.0);
    for (int t = 0; t < T_; ++t) {
      v.p_sf.push_back(m_.add_continuous(names::csp(n, "p_sf", t), 0.0, u.sf_max_thermal));
      v.p_pb.push_back(m_.add_continuous(names::csp(n, "p_pb", t), 0.0, u.pb_max));
      v.p_ch.push_back(m_.add_continuous(names::csp(n, "p_ch", t), 0.0, u.ts_charge_max));
      v.p_dis.push_back(m_.add_continuous(names::csp(n, "p_dis", t), 0.0, u.ts_discharge_max));
      v.e.push_back(m_.add_continuous(names::csp(n, "e", t), u.ts_e_min, u.ts_e_max));
      v.h.push_back(m_.add_continuous(names::csp(n, "h", t), 0.0, kInf));
      v.p.push_back(m_.add_continuous(names::csp(n, "p", t), 0.0, u.turbine_max));
      v.r_up.push_back(reserve(names::csp(n, "r_up", t), r_up_cap));
      v.r_dn.push_back(reserve(names::csp(n, "r_dn", t), r_dn_cap));
      v.r_ts_up.push_back(reserve(names::csp(n, "r_ts_up", t), u.pb_max));
      v.r_ts_dn.push_back(reserve(names::csp(n, "r_ts_dn", t), u.pb_max));
      v.r_ch_up.push_back(reserve(names::csp(n, "r_ch_up", t), u.ts_charge_max));
      v.r_ch_dn.push_back(reserve(names::csp(n, "r_ch_dn", t), u.ts_charge_max));
      v.r_dis_up.push_back(reserve(names::csp(n, "r_dis_up", t), u.ts_discharge_max));
      v.r_dis_dn.push_back(reserve(names::csp(n, "r_dis_dn", t), u.ts_discharge_max));
      v.u.push_back(m_.add_binary(names::csp(n, "u", t)));
      v.v_su.push_back(m_.add_binary(names::csp(n, "v_su", t)));
      v.v_sd.push_back(m_.add_binary(names::csp(n, "v_sd", t)));
      v.u_ts.push_back(m_.add_binary(names::csp(n, "u_ts", t)));
    }

    for (int t = 0; t < T_; ++t) {
      add(sf_cap_row(n, t), {{v.p_sf[t], 1.0}}, Sense::le, u.sf_bounds.upper[t],
          tname(("solar field thermal output cap, " + n).c_str(), t));
      // p_pb = p_sf - h/eta + p_dis - p_ch - K * v_su * pb_max
      add(names::csp(n, "pb_bal", t),
          {{v.p_pb[t], 1.0},
           {v.p_sf[t], -1.0},
           {v.h[t], 1.0 / u.heat_efficiency},
           {v.p_dis[t], -1.0},
           {v.p_ch[t], 1.0},
           {v.v_su[t], u.startup_loss_k * u.pb_max}},
          Sense::eq, 0.0, tname(("power block thermal balance, " + n).c_str(), t));
      add(names::csp(n, "pb_up", t), {{v.p_pb[t], 1.0}, {v.r_ts_up[t], 1.0}, {v.u[t], -u.pb_max}}, Sense::le, 0.0,
          tname(("power block input plus up reserve within committed maximum, " + n).c_str(), t));
      add(names::csp(n, "pb_dn", t), {{v.p_pb[t], 1.0}, {v.r_ts_dn[t], -1.0}, {v.u[t], -u.pb_min}}, Sense::ge, 0.0,
          tname(("power block input minus down reserve above committed minimum, " + n).c_str(), t));
      pwl(u, v, t);
      ts_power(u, v, t);
    }
    ts_energy(u, v, span);
    commitment(u, v);
    csp_.push_back(std::move(v));
  }

  void pwl(const CspUnit& u, const CspVars& v, int t) {
    const std::string& n = u.name;
    const PwlPoints pts = pwl_points(u);
    const int K = static_cast<int>(pts.input.size());
    for (Scenario s : kScenarios) {
      const double sg = sign(s);
      const VarId r_ts = s == Scenario::down ? v.r_ts_dn[t] : v.r_ts_up[t];
      const VarId r_el = s == Scenario::down ? v.r_dn[t] : v.r_up[t];
      const std::string sl = label(s);
      std::vector<VarId> x, seg;
      for (int k = 0; k < K; ++k) {
        x.push_back(m_.add_continuous(names::csp_pwl(n, "x", t, s, k), 0.0, 1.0));
        seg.push_back(m_.add_binary(names::csp_pwl(n, "seg", t, s, k)));
      }
      std::vector<Term> in{{v.p_pb[t], 1.0}};
      std::vector<Term> out{{v.p[t], 1.0}};
      if (s != Scenario::none) {
        in.push_back({r_ts, sg});
        out.push_back({r_el, sg});
      }
      std::vector<Term> conv, nseg;
      for (int k = 0; k < K; ++k) {
        in.push_back({x[k], -pts.input[k]});
        out.push_back({x[k], -pts.output[k]});
        conv.push_back({x[k], 1.0});
        nseg.push_back({seg[k], 1.0});
      }
      const std::string where = ", " + n + ", scenario " + sl;
      add(names::csp(n, "pwl_in." + sl, t), in, Sense::eq, 0.0, tname(("conversion input" + where).c_str(), t));
      add(names::csp(n, "pwl_out." + sl, t), out, Sense::eq, 0.0, tname(("conversion output" + where).c_str(), t));
      add(names::csp(n, "pwl_conv." + sl, t), conv, Sense::eq, 1.0, tname(("weights sum to one" + where).c_str(), t));
      add(names::csp(n, "pwl_nseg." + sl, t), nseg, Sense::le, 2.0,
          tname(("at most two active points" + where).c_str(), t));
      for (int k = 0; k < K; ++k)
        add(names::csp_pwl(n, "pwl_link", t, s, k), {{x[k], 1.0}, {seg[k], -1.0}}, Sense::le, 0.0,
            tname(("weight needs its point active" + where).c_str(), t));
      // The zero point carries all weight when off; when on, the input is at
      // least pb_min, so its weight is capped.
      add(names::csp(n, "pwl_off." + sl, t), {{x[0], 1.0}, {v.u[t], 1.0}}, Sense::ge, 1.0,
          tname(("zero point when off" + where).c_str(), t));
      add(names::csp(n, "pwl_on." + sl, t), {{x[0], 1.0}, {v.u[t], std::min(1.0, u.pb_min / pts.input[1])}}, Sense::le,
          1.0, tname(("zero point limited when on" + where).c_str(), t));
      for (int k = 0; k < K; ++k)
        for (int k2 = k + 2; k2 < K; ++k2)
          add(names::csp_pwl(n, "pwl_adj" + std::to_string(k2), t, s, k), {{seg[k], 1.0}, {seg[k2], 1.0}}, Sense::le,
              1.0, tname(("only adjacent points together" + where).c_str(), t));
    }
  }

  void ts_power(const CspUnit& u, const CspVars& v, int t) {
    const std::string& n = u.name;
    const std::string w = ", " + n;
    add(names::csp(n, "ts_ch_min", t), {{v.p_ch[t], 1.0}, {v.r_ch_up[t], -1.0}, {v.u_ts[t], -u.ts_charge_min}},
        Sense::ge, 0.0, tname(("charging minus up reserve above minimum" + w).c_str(), t));
    add(names::csp(n, "ts_ch_max", t), {{v.p_ch[t], 1.0}, {v.r_ch_dn[t], 1.0}, {v.u_ts[t], -u.ts_charge_max}},
        Sense::le, 0.0, tname(("charging plus down reserve within maximum" + w).c_str(), t));
    add(names::csp(n, "ts_dis_max", t), {{v.p_dis[t], 1.0}, {v.r_dis_up[t], 1.0}, {v.u_ts[t], u.ts_discharge_max}},
        Sense::le, u.ts_discharge_max, tname(("discharging plus up reserve within maximum" + w).c_str(), t));
    add(names::csp(n, "ts_dis_min", t), {{v.p_dis[t], 1.0}, {v.r_dis_dn[t], -1.0}, {v.u_ts[t], u.ts_discharge_min}},
        Sense::ge, u.ts_discharge_min, tname(("discharging minus down reserve above minimum" + w).c_str(), t));
    add(names::csp(n, "ts_r_up", t), {{v.r_ts_up[t], 1.0}, {v.r_ch_up[t], -1.0}, {v.r_dis_up[t], -1.0}}, Sense::eq,
        0.0, tname(("storage up reserve composition" + w).c_str(), t));
    add(names::csp(n, "ts_r_dn", t), {{v.r_ts_dn[t], 1.0}, {v.r_ch_dn[t], -1.0}, {v.r_dis_dn[t], -1.0}}, Sense::eq,
        0.0, tname(("storage down reserve composition" + w).c_str(), t));
  }

  void ts_energy(const CspUnit& u, const CspVars& v, double span) {
    const std::string& n = u.name;
    const std::string w = ", " + n;
    for (int t = 1; t < T_; ++t)
      add(names::csp(n, "ts_energy", t),
          {{v.e[t], 1.0},
           {v.e[t - 1], -1.0},
           {v.p_ch[t], -u.ts_eta_charge * dt_},
           {v.p_dis[t], dt_ / u.ts_eta_discharge}},
          Sense::eq, 0.0, tname(("storage energy balance" + w).c_str(), t));
    add(names::csp(n, "ts_cyclic"), {{v.e[0], 1.0}, {v.e[T_ - 1], -1.0}}, Sense::eq, 0.0,
        "storage energy cyclic" + w);
    std::vector<Term> up{{v.sigma_up, -span}}, dn{{v.sigma_dn, -span}};
    for (int t = 0; t < T_; ++t) {
      up.push_back({v.r_ts_up[t], dt_ / u.ts_eta_discharge});
      dn.push_back({v.r_ts_dn[t], u.ts_eta_charge * dt_});
    }
    add(names::csp(n, "ts_share_up"), up, Sense::le, 0.0, "up reserve energy within reserved share" + w);
    add(names::csp(n, "ts_share_dn"), dn, Sense::le, 0.0, "down reserve energy within reserved share" + w);
    for (int t = 0; t < T_; ++t) {
      add(names::csp(n, "ts_floor", t), {{v.e[t], 1.0}, {v.sigma_up, -span}}, Sense::ge, u.ts_e_min,
          tname(("storage energy above floor plus up share" + w).c_str(), t));
      add(names::csp(n, "ts_ceil", t), {{v.e[t], 1.0}, {v.sigma_dn, span}}, Sense::le, u.ts_e_max,
          tname(("storage energy below ceiling minus down share" + w).c_str(), t));
    }
  }

  // Turbine commitment with minimum up and down times. Period 0 refers to the
  // status before the horizon, on iff initial_on > 0.
  void commitment(const CspUnit& u, const CspVars& v) {
    const std::string& n = u.name;
    const std::string w = ", " + n;
    const double u0 = u.initial_on > 0 ? 1.0 : 0.0;
    const int non = std::min(u.initial_on, T_);
    const int noff = std::min(u.initial_off, T_);
    for (int t = 0; t < T_; ++t) {
      std::vector<Term> tr{{v.u[t], 1.0}, {v.v_su[t], -1.0}, {v.v_sd[t], 1.0}};
      double rhs = 0.0;
      if (t > 0)
        tr.push_back({v.u[t - 1], -1.0});
      else
        rhs = u0;
      add(names::csp(n, "uc_trans", t), tr, Sense::eq, rhs, tname(("commitment transition" + w).c_str(), t));
      add(names::csp(n, "uc_excl", t), {{v.v_su[t], 1.0}, {v.v_sd[t], 1.0}}, Sense::le, 1.0,
          tname(("startup and shutdown exclusive" + w).c_str(), t));
    }
    if (non > 0) {
      std::vector<Term> s;
      for (int t = 0; t < non; ++t) s.push_back({v.u[t], 1.0});
      add(names::csp(n, "uc_init_on"), s, Sense::eq, non, "initial on periods" + w);
    }
    if (noff > 0) {
      std::vector<Term> s;
      for (int t = 0; t < noff; ++t) s.push_back({v.u[t], 1.0});
      add(names::csp(n, "uc_init_off"), s, Sense::eq, 0.0, "initial off periods" + w);
    }
    // 0-based t here is the 1-based period t+1.
    auto diff = [&](std::vector<Term>& terms, double& rhs, int t, double coef) {
      terms.push_back({v.u[t], coef});
      if (t > 0)
        terms.push_back({v.u[t - 1], -coef});
      else
        rhs += coef * u0;
    };
    const int UT = u.min_up, DT = u.min_down;
    for (int t = non; t <= T_ - UT; ++t) {
      std::vector<Term> s;
      double rhs = 0.0;
      diff(s, rhs, t, UT);
      for (int k = t; k < t + UT; ++k) s.push_back({v.u[k], -1.0});
      add(names::csp(n, "uc_min_up", t), s, Sense::le, rhs, tname(("minimum up time" + w).c_str(), t));
    }
    for (int t = std::max(0, T_ - UT + 1); t < T_; ++t) {
      std::vector<Term> s;
      double rhs = 0.0;
      for (int k = t; k < T_; ++k) s.push_back({v.u[k], 1.0});
      diff(s, rhs, t, -(T_ - t));
      add(names::csp(n, "uc_min_up_end", t), s, Sense::ge, rhs, tname(("minimum up time at horizon end" + w).c_str(), t));
    }
    for (int t = noff; t <= T_ - DT; ++t) {
      // DT (u_{t-1} - u_t) <= sum (1 - u)
      std::vector<Term> s;
      double rhs = DT;
      diff(s, rhs, t, -DT);
      for (int k = t; k < t + DT; ++k) s.push_back({v.u[k], 1.0});
      add(names::csp(n, "uc_min_dn", t), s, Sense::le, rhs, tname(("minimum down time" + w).c_str(), t));
    }
    for (int t = std::max(0, T_ - DT + 1); t < T_; ++t) {
      // sum_{k>=t} (1 - u_k - (u_{t-1} - u_t)) >= 0
      std::vector<Term> s;
      const int len = T_ - t;
      double rhs = -len;
      for (int k = t; k < T_; ++k) s.push_back({v.u[k], -1.0});
      diff(s, rhs, t, len);
      add(names::csp(n, "uc_min_dn_end", t), s, Sense::ge, rhs,
          tname(("minimum down time at horizon end" + w).c_str(), t));
    }
  }

  void ndres(const NdResUnit& r) {
    const std::string& n = r.name;
    std::vector<VarId> p, up, dn;
    for (int t = 0; t < T_; ++t) {
      p.push_back(m_.add_continuous(names::res(n, "p", t), 0.0, r.p_max));
      up.push_back(reserve(names::res(n, "r_up", t), in_.market.t_sr * r.srm_ramp_up));
      dn.push_back(reserve(names::res(n, "r_dn", t), in_.market.t_sr * r.srm_ramp_down));
      add(ndres_cap_row(n, t), {{p[t], 1.0}, {up[t], 1.0}}, Sense::le, r.production_bounds.upper[t],
          tname(("production plus up reserve within available, " + n).c_str(), t));
      add(names::res(n, "min", t), {{p[t], 1.0}, {dn[t], -1.0}}, Sense::ge, r.p_min,
          tname(("production minus down reserve above minimum, " + n).c_str(), t));
    }
    res_.push_back({p, up, dn});
  }

  void electric(const ElectricDemand& d) {
    const std::string& n = d.name;
    std::vector<VarId> p, up, dn;
    std::vector<Term> energy;
    for (int t = 0; t < T_; ++t) {
      p.push_back(m_.add_continuous(names::ed(n, "p", t), 0.0, d.p_max));
      up.push_back(reserve(names::ed(n, "r_up", t), in_.market.t_sr * d.srm_ramp_up));
      dn.push_back(reserve(names::ed(n, "r_dn", t), in_.market.t_sr * d.srm_ramp_down));
      const std::string w = ", " + n;
      add(ed_floor_row(n, t), {{p[t], 1.0}}, Sense::ge, d.consumption_bounds.lower[t],
          tname(("consumption above profile" + w).c_str(), t));
      add(names::ed(n, "lo", t), {{p[t], 1.0}, {up[t], -1.0}}, Sense::ge, d.p_min,
          tname(("consumption minus up reserve above minimum" + w).c_str(), t));
      add(names::ed(n, "hi", t), {{p[t], 1.0}, {dn[t], 1.0}}, Sense::le, d.p_max,
          tname(("consumption plus down reserve within maximum" + w).c_str(), t));
      add(names::ed(n, "beta_up", t), {{up[t], 1.0}, {p[t], -d.beta_up[t]}}, Sense::le, 0.0,
          tname(("up reserve within flexible share" + w).c_str(), t));
      add(names::ed(n, "beta_dn", t), {{dn[t], 1.0}, {p[t], -d.beta_down[t]}}, Sense::le, 0.0,
          tname(("down reserve within flexible share" + w).c_str(), t));
      energy.push_back({p[t], dt_});
      energy.push_back({up[t], -dt_});
    }
    add("ed." + n + ".energy", energy, Sense::ge, d.min_energy, "minimum energy net of up reserve, " + n);
    ed_.push_back({p, up, dn});
  }

  void thermal(const ThermalDemand& d) {
    const std::string& n = d.name;
    std::vector<VarId> h;
    std::vector<Term> energy;
    for (int t = 0; t < T_; ++t) {
      h.push_back(m_.add_continuous(names::td(n, "h", t), d.h_min, d.h_max));
      add(td_floor_row(n, t), {{h[t], 1.0}}, Sense::ge, d.consumption_bounds.lower[t],
          tname(("heat consumption above profile, " + n).c_str(), t));
      energy.push_back({h[t], dt_});
    }
    add("td." + n + ".energy", energy, Sense::ge, d.min_energy, "minimum heat energy, " + n);
    td_.push_back(h);
  }

  void balances() {
    for (int t = 0; t < T_; ++t) {
      for (Scenario s : kScenarios) {
        const double sg = sign(s);
        const bool up = s == Scenario::up;
        std::vector<Term> terms;
        for (const auto& v : csp_) {
          terms.push_back({v.p[t], 1.0});
          if (s != Scenario::none) terms.push_back({up ? v.r_up[t] : v.r_dn[t], sg});
        }
        for (const auto& r : res_) {
          terms.push_back({r.p[t], 1.0});
          if (s != Scenario::none) terms.push_back({up ? r.up[t] : r.dn[t], sg});
        }
        for (const auto& d : ed_) {
          terms.push_back({d.p[t], -1.0});
          if (s != Scenario::none) terms.push_back({up ? d.up[t] : d.dn[t], sg});
        }
        terms.push_back({p_da_[t], -1.0});
        if (s != Scenario::none) terms.push_back({up ? r_sr_up_[t] : r_sr_dn_[t], -sg});
        add(std::string("bal.") + label(s) + idx(t), std::move(terms), Sense::eq, 0.0,
            tname((std::string("electric balance, scenario ") + label(s)).c_str(), t));
      }
      std::vector<Term> heat{{h_hpa_[t], 1.0}};
      for (const auto& v : csp_) heat.push_back({v.h[t], 1.0});
      for (const auto& h : td_) heat.push_back({h[t], -1.0});
      add("heat" + idx(t), std::move(heat), Sense::eq, 0.0, tname("heat balance", t));
    }
  }

  void objective() {
    m_.set_objective_sense(milp::ObjSense::maximize);
    const auto& mk = in_.market;
    for (int t = 0; t < T_; ++t) {
      m_.add_objective_term(p_da_[t], mk.dam_price.median[t] * dt_);
      m_.add_objective_term(r_sr_up_[t], mk.srm_up_price.upper[t]);
      m_.add_objective_term(r_sr_dn_[t], mk.srm_down_price.upper[t]);
      m_.add_objective_term(h_hpa_[t], -mk.hpa_price[t] * dt_);
      for (std::size_t i = 0; i < res_.size(); ++i)
        m_.add_objective_term(res_[i].p[t], -in_.ndres_units[i].op_cost * dt_);
      for (std::size_t i = 0; i < csp_.size(); ++i) {
        m_.add_objective_term(csp_[i].p[t], -in_.csp_units[i].op_cost * dt_);
        m_.add_objective_term(csp_[i].h[t], -in_.csp_units[i].op_cost * dt_);
      }
    }
  }

  struct Triple {
    std::vector<VarId> p, up, dn;
  };

  MilpModel& m_;
  const RvppInstance& in_;
  MarketSet ms_;
  int T_;
  double dt_;
  Capacities cap_;
  std::vector<VarId> p_da_, r_sr_up_, r_sr_dn_, h_hpa_;
  std::vector<CspVars> csp_;
  std::vector<Triple> res_, ed_;
  std::vector<std::vector<VarId>> td_;
};

}  // namespace

void add_scheduling_model(MilpModel& model, const RvppInstance& instance, const MarketSet& markets) {
  Builder(model, instance, markets).run();
}

}  // namespace rvpp::model::detail
