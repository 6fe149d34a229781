#include "rvpp/model/robust.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "builder.hpp"
#include "rvpp/core/error.hpp"
#include "rvpp/model/names.hpp"

namespace rvpp::model {

using milp::kInf;
using milp::MilpModel;
using milp::Sense;
using milp::Term;
using milp::VarId;

std::vector<QuantitySource> quantity_sources(const RvppInstance& in, const UncertaintyBudgets& b) {
  std::vector<QuantitySource> out;
  for (std::size_t i = 0; i < in.csp_units.size(); ++i) {
    QuantitySource q;
    q.kind = QuantitySource::Kind::csp;
    q.name = in.csp_units[i].name;
    q.key = "csp." + q.name;
    q.gamma = b.csp(q.name);
    q.csp_index = static_cast<int>(i);
    q.deviation = spread(in.csp_units[i].sf_bounds);
    out.push_back(std::move(q));
  }
  for (std::size_t i = 0; i < in.ndres_units.size(); ++i) {
    QuantitySource q;
    q.name = in.ndres_units[i].name;
    q.key = "res." + q.name;
    q.gamma = b.ndres(q.name);
    q.ndres_index = static_cast<int>(i);
    q.deviation = spread(in.ndres_units[i].production_bounds);
    out.push_back(std::move(q));
  }
  // Demand groups in first-appearance order: electric demands, then thermal
  // demands without an electric namesake.
  std::map<std::string, std::size_t> pos;
  auto group = [&](const std::string& name) -> QuantitySource& {
    auto it = pos.find(name);
    if (it != pos.end()) return out[it->second];
    QuantitySource q;
    q.kind = QuantitySource::Kind::demand;
    q.name = name;
    q.key = "dem." + name;
    q.gamma = b.demand(name);
    pos[name] = out.size();
    out.push_back(std::move(q));
    return out.back();
  };
  for (std::size_t i = 0; i < in.electric_demands.size(); ++i) {
    auto& q = group(in.electric_demands[i].name);
    q.electric_index = static_cast<int>(i);
    q.deviation = spread(in.electric_demands[i].consumption_bounds);
  }
  for (std::size_t i = 0; i < in.thermal_demands.size(); ++i) {
    auto& q = group(in.thermal_demands[i].name);
    q.thermal_index = static_cast<int>(i);
    q.heat_deviation = spread(in.thermal_demands[i].consumption_bounds);
  }
  return out;
}

std::vector<PriceSource> price_sources(const RvppInstance& in, const UncertaintyBudgets& b) {
  const PriceDeviations d = price_deviations(in.market);
  return {{"da", b.gamma_dam, d.dam_down}, {"up", b.gamma_srm_up, d.srm_up}, {"dn", b.gamma_srm_down, d.srm_down}};
}

namespace {

double max_of(const Series& s) { return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end()); }

double max_deviation(const QuantitySource& q) { return std::max(max_of(q.deviation), max_of(q.heat_deviation)); }

void check_series(const Series& s, const std::string& what) {
  for (std::size_t t = 0; t < s.size(); ++t)
    if (!(s[t] >= 0.0))
      throw BuildError(what + ": negative deviation at period " + std::to_string(t + 1));
}

void check_gamma(int g, int T, const std::string& what) {
  if (g < 0 || g > T)
    throw BuildError(what + ": budget " + std::to_string(g) + " outside [0, " + std::to_string(T) + "]");
}

}  // namespace

double big_m(const QuantitySource& q) { return 2.0 * max_deviation(q) + 1.0; }

double dam_weight(double p_da, double dt, double dev_up, double dev_down) {
  const double e = p_da * dt;
  if (dev_down > 0.0) return std::max(e, -(dev_up / dev_down) * e);
  return std::max(e, -(dev_up / std::max(dev_up, 1.0)) * e);
}

MilpModel build_robust(const RvppInstance& in, const UncertaintyBudgets& budgets, const MarketSet& ms) {
  const int T = in.T();
  const double dt = in.dt();
  const PriceDeviations pd = price_deviations(in.market);
  check_series(pd.dam_up, "DAM price upward deviation");
  check_series(pd.dam_down, "DAM price downward deviation");
  check_series(pd.srm_up, "SRM up price deviation");
  check_series(pd.srm_down, "SRM down price deviation");
  check_gamma(budgets.gamma_dam, T, "gamma_dam");
  check_gamma(budgets.gamma_srm_up, T, "gamma_srm_up");
  check_gamma(budgets.gamma_srm_down, T, "gamma_srm_down");
  auto quantities = quantity_sources(in, budgets);
  for (const auto& q : quantities) {
    check_gamma(q.gamma, T, q.key);
    check_series(q.deviation, q.key);
    check_series(q.heat_deviation, q.key + " heat");
  }
  for (const auto& [name, g] : budgets.gamma_per_csp)
    if (std::none_of(in.csp_units.begin(), in.csp_units.end(), [&](const CspUnit& u) { return u.name == name; }))
      throw BuildError("budget for unknown CSP unit '" + name + "'");
  for (const auto& [name, g] : budgets.gamma_per_ndres)
    if (std::none_of(in.ndres_units.begin(), in.ndres_units.end(), [&](const NdResUnit& u) { return u.name == name; }))
      throw BuildError("budget for unknown ND-RES unit '" + name + "'");
  for (const auto& [name, g] : budgets.gamma_per_demand)
    if (std::none_of(quantities.begin(), quantities.end(), [&](const QuantitySource& q) {
          return q.kind == QuantitySource::Kind::demand && q.name == name;
        }))
      throw BuildError("budget for unknown demand '" + name + "'");

  MilpModel m;
  detail::add_scheduling_model(m, in, ms);

  auto add = [&m](std::string name, std::vector<Term> terms, Sense s, double rhs, std::string tag) {
    m.tag(name, std::move(tag));
    return m.add_constraint(std::move(name), std::move(terms), s, rhs);
  };
  auto at = [](const std::string& what, int t) { return what + ", t=" + std::to_string(t + 1); };

  // DAM price protection with the asymmetric traded-energy auxiliary.
  {
    const VarId phi = m.add_continuous(names::rob("da", "phi"), 0.0, kInf);
    m.add_objective_term(phi, -budgets.gamma_dam);
    for (int t = 0; t < T; ++t) {
      const VarId p = m.var_id(names::p_da(t));
      const VarId y = m.add_continuous(names::rob("da", "y", t), 0.0, kInf);
      const VarId z = m.add_continuous(names::rob("da", "zeta", t), 0.0, kInf);
      m.add_objective_term(z, -1.0);
      add(names::rob("da", "sell", t), {{y, 1.0}, {p, -dt}}, Sense::ge, 0.0, at("traded energy auxiliary, sales", t));
      if (pd.dam_down[t] > 0.0)
        add(names::rob("da", "buy", t), {{y, pd.dam_down[t]}, {p, pd.dam_up[t] * dt}}, Sense::ge, 0.0,
            at("traded energy auxiliary, purchases", t));
      else
        add(names::rob("da", "buy", t), {{y, 1.0}, {p, pd.dam_up[t] / std::max(pd.dam_up[t], 1.0) * dt}}, Sense::ge,
            0.0, at("traded energy auxiliary, purchases (zero downward deviation)", t));
      add(names::rob("da", "dual", t), {{phi, 1.0}, {z, 1.0}, {y, -pd.dam_down[t]}}, Sense::ge, 0.0,
          at("DAM price protection dual", t));
    }
  }
  // SRM price protection.
  for (const auto& [key, gamma, dev, fn] :
       {std::tuple{"up", budgets.gamma_srm_up, pd.srm_up, names::r_sr_up},
        std::tuple{"dn", budgets.gamma_srm_down, pd.srm_down, names::r_sr_dn}}) {
    const VarId phi = m.add_continuous(names::rob(key, "phi"), 0.0, kInf);
    m.add_objective_term(phi, -gamma);
    for (int t = 0; t < T; ++t) {
      const VarId z = m.add_continuous(names::rob(key, "zeta", t), 0.0, kInf);
      m.add_objective_term(z, -1.0);
      add(names::rob(key, "dual", t), {{phi, 1.0}, {z, 1.0}, {m.var_id(fn(t)), -dev[t]}}, Sense::ge, 0.0,
          at(std::string("SRM ") + key + " price protection dual", t));
    }
  }

  // Quantity protection: bound tightening through big-M products.
  for (const auto& q : quantities) {
    if (q.gamma == 0) continue;
    const double maxdev = max_deviation(q);
    const double M = big_m(q);
    const VarId phi = m.add_continuous(names::rob(q.key, "phi"), 0.0, maxdev);
    std::vector<Term> card;
    for (int t = 0; t < T; ++t) {
      const VarId chi = m.add_binary(names::rob(q.key, "chi", t));
      const VarId z = m.add_continuous(names::rob(q.key, "zeta", t), 0.0, maxdev);
      const VarId y = m.add_continuous(names::rob(q.key, "y", t), 0.0, M);
      card.push_back({chi, 1.0});
      add(names::rob(q.key, "ym", t), {{y, 1.0}, {chi, -M}}, Sense::le, 0.0, at(q.key + " tightening off unless flagged", t));
      add(names::rob(q.key, "yl", t), {{y, 1.0}, {phi, -1.0}, {z, -1.0}, {chi, -M}}, Sense::ge, -M,
          at(q.key + " tightening equals dual when flagged", t));
      // Valid for integral chi (y = chi (phi + zeta) >= chi dev); tightens the
      // relaxation, which otherwise ignores the tightening entirely.
      const double dev_t = std::max(q.deviation.empty() ? 0.0 : q.deviation[t],
                                    q.heat_deviation.empty() ? 0.0 : q.heat_deviation[t]);
      add(names::rob(q.key, "ycut", t), {{y, 1.0}, {chi, -dev_t}}, Sense::ge, 0.0,
          at(q.key + " tightening at least the flagged deviation", t));
      if (!q.deviation.empty())
        add(names::rob(q.key, "dual", t), {{phi, 1.0}, {z, 1.0}}, Sense::ge, q.deviation[t],
            at(q.key + " protection dual", t));
      if (!q.heat_deviation.empty())
        add(names::rob(q.key, "dual_h", t), {{phi, 1.0}, {z, 1.0}}, Sense::ge, q.heat_deviation[t],
            at(q.key + " heat protection dual", t));
      switch (q.kind) {
        case QuantitySource::Kind::csp:
          m.add_term(m.row_id(detail::sf_cap_row(q.name, t)), y, 1.0);
          break;
        case QuantitySource::Kind::ndres:
          m.add_term(m.row_id(detail::ndres_cap_row(q.name, t)), y, 1.0);
          break;
        case QuantitySource::Kind::demand:
          if (q.electric_index >= 0) m.add_term(m.row_id(detail::ed_floor_row(q.name, t)), y, -1.0);
          if (q.thermal_index >= 0) m.add_term(m.row_id(detail::td_floor_row(q.name, t)), y, -1.0);
          break;
      }
    }
    add(names::rob(q.key, "card"), card, Sense::eq, q.gamma, q.key + " budget cardinality");
  }
  m.check();
  return m;
}

Protection protection_value_primal(const Series& w, const Series& d, int gamma) {
  if (w.size() != d.size()) throw InvariantError("protection_value_primal: series lengths differ");
  const int T = static_cast<int>(w.size());
  if (gamma < 0 || gamma > T) throw InvariantError("protection_value_primal: gamma outside [0, T]");
  Series prod(w.size());
  for (int t = 0; t < T; ++t) {
    if (w[t] < 0.0 || d[t] < 0.0)
      throw InvariantError("protection_value_primal: negative input at period " + std::to_string(t + 1));
    prod[t] = w[t] * d[t];
  }
  std::vector<int> order(T);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return prod[a] > prod[b]; });
  Protection p;
  p.periods.assign(order.begin(), order.begin() + gamma);
  std::sort(p.periods.begin(), p.periods.end());
  for (int t : p.periods) p.value += prod[t];
  return p;
}

WorstCaseReport worst_case_report(const milp::MilpSolution& sol, const RvppInstance& in,
                                  const UncertaintyBudgets& budgets) {
  const int T = in.T();
  const double dt = in.dt();
  const auto& mk = in.market;
  const PriceDeviations pd = price_deviations(mk);
  WorstCaseReport rep;

  auto duals = [&](const std::string& key, int gamma) {
    double v = gamma * sol.value(names::rob(key, "phi"));
    for (int t = 0; t < T; ++t) v += sol.value(names::rob(key, "zeta", t));
    return v;
  };
  {
    SourceReport s;
    s.key = "da";
    s.gamma = budgets.gamma_dam;
    Series w(T), p(T);
    for (int t = 0; t < T; ++t) {
      p[t] = sol.value(names::p_da(t));
      w[t] = std::max(0.0, dam_weight(p[t], dt, pd.dam_up[t], pd.dam_down[t]));
    }
    s.periods = protection_value_primal(w, pd.dam_down, s.gamma).periods;
    s.realized = mk.dam_price.median;
    for (int t : s.periods) s.realized[t] += p[t] >= 0.0 ? -pd.dam_down[t] : pd.dam_up[t];
    s.protection_cost = duals("da", s.gamma);
    rep.prices.push_back(std::move(s));
  }
  for (const auto& [key, gamma, dev, fn, bounds] :
       {std::tuple{"up", budgets.gamma_srm_up, pd.srm_up, names::r_sr_up, &mk.srm_up_price},
        std::tuple{"dn", budgets.gamma_srm_down, pd.srm_down, names::r_sr_dn, &mk.srm_down_price}}) {
    SourceReport s;
    s.key = key;
    s.gamma = gamma;
    Series w(T);
    for (int t = 0; t < T; ++t) w[t] = std::max(0.0, sol.value(fn(t)));
    s.periods = protection_value_primal(w, dev, gamma).periods;
    s.realized = bounds->upper;
    for (int t : s.periods) s.realized[t] = bounds->lower[t];
    s.protection_cost = duals(key, gamma);
    rep.prices.push_back(std::move(s));
  }

  for (const auto& q : quantity_sources(in, budgets)) {
    SourceReport s;
    s.key = q.key;
    s.gamma = q.gamma;
    const BoundSeries* elec = nullptr;
    const BoundSeries* heat = nullptr;
    double value_scale = 1.0;
    switch (q.kind) {
      case QuantitySource::Kind::csp: {
        const auto& u = in.csp_units[q.csp_index];
        elec = &u.sf_bounds;
        value_scale = *std::max_element(u.pb_efficiencies.begin(), u.pb_efficiencies.end());
        break;
      }
      case QuantitySource::Kind::ndres:
        elec = &in.ndres_units[q.ndres_index].production_bounds;
        break;
      case QuantitySource::Kind::demand:
        if (q.electric_index >= 0) elec = &in.electric_demands[q.electric_index].consumption_bounds;
        if (q.thermal_index >= 0) heat = &in.thermal_demands[q.thermal_index].consumption_bounds;
        break;
    }
    const bool demand = q.kind == QuantitySource::Kind::demand;
    if (elec) s.realized = demand ? elec->lower : elec->upper;
    if (heat) s.realized_heat = heat->lower;
    if (q.gamma > 0) {
      for (int t = 0; t < T; ++t) {
        const double chi = sol.value(names::rob(q.key, "chi", t));
        const double r = std::round(chi);
        if (std::abs(chi - r) > 1e-6)
          throw InvariantError("fractional worst-case flag " + names::rob(q.key, "chi", t) + " = " +
                               std::to_string(chi));
        if (r > 0.5) s.periods.push_back(t);
        const double y = sol.value(names::rob(q.key, "y", t));
        s.tightening += y;
        if (elec) s.protection_cost += y * dt * mk.dam_price.median[t] * value_scale;
        if (heat) s.protection_cost += y * dt * mk.hpa_price[t];
      }
      for (int t : s.periods) {
        if (elec) s.realized[t] = demand ? elec->upper[t] : elec->lower[t];
        if (heat) s.realized_heat[t] = heat->upper[t];
      }
    }
    rep.quantities.push_back(std::move(s));
  }
  return rep;
}

}  // namespace rvpp::model
