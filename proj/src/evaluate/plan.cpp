#include <algorithm>
#include <cmath>

#include "rvpp/evaluate/evaluate.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/robust.hpp"

namespace rvpp::evaluate {

namespace {

std::string budget_label(const UncertaintyBudgets& b) {
  if (b.all_zero()) return "deterministic";
  return "robust(" + std::to_string(b.gamma_dam) + "," + std::to_string(b.gamma_srm_up) + "," +
         std::to_string(b.gamma_srm_down) + ")";
}

}  // namespace

Plan make_plan(const RvppInstance& in, const UncertaintyBudgets& budgets, const MarketSet& ms,
               const milp::SolveOptions& opt) {
  Plan p;
  p.label = budget_label(budgets);
  p.budgets = budgets;
  p.markets = ms;
  p.robust = !budgets.all_zero();
  const milp::MilpModel m = p.robust ? model::build_robust(in, budgets, ms) : model::build_deterministic(in, ms);
  p.solution = milp::solve(m, opt);
  if (!p.solution.has_solution())
    throw SolveFailure(p.label + " " + ms.label() + ": " + milp::to_string(p.solution.status) +
                           (p.solution.message.empty() ? "" : " (" + p.solution.message + ")"),
                       p.solution.status);
  p.decision = model::extract_first_stage(p.solution, in, ms);
  p.objective = p.solution.objective_value;
  p.cost = -p.objective;
  return p;
}

Plan make_plan(const RvppInstance& in, Strategy s, const MarketSet& ms, const milp::SolveOptions& opt) {
  Plan p = make_plan(in, preset_budgets(s, in), ms, opt);
  p.label = to_string(s);
  return p;
}

FlexibilityTable flexibility_metrics(const model::FirstStageDecision& d, const RvppInstance& in) {
  const int T = in.T();
  FlexibilityTable tab;
  auto row = [&](std::string unit, std::string kind, double cap, const Series& up, const Series& dn) {
    FlexibilityRow r;
    r.unit = std::move(unit);
    r.kind = std::move(kind);
    r.capacity = cap;
    for (int t = 0; t < T; ++t) r.total_up += up[t], r.total_down += dn[t];
    if (cap > 0.0) {
      r.up_ratio_pct = 100.0 * r.total_up / (cap * T);
      r.down_ratio_pct = 100.0 * r.total_down / (cap * T);
      r.up_hours = r.total_up / cap;
      r.down_hours = r.total_down / cap;
    }
    tab.rows.push_back(std::move(r));
  };
  for (std::size_t i = 0; i < d.csp.size(); ++i)
    row(d.csp[i].name, "csp", in.csp_units[i].turbine_max, d.csp[i].r_up, d.csp[i].r_down);
  for (std::size_t i = 0; i < d.ndres.size(); ++i)
    row(d.ndres[i].name, to_string(in.ndres_units[i].kind), in.ndres_units[i].p_max, d.ndres[i].r_up,
        d.ndres[i].r_down);
  for (std::size_t i = 0; i < d.electric.size(); ++i)
    row(d.electric[i].name, "demand", in.electric_demands[i].p_max, d.electric[i].r_up, d.electric[i].r_down);
  for (int t = 0; t < T; ++t) {
    double up = 0.0, dn = 0.0;
    for (const auto& c : d.csp) up += c.r_up[t], dn += c.r_down[t];
    for (const auto& r : d.ndres) up += r.r_up[t], dn += r.r_down[t];
    for (const auto& e : d.electric) up += e.r_up[t], dn += e.r_down[t];
    tab.max_reconcile_residual = std::max(
        {tab.max_reconcile_residual, std::abs(up - d.r_sr_up[t]), std::abs(dn - d.r_sr_down[t])});
  }
  return tab;
}

namespace {

SweepPoint summarize(int gamma, const Plan& p, double dt) {
  SweepPoint s;
  s.gamma = gamma;
  s.cost = p.cost;
  s.objective = p.objective;
  const auto& d = p.decision;
  for (std::size_t t = 0; t < d.p_da.size(); ++t) {
    if (d.p_da[t] > 0.0)
      s.energy_sold += d.p_da[t] * dt;
    else
      s.energy_bought -= d.p_da[t] * dt;
    s.reserve_up += d.r_sr_up[t];
    s.reserve_down += d.r_sr_down[t];
    s.hpa_heat += d.h_hpa[t] * dt;
    for (const auto& c : d.csp) {
      s.csp_reserve_up += c.r_up[t];
      s.csp_reserve_down += c.r_down[t];
      s.csp_energy += c.p[t] * dt;
    }
  }
  return s;
}

}  // namespace

std::vector<SweepPoint> budget_sweep(const RvppInstance& in, const std::vector<int>& gammas, const MarketSet& ms,
                                     const milp::SolveOptions& opt, bool parallel) {
  for (int g : gammas)
    if (g < 0 || g > in.T())
      throw InvariantError("budget_sweep: gamma " + std::to_string(g) + " outside [0, " + std::to_string(in.T()) +
                           "]");
  const int n = static_cast<int>(gammas.size());
  std::vector<SweepPoint> out(gammas.size());
  std::vector<std::string> errors(gammas.size());
  std::vector<milp::SolveStatus> status(gammas.size(), milp::SolveStatus::optimal);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = summarize(gammas[i], make_plan(in, scalar_budgets(gammas[i], in), ms, opt), in.dt());
    } catch (const SolveFailure& e) {
      errors[i] = e.what();
      status[i] = e.status;
    } catch (const std::exception& e) {
      errors[i] = e.what();
      status[i] = milp::SolveStatus::error;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty())
      throw SolveFailure("budget_sweep: gamma " + std::to_string(gammas[i]) + ": " + errors[i], status[i]);
  return out;
}

std::vector<std::size_t> sweep_decreases(const std::vector<SweepPoint>& c, double rel_tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i + 1].cost < c[i].cost - rel_tol * std::max(1.0, std::abs(c[i].cost))) out.push_back(i);
  return out;
}

StrategyMatrix strategy_matrix(const RvppInstance& in, const std::vector<Strategy>& strategies,
                               const std::vector<MarketSet>& markets, const milp::SolveOptions& opt, bool parallel) {
  StrategyMatrix mx{strategies, markets, {}};
  mx.cost.assign(strategies.size(), std::vector<double>(markets.size(), 0.0));
  const int cells = static_cast<int>(strategies.size() * markets.size());
  std::vector<std::string> errors(static_cast<std::size_t>(cells));
  std::vector<milp::SolveStatus> status(static_cast<std::size_t>(cells), milp::SolveStatus::optimal);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int c = 0; c < cells; ++c) {
    const std::size_t i = static_cast<std::size_t>(c) / markets.size();
    const std::size_t j = static_cast<std::size_t>(c) % markets.size();
    try {
      mx.cost[i][j] = make_plan(in, strategies[i], markets[j], opt).cost;
    } catch (const SolveFailure& e) {
      errors[c] = e.what();
      status[c] = e.status;
    } catch (const std::exception& e) {
      errors[c] = e.what();
      status[c] = milp::SolveStatus::error;
    }
  }
  for (int c = 0; c < cells; ++c)
    if (!errors[c].empty()) throw SolveFailure("strategy_matrix: " + errors[c], status[c]);
  return mx;
}

std::vector<std::string> market_order_violations(const StrategyMatrix& mx, std::size_t row, double rel_tol) {
  auto col = [&](const MarketSet& m) -> double {
    for (std::size_t j = 0; j < mx.markets.size(); ++j)
      if (mx.markets[j] == m) return mx.cost[row][j];
    throw InvariantError("market_order_violations: market set " + m.label() + " missing from the matrix");
  };
  const auto sets = MarketSet::all_combinations();  // DAM, DAM+HPA, DAM+SRM, DAM+SRM+HPA
  const double dam = col(sets[0]), hpa = col(sets[1]), srm = col(sets[2]), full = col(sets[3]);
  std::vector<std::string> out;
  auto ge = [&](double a, double b, const char* what) {
    if (a < b - rel_tol * std::max(1.0, std::abs(b))) out.push_back(what);
  };
  ge(dam, hpa, "DAM < DAM+HPA");
  ge(hpa, full, "DAM+HPA < DAM+SRM+HPA");
  ge(dam, srm, "DAM < DAM+SRM");
  ge(srm, full, "DAM+SRM < DAM+SRM+HPA");
  return out;
}

std::vector<HpaVariant> default_hpa_variants(const RvppInstance& in) {
  const auto T = static_cast<std::size_t>(in.T());
  return {{"tou", in.market.hpa_price}, {"flat70", Series(T, 70.0)}, {"flat60", Series(T, 60.0)},
          {"flat50", Series(T, 50.0)}};
}

std::vector<HpaResult> hpa_price_sensitivity(const RvppInstance& in, const std::vector<HpaVariant>& variants,
                                             const UncertaintyBudgets& budgets, const MarketSet& ms,
                                             const milp::SolveOptions& opt) {
  std::vector<HpaResult> out;
  for (const auto& v : variants) {
    if (v.price.size() != static_cast<std::size_t>(in.T()))
      throw InvariantError("hpa_price_sensitivity: variant '" + v.name + "' has the wrong length");
    RvppInstance r = in;
    r.market.hpa_price = v.price;
    const Plan p = make_plan(r, budgets, ms, opt);
    HpaResult h{v.name, p.cost, 0.0, 0.0};
    for (std::size_t t = 0; t < p.decision.h_hpa.size(); ++t) {
      h.hpa_heat += p.decision.h_hpa[t] * in.dt();
      for (const auto& c : p.decision.csp) h.csp_heat += c.heat[t] * in.dt();
    }
    out.push_back(h);
  }
  return out;
}

}  // namespace rvpp::evaluate
