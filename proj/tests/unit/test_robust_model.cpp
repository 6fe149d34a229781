#include <doctest.h>

#include <cmath>
#include <functional>

#include "rvpp/core/budgets.hpp"
#include "rvpp/core/error.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/milp/feasibility.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/invariants.hpp"
#include "rvpp/model/names.hpp"
#include "rvpp/model/robust.hpp"
#include "rvpp/oracle/oracle.hpp"

using namespace rvpp;
using namespace rvpp::model;

namespace {

constexpr milp::SolveOptions kTight{.rel_gap_target = 1e-7};

milp::MilpSolution solve_robust(const RvppInstance& in, const UncertaintyBudgets& b, const MarketSet& ms) {
  const auto m = build_robust(in, b, ms);
  auto s = milp::solve(m, kTight);
  REQUIRE(s.ok());
  CHECK(milp::check_feasibility(m, s.values, milp::default_tolerance(m)).empty());
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// One wind unit selling 10 MW for one hour; nothing else.
RvppInstance single_seller() {
  RvppInstance in;
  in.time_grid = {1, 1.0};
  NdResUnit w;
  w.name = "wf";
  w.kind = NdResKind::wind;
  w.p_max = 10;
  w.production_bounds = BoundSeries::degenerate({10});
  in.ndres_units.push_back(w);
  in.market.dam_price = {{100}, {60}, {120}};
  in.market.srm_up_price = BoundSeries::degenerate({0});
  in.market.srm_down_price = BoundSeries::degenerate({0});
  in.market.hpa_price = {0};
  in.market.kappa = 0.5;
  validate(in);
  return in;
}

}  // namespace

TEST_CASE("protection value is the sum of the largest products") {
  CHECK(protection_value_primal({8, 5, 3}, {1, 1, 1}, 2).value == doctest::Approx(13.0));
  CHECK(protection_value_primal({8, 5, 3}, {1, 1, 1}, 2).periods == std::vector<int>{0, 1});
  CHECK(protection_value_primal({2, 7, 1}, {4, 1, 9}, 0).value == 0.0);
  const Protection tie = protection_value_primal({4, 4, 4}, {1, 1, 1}, 1);
  CHECK(tie.value == doctest::Approx(4.0));
  CHECK(tie.periods == std::vector<int>{0});
  CHECK_THROWS_AS(protection_value_primal({1, -1}, {1, 1}, 1), InvariantError);
  CHECK_THROWS_AS(protection_value_primal({1, 1}, {1, 1}, 3), InvariantError);
}

TEST_CASE("dam weight of the traded-energy auxiliary") {
  CHECK(dam_weight(10, 1, 5, 20) == doctest::Approx(10));
  CHECK(dam_weight(-10, 1, 5, 20) == doctest::Approx(2.5));
  CHECK(dam_weight(-10, 0.5, 30, 10) == doctest::Approx(15));
  CHECK(dam_weight(0, 1, 5, 20) == 0.0);
}

TEST_CASE("zero budgets reproduce the deterministic optimum") {
  for (const RvppInstance& in : {toy_instance(), random_instance(1), random_instance(2), random_instance(3)}) {
    const auto det = milp::solve(build_deterministic(in, MarketSet::all()), kTight);
    const auto rob = solve_robust(in, UncertaintyBudgets{}, MarketSet::all());
    REQUIRE(det.ok());
    CHECK(rel(rob.objective_value, det.objective_value) <= 1e-6);
  }
}

TEST_CASE("a fully protected seller is paid the lower price") {
  const RvppInstance in = single_seller();
  const auto det = milp::solve(build_deterministic(in, MarketSet::dam_only()), kTight);
  CHECK(det.objective_value == doctest::Approx(1000.0));
  UncertaintyBudgets b;
  b.gamma_dam = 1;
  const auto rob = solve_robust(in, b, MarketSet::dam_only());
  CHECK(rob.objective_value == doctest::Approx(600.0));
}

TEST_CASE("more conservative presets cost more") {
  const RvppInstance in = toy_instance();
  double prev = -1e300;
  for (Strategy s : all_strategies()) {
    const auto b = preset_budgets(s, in);
    const double cost = b.all_zero() ? -milp::solve(build_deterministic(in, MarketSet::all()), kTight).objective_value
                                     : -solve_robust(in, b, MarketSet::all()).objective_value;
    CHECK(cost >= prev - 1e-6 * std::max(1.0, std::abs(prev)));
    prev = cost;
  }
  const double opt = -solve_robust(in, preset_budgets(Strategy::optimistic, in), MarketSet::all()).objective_value;
  const double bal = -solve_robust(in, preset_budgets(Strategy::balanced, in), MarketSet::all()).objective_value;
  CHECK(bal > opt);
}

TEST_CASE("cost is non-decreasing in each budget component") {
  const RvppInstance in = toy_instance();
  auto cost = [&](const UncertaintyBudgets& b) { return -solve_robust(in, b, MarketSet::all()).objective_value; };
  const std::vector<std::function<void(UncertaintyBudgets&, int)>> knobs = {
      [](UncertaintyBudgets& b, int g) { b.gamma_dam = g; },
      [](UncertaintyBudgets& b, int g) { b.gamma_srm_up = g; },
      [](UncertaintyBudgets& b, int g) { b.gamma_per_ndres["wf1"] = g; },
      [](UncertaintyBudgets& b, int g) { b.gamma_per_csp["csp"] = g; },
      [](UncertaintyBudgets& b, int g) { b.gamma_per_demand["industry"] = g; },
  };
  for (const auto& knob : knobs) {
    double prev = -1e300;
    for (int g = 0; g <= in.T(); ++g) {
      UncertaintyBudgets b;
      knob(b, g);
      const double c = cost(b);
      CHECK(c >= prev - 1e-6 * std::max(1.0, std::abs(prev)));
      prev = c;
    }
  }
}

TEST_CASE("budgets beyond the horizon are refused") {
  const RvppInstance in = toy_instance();
  UncertaintyBudgets b;
  b.gamma_dam = in.T() + 1;
  CHECK_THROWS_AS(build_robust(in, b, MarketSet::all()), BuildError);
  b.gamma_dam = in.T();
  CHECK_NOTHROW(build_robust(in, b, MarketSet::all()));
  UncertaintyBudgets q;
  q.gamma_per_ndres["nope"] = 1;
  CHECK_THROWS_AS(build_robust(in, q, MarketSet::all()), BuildError);
  CHECK_THROWS_AS(scalar_budgets(in.T() + 1, in), InvariantError);
}

TEST_CASE("worst-case report with zero budgets is empty") {
  const RvppInstance in = toy_instance();
  const auto sol = solve_robust(in, UncertaintyBudgets{}, MarketSet::all());
  const WorstCaseReport r = worst_case_report(sol, in, UncertaintyBudgets{});
  for (const auto* g : {&r.prices, &r.quantities})
    for (const auto& s : *g) {
      CHECK(s.periods.empty());
      CHECK(s.protection_cost == doctest::Approx(0.0));
    }
}

TEST_CASE("worst-case report flags exactly gamma periods") {
  const RvppInstance in = toy_instance();
  UncertaintyBudgets b;
  b.gamma_per_ndres["wf1"] = 2;
  const auto sol = solve_robust(in, b, MarketSet::all());
  const WorstCaseReport r = worst_case_report(sol, in, b);
  bool found = false;
  for (const auto& s : r.quantities)
    if (s.key == "res.wf1") {
      found = true;
      CHECK(s.periods.size() == 2);
      for (int t : s.periods) CHECK(s.realized[t] == doctest::Approx(in.ndres_units[0].production_bounds.lower[t]));
    }
  CHECK(found);
}

TEST_CASE("flagged DAM periods agree with subset enumeration") {
  const RvppInstance in = toy_instance();
  for (int g = 1; g <= in.T(); ++g) {
    UncertaintyBudgets b;
    b.gamma_dam = g;
    const auto sol = solve_robust(in, b, MarketSet::all());
    const WorstCaseReport r = worst_case_report(sol, in, b);
    Series w(static_cast<std::size_t>(in.T()));
    for (int t = 0; t < in.T(); ++t) w[t] = sol.value(names::rob("da", "y", t));
    const auto dev = price_deviations(in.market).dam_down;
    const auto brute = oracle::brute_force_protection(w, dev, g);
    REQUIRE(r.prices[0].key == "da");
    CHECK(r.prices[0].periods == brute.periods);
    CHECK(rel(r.prices[0].protection_cost, brute.value) <= 1e-6);
  }
}

TEST_CASE("strong duality per price source") {
  std::vector<std::pair<RvppInstance, UncertaintyBudgets>> cases;
  const RvppInstance toy = toy_instance();
  for (Strategy s : {Strategy::optimistic, Strategy::balanced}) cases.push_back({toy, preset_budgets(s, toy)});
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    RandomInstanceOptions o;
    o.max_budget = 3;
    RvppInstance in = random_instance(seed, o);
    cases.push_back({in, in.budgets});
  }
  for (const auto& [in, b] : cases) {
    const auto sol = solve_robust(in, b, MarketSet::all());
    for (const auto& d : oracle::price_duality(in, b, sol)) {
      INFO(d.key << " dual " << d.dual << " primal " << d.primal);
      CHECK(d.relative_difference <= 1e-6);
    }
  }
}

TEST_CASE("traded-energy auxiliary is tight at flagged periods") {
  RvppInstance in = toy_instance();
  UncertaintyBudgets b;
  b.gamma_dam = in.T();
  for (const MarketSet& ms : {MarketSet::all(), MarketSet::dam_only()}) {
    const auto sol = solve_robust(in, b, ms);
    const auto pd = price_deviations(in.market);
    for (int t = 0; t < in.T(); ++t) {
      if (pd.dam_down[t] <= 0.0) continue;
      const double expect = dam_weight(sol.value(names::p_da(t)), in.dt(), pd.dam_up[t], pd.dam_down[t]);
      CHECK(sol.value(names::rob("da", "y", t)) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("big-M values leave headroom at the optimum") {
  const RvppInstance in = toy_instance();
  const UncertaintyBudgets b = preset_budgets(Strategy::balanced, in);
  const auto sol = solve_robust(in, b, MarketSet::all());
  for (const auto& q : quantity_sources(in, b)) {
    if (q.gamma == 0) continue;
    const double M = big_m(q);
    const double phi = sol.value(names::rob(q.key, "phi"));
    for (int t = 0; t < in.T(); ++t) {
      CHECK(phi + sol.value(names::rob(q.key, "zeta", t)) <= M - 1.0 + 1e-9);
      CHECK(sol.value(names::rob(q.key, "y", t)) <= M - 1.0 + 1e-9);
    }
  }
}

TEST_CASE("robust schedules satisfy the structural invariants") {
  const RvppInstance in = toy_instance();
  for (Strategy s : {Strategy::optimistic, Strategy::balanced, Strategy::pessimistic}) {
    const auto b = preset_budgets(s, in);
    const auto sol = solve_robust(in, b, MarketSet::all());
    const auto f = check_invariants(extract_first_stage(sol, in, MarketSet::all()), in);
    CHECK(f.empty());
  }
}
