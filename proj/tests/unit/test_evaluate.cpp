#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rvpp/core/error.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/evaluate/evaluate.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/deterministic.hpp"

using namespace rvpp;
using namespace rvpp::evaluate;
namespace fs = std::filesystem;

namespace {

const milp::SolveOptions kTight{.rel_gap_target = 1e-7};

RvppInstance one_period_seller() {
  RvppInstance in;
  in.time_grid = {1, 1.0};
  NdResUnit w;
  w.name = "wf";
  w.kind = NdResKind::wind;
  w.p_max = 10;
  w.production_bounds = BoundSeries::from_bounds({5}, {10});
  in.ndres_units.push_back(w);
  in.market.dam_price = BoundSeries::degenerate({100});
  in.market.srm_up_price = BoundSeries::degenerate({0});
  in.market.srm_down_price = BoundSeries::degenerate({0});
  in.market.hpa_price = {0};
  in.market.kappa = 0.5;
  validate(in);
  return in;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rvpp_eval_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("flexibility of a hand-built schedule") {
  RvppInstance in = toy_instance();
  in.time_grid.periods = 2;
  model::FirstStageDecision d;
  d.r_sr_up = {3, 7};
  d.r_sr_down = {0, 0};
  d.ndres.push_back({"wf1", {0, 0}, {3, 7}, {0, 0}});
  in.csp_units.clear();
  in.electric_demands.clear();
  in.ndres_units.resize(1);
  in.ndres_units[0].p_max = 10;
  const FlexibilityTable tab = flexibility_metrics(d, in);
  REQUIRE(tab.rows.size() == 1);
  CHECK(tab.rows[0].total_up == 10.0);
  CHECK(tab.rows[0].up_ratio_pct == doctest::Approx(50.0));  // 100 * 10 / (10 * 2)
  CHECK(tab.rows[0].up_hours == doctest::Approx(1.0));
  CHECK(tab.max_reconcile_residual == 0.0);
}

TEST_CASE("flexibility hours of 289.4 MW against 55 MW") {
  RvppInstance in = reference_instance();
  model::FirstStageDecision d;
  const Series z(24, 0.0);
  Series up(24, 0.0);
  for (int t = 6; t < 18; ++t) up[t] = 289.4 / 12.0;
  d.r_sr_up = up;
  d.r_sr_down = z;
  model::CspSchedule c;
  c.name = "csp";
  c.r_up = up;
  c.r_down = z;
  d.csp.push_back(c);
  in.ndres_units.clear();
  in.electric_demands.clear();
  const FlexibilityTable tab = flexibility_metrics(d, in);
  CHECK(tab.rows[0].capacity == 55.0);
  CHECK(tab.rows[0].total_up == doctest::Approx(289.4));
  CHECK(tab.rows[0].up_hours == doctest::Approx(5.26).epsilon(1e-3));
  CHECK(tab.rows[0].up_ratio_pct == doctest::Approx(100.0 * 289.4 / (55.0 * 24)));
}

TEST_CASE("flexibility without the SRM is all zero and reconciles when solved") {
  const RvppInstance in = toy_instance();
  const Plan none = make_plan(in, Strategy::deterministic, MarketSet::parse("dam,hpa"), kTight);
  for (const auto& r : flexibility_metrics(none.decision, in).rows) {
    CHECK(r.total_up == 0.0);
    CHECK(r.total_down == 0.0);
  }
  const Plan full = make_plan(in, Strategy::deterministic, MarketSet::all(), kTight);
  CHECK(flexibility_metrics(full.decision, in).max_reconcile_residual <= 1e-6);
}

TEST_CASE("budget sweep") {
  const RvppInstance in = toy_instance();
  const auto single = budget_sweep(in, {0}, MarketSet::all(), kTight);
  REQUIRE(single.size() == 1);
  const double det = -milp::solve(model::build_deterministic(in, MarketSet::all()), kTight).objective_value;
  CHECK(single[0].cost == doctest::Approx(det));

  const auto curve = budget_sweep(in, {0, 1, 2, 3, 4}, MarketSet::all(), kTight);
  CHECK(sweep_decreases(curve, 1e-6).empty());
  for (const auto& p : curve) {
    if (p.csp_energy == 0.0) CHECK((p.csp_reserve_up == 0.0 && p.csp_reserve_down == 0.0));
    CHECK(p.cost == doctest::Approx(-p.objective));
  }
  const auto serial = budget_sweep(in, {0, 1, 2, 3, 4}, MarketSet::all(), kTight, false);
  for (std::size_t i = 0; i < curve.size(); ++i) CHECK(serial[i].cost == curve[i].cost);
  CHECK_THROWS_AS(budget_sweep(in, {5}, MarketSet::all()), InvariantError);
}

TEST_CASE("sweep decrease detection") {
  std::vector<SweepPoint> c(3);
  c[0].cost = 100;
  c[1].cost = 99.995;
  c[2].cost = 90;
  const auto d = sweep_decreases(c, 1e-4);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == 1);
}

TEST_CASE("strategy matrix on the toy instance") {
  const RvppInstance in = toy_instance();
  const auto mx = strategy_matrix(in, all_strategies(), MarketSet::all_combinations(), kTight);
  for (std::size_t i = 0; i < mx.strategies.size(); ++i) CHECK(market_order_violations(mx, i, 1e-6).empty());
  for (std::size_t j = 0; j < mx.markets.size(); ++j)
    for (std::size_t i = 1; i < mx.strategies.size(); ++i)
      CHECK(mx.cost[i][j] >= mx.cost[i - 1][j] - 1e-6 * std::max(1.0, std::abs(mx.cost[i - 1][j])));
  const Plan direct = make_plan(in, Strategy::balanced, MarketSet::dam_only(), kTight);
  CHECK(mx.cost[2][0] == doctest::Approx(direct.cost).epsilon(1e-6));
  CHECK(first_line(strategy_matrix_csv(mx)) == "strategy,DAM,DAM+HPA,DAM+SRM,DAM+SRM+HPA");
}

TEST_CASE("market order violations are named") {
  StrategyMatrix mx{{Strategy::deterministic}, MarketSet::all_combinations(), {{10, 11, 9, 8}}};
  const auto v = market_order_violations(mx, 0, 1e-9);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "DAM < DAM+HPA");
}

TEST_CASE("HPA tariffs") {
  const RvppInstance in = reference_instance();
  const auto res = hpa_price_sensitivity(in, default_hpa_variants(in), UncertaintyBudgets{}, MarketSet::all());
  REQUIRE(res.size() == 4);
  CHECK(res[0].name == "tou");
  CHECK(res[1].cost >= res[2].cost - 1e-4 * std::abs(res[2].cost));
  CHECK(res[2].cost >= res[3].cost - 1e-4 * std::abs(res[3].cost));

  const RvppInstance toy = toy_instance();
  const auto free = hpa_price_sensitivity(toy, {{"free", Series(4, 0.0)}}, UncertaintyBudgets{}, MarketSet::all(), kTight);
  double demand = 0.0;
  for (double h : toy.thermal_demands[0].consumption_bounds.lower) demand += h;
  CHECK(free[0].csp_heat == doctest::Approx(0.0));
  CHECK(free[0].hpa_heat >= demand - 1e-6);
  CHECK_THROWS_AS(hpa_price_sensitivity(toy, {{"short", Series(3, 0.0)}}, UncertaintyBudgets{}, MarketSet::all()),
                  InvariantError);
}

TEST_CASE("sampling") {
  CHECK(parse_distribution("triangular") == Distribution::triangular);
  CHECK_THROWS_AS(parse_distribution("normal"), InvariantError);
  CHECK_THROWS_AS(sample_scenarios(toy_instance(), 0, 1), InvariantError);

  const RvppInstance nominal = nominal_projection(toy_instance());
  const auto one = sample_scenarios(nominal, 1, 99);
  CHECK(one[0].dam_price == nominal.market.dam_price.median);
  CHECK(one[0].production[0] == nominal.ndres_units[0].production_bounds.median);

  const RvppInstance in = toy_instance();
  for (Distribution dist : {Distribution::uniform, Distribution::triangular}) {
    const auto a = sample_scenarios(in, 50, 5, dist), b = sample_scenarios(in, 50, 5, dist);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].dam_price == b[i].dam_price);
      CHECK(a[i].thermal == b[i].thermal);
      for (int t = 0; t < in.T(); ++t) {
        CHECK(a[i].dam_price[t] >= in.market.dam_price.lower[t]);
        CHECK(a[i].dam_price[t] <= in.market.dam_price.upper[t]);
        CHECK(a[i].solar_field[0][t] <= in.csp_units[0].sf_bounds.upper[t]);
        CHECK(a[i].electric[0][t] >= in.electric_demands[0].consumption_bounds.lower[t]);
      }
    }
  }
  // the list is a prefix-stable function of (seed, index)
  const auto longer = sample_scenarios(in, 80, 5);
  CHECK(longer[49].production == sample_scenarios(in, 50, 5)[49].production);
}

TEST_CASE("uniform samples: range and mean") {
  const RvppInstance in = toy_instance();
  const int n = 10000;
  const auto s = sample_scenarios(in, n, 123);
  const double lo = in.market.dam_price.lower[1], hi = in.market.dam_price.upper[1];
  double sum = 0.0, mn = 1e300, mx = -1e300;
  for (const auto& sc : s) {
    sum += sc.dam_price[1];
    mn = std::min(mn, sc.dam_price[1]);
    mx = std::max(mx, sc.dam_price[1]);
  }
  CHECK(mn >= lo);
  CHECK(mx <= hi);
  const double sigma = (hi - lo) / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(sum / n - 0.5 * (lo + hi)) <= 3.0 * sigma);
}

TEST_CASE("nominal scenario costs the plan and nothing more") {
  const RvppInstance in = toy_instance();
  const Plan p = make_plan(in, Strategy::deterministic, MarketSet::all(), kTight);
  const auto rep = out_of_sample(p, in, {nominal_scenario(in)}, default_penalty(in));
  CHECK(rep.avg_penalty == doctest::Approx(0.0));
  CHECK(rep.avg_cost == doctest::Approx(p.cost).epsilon(1e-6));
}

TEST_CASE("a 5 MW shortfall on a 10 MW sale pays five units of penalty") {
  const RvppInstance in = one_period_seller();
  const Plan p = make_plan(in, UncertaintyBudgets{}, MarketSet::dam_only(), kTight);
  REQUIRE(p.decision.p_da[0] == doctest::Approx(10.0));
  SampledScenario s = nominal_scenario(in);
  s.production[0] = {5.0};
  const PenaltyConfig pen{200.0, 200.0, 200.0};
  const ScenarioOutcome o = evaluate_scenario(p, in, s, pen);
  CHECK(o.energy_imbalance == doctest::Approx(5.0));
  CHECK(o.penalty == doctest::Approx(5.0 * 200.0));
  CHECK(o.cost == doctest::Approx(-1000.0));
}

TEST_CASE("out-of-sample report arithmetic and ordering") {
  const RvppInstance in = toy_instance();
  const auto scen = sample_scenarios(in, 40, 7);
  const auto pen = default_penalty(in);
  CHECK(pen.energy == doctest::Approx(1.5 * 156.8));
  const Plan det = make_plan(in, Strategy::deterministic, MarketSet::all(), kTight);
  const Plan pes = make_plan(in, Strategy::pessimistic, MarketSet::all(), kTight);
  const auto a = out_of_sample(det, in, scen, pen);
  const auto b = out_of_sample(pes, in, scen, pen);
  CHECK(a.avg_net == a.avg_cost + a.avg_penalty);
  CHECK(b.avg_penalty <= a.avg_penalty);
  CHECK(b.avg_cost >= a.avg_cost);

  const auto serial = out_of_sample_serial(det, in, scen, pen);
  CHECK(serial.avg_cost == a.avg_cost);
  CHECK(serial.avg_penalty == a.avg_penalty);

  const std::vector<SampledScenario> subset(scen.begin(), scen.begin() + 10);
  CHECK(out_of_sample(det, in, subset, pen).max_penalty <= a.max_penalty);
  CHECK_THROWS_AS(out_of_sample(det, in, {}, pen), InvariantError);
}

TEST_CASE("csv formatting and headers") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1234567.0) == "1.23457e+06");
  CHECK(format_number(-24380.7049) == "-24380.7");
  CHECK(first_line(budget_sweep_csv({})) ==
        "gamma,cost,objective,energy_sold,energy_bought,reserve_up,reserve_down,hpa_heat,csp_reserve_up,"
        "csp_reserve_down,csp_energy");
  CHECK(first_line(flexibility_csv({})) ==
        "unit,kind,capacity,total_up,total_down,up_ratio_pct,down_ratio_pct,up_hours,down_hours");
  CHECK(first_line(hpa_sensitivity_csv({})) == "variant,cost,hpa_heat,csp_heat");
  CHECK(first_line(out_of_sample_csv({})) == "strategy,scenarios,avg_cost,avg_penalty,avg_net,max_penalty");
  CHECK(first_line(out_of_sample_detail_csv({})) ==
        "strategy,scenario,cost,penalty,net,energy_imbalance,reserve_shortfall,heat_shortfall");
}

TEST_CASE("atomic writes refuse to overwrite without force") {
  const fs::path dir = scratch("atomic");
  const fs::path f = dir / "nested" / "out.csv";
  write_file_atomic(f, "a\n", false);
  CHECK_THROWS_AS(write_file_atomic(f, "b\n", false), Error);
  write_file_atomic(f, "c\n", true);
  std::ifstream in(f);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "c\n");
  CHECK_FALSE(fs::exists(dir / "nested" / "out.csv.tmp"));
  fs::remove_all(dir);
}
