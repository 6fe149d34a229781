#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rvpp/core/error.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/robust.hpp"
#include "rvpp/oracle/oracle.hpp"

using namespace rvpp;
using namespace rvpp::oracle;

namespace {

Series random_series(std::mt19937_64& rng, int T, double hi) {
  Series s(static_cast<std::size_t>(T));
  // Coarse values make ties common.
  for (auto& v : s) v = std::round(uniform(rng, 0.0, hi));
  return s;
}

RvppInstance wind_and_demand() {
  RvppInstance in;
  in.time_grid = {2, 1.0};
  NdResUnit w;
  w.name = "wf";
  w.kind = NdResKind::wind;
  w.p_max = 30;
  w.srm_ramp_up = w.srm_ramp_down = 10;
  w.op_cost = 15;
  w.production_bounds = BoundSeries::from_bounds({12, 16}, {24, 28});
  in.ndres_units.push_back(w);
  ElectricDemand d;
  d.name = "load";
  d.p_max = 20;
  d.min_energy = 10;
  d.beta_up = d.beta_down = {0.1, 0.1};
  d.srm_ramp_up = d.srm_ramp_down = 10;
  d.consumption_bounds = BoundSeries::from_bounds({5, 6}, {8, 9});
  in.electric_demands.push_back(d);
  in.market.dam_price = {{80, 95}, {60, 70}, {90, 110}};
  in.market.srm_up_price = BoundSeries::from_bounds({5, 5}, {10, 12});
  in.market.srm_down_price = BoundSeries::from_bounds({3, 3}, {6, 8});
  in.market.hpa_price = {50, 50};
  in.market.kappa = 0.3;
  validate(in);
  return in;
}

}  // namespace

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == 10.0);
  CHECK(binomial(24, 12) == 2704156.0);
  CHECK(binomial(3, 4) == 0.0);
  CHECK(binomial(3, -1) == 0.0);
}

TEST_CASE("enumeration examples") {
  const Subset a = brute_force_protection({8, 5, 3}, {1, 1, 1}, 2);
  CHECK(a.value == 13.0);
  CHECK(a.periods == std::vector<int>{0, 1});

  const Series w{3, 1, 4, 1, 5}, d{2, 7, 1, 8, 2};
  const Subset full = brute_force_protection(w, d, 5);
  CHECK(full.value == 3 * 2 + 7 + 4 + 8 + 10);
  CHECK(full.periods == std::vector<int>{0, 1, 2, 3, 4});

  const Subset zero = brute_force_protection({9, 9, 9, 9}, {0, 0, 0, 0}, 3);
  CHECK(zero.value == 0.0);
  CHECK(zero.periods == std::vector<int>{0, 1, 2});

  const Subset none = brute_force_protection(w, d, 0);
  CHECK(none.value == 0.0);
  CHECK(none.periods.empty());
}

TEST_CASE("enumeration refuses oversized or malformed input") {
  const Series w(30, 1.0);
  CHECK_THROWS_AS(brute_force_protection(w, w, 15, 1e6), EnumerationLimitError);
  CHECK_THROWS_AS(brute_force_protection({1, 2}, {1}, 1), InvariantError);
  CHECK_THROWS_AS(brute_force_protection({1, 2}, {1, 2}, 3), InvariantError);
}

TEST_CASE("enumeration equals sort-and-sum, serial equals parallel") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 300; ++rep) {
    const int T = uniform_int(rng, 1, rep < 280 ? 12 : 20);
    const int g = uniform_int(rng, 0, T);
    const Series w = random_series(rng, T, 6.0), d = random_series(rng, T, 4.0);
    const Subset par = brute_force_protection(w, d, g);
    const Subset ser = brute_force_protection_serial(w, d, g);
    const auto primal = model::protection_value_primal(w, d, g);
    CHECK(par.value == doctest::Approx(primal.value));
    CHECK(par.periods == primal.periods);
    CHECK(par.value == ser.value);
    CHECK(par.periods == ser.periods);
  }
}

TEST_CASE("duality gap") {
  const Series w{8, 5, 3}, d{1, 1, 1};
  CHECK(duality_gap(w, d, 1, 8.0, {0, 0, 0}) == doctest::Approx(0.0));
  CHECK(duality_gap(w, d, 1, 0.0, {8, 5, 3}) == doctest::Approx(16.0 - 8.0));
  CHECK(duality_gap(w, d, 2, 3.0, {5, 2, 0}) == doctest::Approx(0.0));
  try {
    duality_gap(w, d, 1, 4.0, {4, 0, 0});
    FAIL("dual infeasible point accepted");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("period 2") != std::string::npos);
  }
  CHECK_THROWS_AS(duality_gap(w, d, 1, -1.0, {9, 6, 4}), InvariantError);
}

TEST_CASE("weak duality on random dual-feasible points") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    const int T = uniform_int(rng, 1, 10);
    const int g = uniform_int(rng, 0, T);
    const Series w = random_series(rng, T, 5.0), d = random_series(rng, T, 5.0);
    const double phi = uniform(rng, 0.0, 25.0);
    Series z(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) z[t] = std::max(0.0, w[t] * d[t] - phi) + uniform(rng, 0.0, 2.0);
    CHECK(duality_gap(w, d, g, phi, z) >= -1e-9);
  }
}

TEST_CASE("zero budgets: the oracle reproduces the deterministic optimum") {
  const RvppInstance in = toy_instance();
  const OracleReport r = brute_force_robust(in, UncertaintyBudgets{}, MarketSet::all());
  const auto det = milp::solve(model::build_deterministic(in, MarketSet::all()), {.rel_gap_target = 1e-9});
  CHECK(r.combinations == 1);
  CHECK(r.infeasible == 0);
  CHECK(r.matches(1e-6));
  CHECK(std::abs(r.worst_case_objective - det.objective_value) <= 1e-6 * std::max(1.0, std::abs(det.objective_value)));
}

TEST_CASE("one wind budget over two periods enumerates two subsets") {
  const RvppInstance in = wind_and_demand();
  UncertaintyBudgets b;
  b.gamma_per_ndres["wf"] = 1;
  const OracleReport r = brute_force_robust(in, b, MarketSet::all());
  CHECK(r.combinations == 2);
  CHECK(r.matches(1e-6));
  INFO("infeasible realizations: " << r.infeasible);
}

TEST_CASE("price-only uncertainty: oracle agrees and nothing is infeasible") {
  const RvppInstance in = toy_instance();
  UncertaintyBudgets b;
  b.gamma_dam = 2;
  b.gamma_srm_up = 1;
  b.gamma_srm_down = 3;
  const OracleReport r = brute_force_robust(in, b, MarketSet::all());
  CHECK(r.combinations == 6 * 4 * 4);
  CHECK(r.infeasible == 0);
  CHECK(r.matches(1e-6));
}

TEST_CASE("serial and parallel robust evaluation agree") {
  RandomInstanceOptions o;
  o.max_periods = 5;
  o.max_budget = 2;
  const RvppInstance in = random_instance(77, o);
  const auto sol = milp::solve(model::build_robust(in, in.budgets, MarketSet::all()), {.rel_gap_target = 1e-9});
  REQUIRE(sol.ok());
  OracleOptions par, ser;
  ser.parallel = false;
  const OracleReport a = evaluate_robust_solution(in, in.budgets, MarketSet::all(), sol, par);
  const OracleReport b = evaluate_robust_solution(in, in.budgets, MarketSet::all(), sol, ser);
  CHECK(a.worst_case_objective == b.worst_case_objective);
  CHECK(a.worst_combination == b.worst_combination);
  CHECK(a.infeasible == b.infeasible);
  CHECK(a.first_infeasible == b.first_infeasible);
}

TEST_CASE("robust enumeration refuses oversized products") {
  const RvppInstance in = toy_instance();
  UncertaintyBudgets b;
  b.gamma_dam = 2;
  b.gamma_srm_up = 2;
  OracleOptions o;
  o.max_subsets = 35;  // 6 * 6 = 36 combinations
  CHECK_THROWS_AS(brute_force_robust(in, b, MarketSet::all(), o), EnumerationLimitError);
  o.max_subsets = 36;
  CHECK(brute_force_robust(in, b, MarketSet::all(), o).combinations == 36);
}
