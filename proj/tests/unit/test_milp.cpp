#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "rvpp/core/budgets.hpp"
#include "rvpp/core/error.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/milp/feasibility.hpp"
#include "rvpp/milp/mps.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/names.hpp"
#include "rvpp/model/robust.hpp"

using namespace rvpp;
using namespace rvpp::milp;

namespace {

MilpModel unit_box() {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  m.add_objective_term(x, 1.0);
  return m;
}

struct Knapsack {
  std::vector<double> value{10, 13, 7, 8, 4};
  std::vector<double> weight{5, 6, 4, 3, 2};
  double capacity = 11;
};

MilpModel knapsack_model(const Knapsack& k) {
  MilpModel m;
  std::vector<Term> cap;
  for (std::size_t i = 0; i < k.value.size(); ++i) {
    const VarId v = m.add_binary("take" + std::to_string(i));
    m.add_objective_term(v, k.value[i]);
    cap.push_back({v, k.weight[i]});
  }
  m.add_constraint("capacity", cap, Sense::le, k.capacity);
  return m;
}

}  // namespace

TEST_CASE("minimal model exports an objective-only ROWS section") {
  const std::string text = export_mps(unit_box()).text;
  const auto rows = text.find("ROWS\n"), cols = text.find("COLUMNS\n");
  REQUIRE(rows != std::string::npos);
  CHECK(text.substr(rows, cols - rows) == "ROWS\n N  OBJ\n");
  CHECK(text.find(" UP BND       x         1\n") != std::string::npos);
  CHECK(text.find("ENDATA") != std::string::npos);
}

TEST_CASE("export is byte-identical across runs and builds") {
  CHECK(export_mps(unit_box()).text == export_mps(unit_box()).text);
  const RvppInstance ref = reference_instance();
  const auto a = export_mps(model::build_robust(ref, preset_budgets(Strategy::balanced, ref), MarketSet::all()));
  const auto b = export_mps(model::build_robust(ref, preset_budgets(Strategy::balanced, ref), MarketSet::all()));
  CHECK(a.text == b.text);
}

TEST_CASE("long names are mangled to eight characters with a dictionary") {
  MilpModel m;
  const VarId a = m.add_continuous("a_really_long_name[1]");
  const VarId b = m.add_continuous("a_really_long_name[2]");
  m.add_constraint("row one", {{a, 1.0}, {b, 1.0}}, Sense::le, 3.0);
  m.add_objective_term(a, 1.0);
  const MpsExport e = export_mps(m);
  REQUIRE(e.column_names.size() == 2);
  CHECK(e.column_names[0] != e.column_names[1]);
  for (const auto& n : e.column_names) CHECK(n.size() <= 8);
  for (const auto& n : e.row_names) CHECK(n.size() <= 8);
  CHECK(e.text.find("* C " + e.column_names[0] + " a_really_long_name[1]") != std::string::npos);
}

TEST_CASE("mangling that runs out of suffixes is reported") {
  MilpModel m;
  for (int i = 0; i < 40; ++i) m.add_continuous("same_prefix_" + std::to_string(i));
  MpsOptions o;
  o.suffix_width = 1;  // 36 suffixes for the prefix
  CHECK_THROWS_AS(export_mps(m, o), Error);
}

TEST_CASE("mps numbers") {
  CHECK(mps_number(1.0) == "1");
  CHECK(mps_number(-0.25) == "-0.25");
  CHECK(mps_number(0.1).size() <= 12);
  CHECK(mps_number(1.0 / 3.0).size() <= 12);
  CHECK(std::abs(std::stod(mps_number(1.0 / 3.0)) - 1.0 / 3.0) < 1e-9);
  CHECK(mps_number(1e-17).size() <= 12);
}

TEST_CASE("solve unit box") {
  const MilpSolution s = solve(unit_box());
  CHECK(s.status == SolveStatus::optimal);
  CHECK(s.objective_value == doctest::Approx(1.0));
  CHECK(s.value("x") == doctest::Approx(1.0));
}

TEST_CASE("contradictory bounds are infeasible") {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, kInf);
  m.add_constraint("lo", {{x, 1.0}}, Sense::ge, 2.0);
  m.add_constraint("hi", {{x, 1.0}}, Sense::le, 1.0);
  m.add_objective_term(x, 1.0);
  CHECK(solve(m).status == SolveStatus::infeasible);
}

TEST_CASE("knapsack matches enumeration of all assignments") {
  const Knapsack k;
  double best = 0.0;
  for (int mask = 0; mask < 32; ++mask) {
    double v = 0.0, w = 0.0;
    for (int i = 0; i < 5; ++i)
      if (mask >> i & 1) v += k.value[i], w += k.weight[i];
    if (w <= k.capacity) best = std::max(best, v);
  }
  const MilpModel m = knapsack_model(k);
  const MilpSolution s = solve(m, {.rel_gap_target = 0.0});
  CHECK(s.ok());
  CHECK(s.objective_value == doctest::Approx(best));
  CHECK(check_feasibility(m, s.values, default_tolerance(m)).empty());
}

TEST_CASE("feasibility checker reports the violated equality with its slack") {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, 10.0);
  const VarId y = m.add_continuous("y", 0.0, 10.0);
  m.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Sense::eq, 3.0);
  m.add_constraint("cap", {{x, 1.0}}, Sense::le, 5.0);
  const auto v = check_feasibility(m, std::vector<double>{1.0, 2.5}, 1e-6);
  REQUIRE(v.size() == 1);
  CHECK(v[0].name == "sum");
  CHECK(v[0].amount == doctest::Approx(0.5));
  CHECK_FALSE(describe(v[0]).empty());
  CHECK(check_feasibility(m, std::vector<double>{1.0, 2.0}, 1e-6).empty());
  CHECK_THROWS_AS(check_feasibility(m, std::unordered_map<std::string, double>{{"x", 1.0}}, 1e-6), InvariantError);
}

TEST_CASE("bound and integrality violations are reported") {
  MilpModel m;
  m.add_binary("b");
  m.add_continuous("c", 0.0, 1.0);
  const auto v = check_feasibility(m, std::vector<double>{0.5, 2.0}, 1e-6);
  REQUIRE(v.size() == 2);
  CHECK(v[0].kind == Violation::Kind::integrality);
  CHECK(v[1].kind == Violation::Kind::upper_bound);
}

TEST_CASE("solved deterministic model passes the feasibility check") {
  const RvppInstance in = toy_instance();
  const MilpModel m = model::build_deterministic(in, MarketSet::all());
  const MilpSolution s = solve(m, {.rel_gap_target = 1e-6});
  REQUIRE(s.ok());
  CHECK(check_feasibility(m, s.values, default_tolerance(m)).empty());
}

TEST_CASE("flipping a flagged worst-case binary breaks a big-M row") {
  const RvppInstance in = toy_instance();
  const UncertaintyBudgets b = preset_budgets(Strategy::balanced, in);
  const MilpModel m = model::build_robust(in, b, MarketSet::all());
  const MilpSolution s = solve(m, {.rel_gap_target = 1e-6});
  REQUIRE(s.ok());
  CHECK(check_feasibility(m, s.values, default_tolerance(m)).empty());
  std::vector<double> x = s.values;
  const VarId chi = m.var_id(model::names::rob("res.wf1", "chi", 0));
  REQUIRE(x[chi.index] > 0.5);
  x[chi.index] = 0.0;
  bool big_m = false;
  for (const auto& v : check_feasibility(m, x, default_tolerance(m)))
    big_m = big_m || v.name == model::names::rob("res.wf1", "ym", 0);
  CHECK(big_m);
}

TEST_CASE("unknown backend is rejected") { CHECK_THROWS_AS(make_backend("gurobi"), SolverError); }

TEST_CASE("highs and cbc agree on the toy corpus") {
  if (cbc_executable().empty()) {
    MESSAGE("CBC not available; cross-solver check skipped");
    return;
  }
  const auto highs = make_backend("highs");
  const auto cbc = make_backend("cbc");
  const RvppInstance in = toy_instance();
  for (const MilpModel& m : {model::build_deterministic(in, MarketSet::all()),
                             model::build_deterministic(in, MarketSet::dam_only()),
                             model::build_robust(in, preset_budgets(Strategy::optimistic, in), MarketSet::all()),
                             knapsack_model({})}) {
    const MilpSolution a = highs->solve(m, {.rel_gap_target = 0.0});
    const MilpSolution b = cbc->solve(m, {.rel_gap_target = 0.0});
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(std::abs(a.objective_value - b.objective_value) <= 1e-6 * std::max(1.0, std::abs(a.objective_value)));
    CHECK(check_feasibility(m, b.values, default_tolerance(m)).empty());
  }
}
