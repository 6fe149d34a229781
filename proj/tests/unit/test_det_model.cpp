#include <doctest.h>

#include <cmath>

#include "rvpp/core/error.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/milp/feasibility.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/decision.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/invariants.hpp"
#include "rvpp/model/names.hpp"

using namespace rvpp;
using namespace rvpp::model;

namespace {

struct Solved {
  milp::MilpModel model;
  milp::MilpSolution solution;
  FirstStageDecision decision;
};

Solved solve_det(const RvppInstance& in, const MarketSet& ms) {
  Solved s{build_deterministic(in, ms), {}, {}};
  s.solution = milp::solve(s.model, {.rel_gap_target = 1e-6});
  REQUIRE(s.solution.ok());
  s.decision = extract_first_stage(s.solution, in, ms);
  return s;
}

// The 24-period solve takes a few seconds; share it.
const Solved& reference_solved() {
  static const Solved s = solve_det(reference_instance(), MarketSet::all());
  return s;
}

const Solved& solved(const RvppInstance& in) {
  static const Solved toy = solve_det(toy_instance(), MarketSet::all());
  return in.T() == 24 ? reference_solved() : toy;
}

std::string failures(const std::vector<InvariantFailure>& f) {
  std::string out;
  for (const auto& x : f) out += x.check + ": " + x.detail + "\n";
  return out;
}

// Thermal demand needs the HPA or a CSP unit.
bool buildable(const RvppInstance& in, const MarketSet& ms) {
  return ms.hpa_enabled || !in.csp_units.empty() || in.thermal_demands.empty();
}

bool has(const std::vector<InvariantFailure>& f, const std::string& check) {
  for (const auto& x : f)
    if (x.check == check) return true;
  return false;
}

FirstStageDecision zero_decision(const RvppInstance& in) {
  const Series z(static_cast<std::size_t>(in.T()), 0.0);
  FirstStageDecision d;
  d.p_da = d.r_sr_up = d.r_sr_down = d.h_hpa = z;
  for (const auto& c : in.csp_units) {
    CspSchedule s;
    s.name = c.name;
    s.p = s.heat = s.r_up = s.r_down = z;
    d.csp.push_back(s);
  }
  for (const auto& r : in.ndres_units) d.ndres.push_back({r.name, z, z, z});
  for (const auto& e : in.electric_demands) d.electric.push_back({e.name, z, z, z});
  for (const auto& h : in.thermal_demands) d.thermal.push_back({h.name, z});
  return d;
}

}  // namespace

TEST_CASE("without the SRM every reserve variable is fixed at zero") {
  const RvppInstance in = toy_instance();
  const MarketSet ms = MarketSet::parse("dam,hpa");
  const Solved s = solve_det(in, ms);
  for (int t = 0; t < in.T(); ++t) {
    const auto& up = s.model.var(s.model.var_id(names::r_sr_up(t)));
    CHECK(up.upper == 0.0);
    CHECK(s.decision.r_sr_up[t] == 0.0);
    CHECK(s.decision.r_sr_down[t] == 0.0);
    for (const auto& r : s.decision.ndres) CHECK((r.r_up[t] == 0.0 && r.r_down[t] == 0.0));
    // the three activation copies of the balance coincide
    CHECK(balance_residual(s.decision, t, Scenario::up) == doctest::Approx(balance_residual(s.decision, t, Scenario::none)));
  }
  CHECK(check_invariants(s.decision, in).empty());
}

TEST_CASE("without the HPA no heat is bought") {
  const RvppInstance in = toy_instance();
  const Solved s = solve_det(in, MarketSet::parse("dam,srm"));
  for (double h : s.decision.h_hpa) CHECK(h == 0.0);
}

TEST_CASE("power block input stays within its thermal maximum in every scenario") {
  const RvppInstance in = reference_instance();
  const Solved& s = reference_solved();
  const PwlPoints pts = pwl_points(in.csp_units[0]);
  CHECK(pts.input.back() == 140.0);
  const auto& c = s.decision.csp[0];
  for (int k = 0; k < 3; ++k)
    for (int t = 0; t < in.T(); ++t) {
      double input = 0.0;
      for (std::size_t j = 0; j < pts.input.size(); ++j) input += c.x[k][t][j] * pts.input[j];
      CHECK(input <= 140.0 + 1e-6);
    }
}

TEST_CASE("below the first breakpoint the turbine output is zero") {
  const PwlPoints pts = pwl_points(toy_instance().csp_units[0]);
  REQUIRE(pts.input.size() == 5);
  CHECK(pts.input[1] == 35.0);
  CHECK(pts.output[0] == 0.0);
  CHECK(pts.output[1] == 0.0);
  CHECK(pts.output[2] == doctest::Approx(0.27 * 35.0));

  for (const RvppInstance& in : {toy_instance(), reference_instance()}) {
    const Solved& s = solved(in);
    const auto& c = s.decision.csp[0];
    for (int t = 0; t < in.T(); ++t)
      if (c.p_pb[t] < 35.0 - 1e-6) CHECK(c.p[t] == doctest::Approx(0.0));
  }
}

TEST_CASE("balance holds in all three activation scenarios") {
  for (const RvppInstance& in : {toy_instance(), reference_instance(), random_instance(5), random_instance(9)}) {
    const Solved s = in.T() == 24 ? reference_solved() : solve_det(in, MarketSet::all());
    double scale = 1.0;
    for (const auto& r : in.ndres_units) scale += r.p_max;
    for (const auto& c : in.csp_units) scale += c.turbine_max;
    for (const auto& e : in.electric_demands) scale += e.p_max;
    for (int t = 0; t < in.T(); ++t)
      for (Scenario sc : kScenarios) CHECK(std::abs(balance_residual(s.decision, t, sc)) <= 1e-6 * scale);
  }
}

TEST_CASE("a unit that is off produces and reserves nothing") {
  RvppInstance in = toy_instance();
  for (auto* v : {&in.csp_units[0].sf_bounds.lower, &in.csp_units[0].sf_bounds.median, &in.csp_units[0].sf_bounds.upper})
    std::fill(v->begin(), v->end(), 0.0);
  const Solved s = solve_det(in, MarketSet::all());
  const auto& c = s.decision.csp[0];
  for (int t = 0; t < in.T(); ++t) {
    CHECK(c.u[t] == 0.0);
    CHECK(c.p[t] == 0.0);
    CHECK(c.r_up[t] == 0.0);
    CHECK(c.r_down[t] == 0.0);
  }
  for (const RvppInstance& other : {toy_instance(), reference_instance()}) {
    const Solved& o = solved(other);
    for (const auto& cs : o.decision.csp)
      for (int t = 0; t < other.T(); ++t)
        if (cs.u[t] < 0.5) CHECK((cs.p[t] == 0.0 && cs.r_up[t] == 0.0 && cs.r_down[t] == 0.0));
  }
}

TEST_CASE("total cost arithmetic") {
  RvppInstance in = toy_instance();
  FirstStageDecision d = zero_decision(in);
  CHECK(total_cost(d, in) == 0.0);
  in.market.dam_price.median[0] = 100.0;
  d.p_da[0] = 10.0;
  CHECK(total_cost(d, in) == doctest::Approx(-1000.0));
  d.p_da[0] = 0.0;
  d.csp[0].p[1] = 12.0;
  d.csp[0].heat[1] = 8.0;
  CHECK(in.csp_units[0].op_cost == 25.0);
  CHECK(total_cost(d, in) == doctest::Approx(500.0));
}

TEST_CASE("total cost equals the negated optimum") {
  for (const RvppInstance& in : {toy_instance(), reference_instance()}) {
    const Solved& s = solved(in);
    CHECK(total_cost(s.decision, in) == doctest::Approx(-s.solution.objective_value).epsilon(1e-6));
  }
}

TEST_CASE("structural invariants hold on solved instances") {
  std::vector<RvppInstance> corpus = {toy_instance(), reference_instance()};
  for (std::uint64_t seed = 100; seed < 112; ++seed) corpus.push_back(random_instance(seed));
  for (const auto& in : corpus)
    for (const MarketSet& ms : MarketSet::all_combinations()) {
      if (!buildable(in, ms)) continue;
      const Solved s = solve_det(in, ms);
      const auto f = check_invariants(s.decision, in);
      INFO(failures(f));
      CHECK(f.empty());
    }
}

TEST_CASE("invariant checker catches broken schedules") {
  const RvppInstance in = reference_instance();
  const Solved& s = reference_solved();
  REQUIRE(check_invariants(s.decision, in).empty());
  int on = -1;
  for (int t = 0; t < in.T(); ++t)
    if (s.decision.csp[0].u[t] > 0.5) on = t;
  REQUIRE(on >= 0);

  FirstStageDecision d = s.decision;
  auto& x = d.csp[0].x[index(Scenario::none)][on];
  std::fill(x.begin(), x.end(), 0.0);
  x.front() = 0.5;
  x.back() = 0.5;
  CHECK(has(check_invariants(d, in), "sos2"));

  d = s.decision;
  d.csp[0].p_charge[on] = 10.0;
  d.csp[0].p_discharge[on] = 10.0;
  CHECK(has(check_invariants(d, in), "ts_exclusive"));

  d = s.decision;
  d.csp[0].energy.back() += 50.0;
  CHECK(has(check_invariants(d, in), "ts_cyclic"));

  d = s.decision;
  d.p_da[0] += 1.0;
  CHECK(has(check_invariants(d, in), "balance"));

  d = s.decision;
  std::fill(d.csp[0].u.begin(), d.csp[0].u.end(), 0.0);
  d.csp[0].u[0] = 1.0;  // a one-period run against a minimum of six
  CHECK(has(check_invariants(d, in), "min_up_down"));
}

TEST_CASE("removing a market cannot lower the cost") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const RvppInstance in = random_instance(seed);
    if (!buildable(in, MarketSet::dam_only())) continue;
    const double dam = -solve_det(in, MarketSet::dam_only()).solution.objective_value;
    const double srm = -solve_det(in, MarketSet::parse("dam,srm")).solution.objective_value;
    const double hpa = -solve_det(in, MarketSet::parse("dam,hpa")).solution.objective_value;
    const double tol = 1e-6 * std::max(1.0, std::abs(dam));
    CHECK(dam >= srm - tol);
    CHECK(dam >= hpa - tol);
  }
}

TEST_CASE("statically infeasible data is rejected at build time") {
  RvppInstance in = toy_instance();
  in.csp_units.clear();
  CHECK_THROWS_AS(build_deterministic(in, MarketSet::parse("dam,srm")), BuildError);
  CHECK_NOTHROW(build_deterministic(in, MarketSet::all()));
  CHECK_THROWS_AS(build_deterministic(toy_instance(), MarketSet{false, true, true}), BuildError);
}

TEST_CASE("decoding a foreign solution names the missing variable") {
  const Solved s = solve_det(toy_instance(), MarketSet::all());
  RvppInstance other = toy_instance();
  other.ndres_units[0].name = "renamed";
  CHECK_THROWS_AS(extract_first_stage(s.solution, other, MarketSet::all()), InvariantError);
}
