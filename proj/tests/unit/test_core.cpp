#include <doctest.h>
#include <json.hpp>

#include <random>
#include <sstream>

#include "rvpp/core/bounds.hpp"
#include "rvpp/core/budgets.hpp"
#include "rvpp/core/error.hpp"
#include "rvpp/core/instance_io.hpp"
#include "rvpp/core/synthetic.hpp"

using namespace rvpp;
using nlohmann::json;

namespace {

json toy_json() { return json::parse(to_json(toy_instance())); }

json single_period_market() {
  json b = {{"median", {5.0}}, {"lower", {2.0}}, {"upper", {8.0}}};
  return {{"dam_price", b}, {"srm_up_price", b}, {"srm_down_price", b}, {"hpa_price", {60.0}},
          {"kappa", 0.5}, {"t_sr", 5.0}};
}

std::string schema_error_of(const json& doc) {
  try {
    load_instance(doc.dump());
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("instance loading keeps storage fields") {
  json doc = toy_json();
  doc["csp_units"][0]["ts_e_max"] = 1100.0;
  doc["csp_units"][0]["ts_e_min"] = 110.0;
  const RvppInstance in = load_instance(doc.dump());
  REQUIRE(in.csp_units.size() == 1);
  CHECK(in.csp_units[0].ts_e_max == 1100.0);
  CHECK(in.csp_units[0].ts_e_min == 110.0);
}

TEST_CASE("single period with no units is a valid instance") {
  json doc = toy_json();
  doc["time_grid"]["periods"] = {1};
  doc["csp_units"] = json::array();
  doc["ndres_units"] = json::array();
  doc["electric_demands"] = json::array();
  doc["thermal_demands"] = json::array();
  doc["market"] = single_period_market();
  const RvppInstance in = load_instance(doc.dump());
  CHECK(in.T() == 1);
  CHECK(in.csp_units.empty());
  CHECK(in.ndres_units.empty());
}

TEST_CASE("short series is a schema error naming the series") {
  json doc = toy_json();
  doc["ndres_units"][0]["production_bounds"]["upper"].erase(3);
  const std::string msg = schema_error_of(doc);
  CHECK(msg.find("production_bounds") != std::string::npos);
  CHECK(msg.find("upper") != std::string::npos);
}

TEST_CASE("missing key and wrong type are schema errors") {
  json doc = toy_json();
  doc["market"].erase("kappa");
  CHECK(schema_error_of(doc).find("kappa") != std::string::npos);
  doc = toy_json();
  doc["csp_units"][0]["min_up"] = "six";
  CHECK(schema_error_of(doc).find("min_up") != std::string::npos);
}

TEST_CASE("domain violations are invariant errors") {
  json doc = toy_json();
  doc["market"]["dam_price"]["lower"][2] = 500.0;  // above the median
  CHECK_THROWS_AS(load_instance(doc.dump()), InvariantError);
  doc = toy_json();
  doc["market"]["kappa"] = 1.5;
  CHECK_THROWS_AS(load_instance(doc.dump()), InvariantError);
  doc = toy_json();
  doc["csp_units"][0]["pb_breakpoints"] = {35.0, 35.0, 140.0};
  CHECK_THROWS_AS(load_instance(doc.dump()), InvariantError);
  doc = toy_json();
  doc["csp_units"][0]["min_down"] = 0;
  CHECK_THROWS_AS(load_instance(doc.dump()), InvariantError);
}

TEST_CASE("canonical form round-trips") {
  for (const RvppInstance& in : {toy_instance(), reference_instance(), random_instance(3), random_instance(11)}) {
    const std::string a = to_json(in);
    CHECK(to_json(load_instance(a)) == a);
  }
}

TEST_CASE("nominal projection picks the favourable bound") {
  RvppInstance in = toy_instance();
  in.market.dam_price.lower[0] = 2;
  in.market.dam_price.median[0] = 5;
  in.market.dam_price.upper[0] = 8;
  in.ndres_units[0].production_bounds.lower[0] = 10;
  in.ndres_units[0].production_bounds.median[0] = 25;
  in.ndres_units[0].production_bounds.upper[0] = 40;
  in.electric_demands[0].consumption_bounds.lower[0] = 10;
  in.electric_demands[0].consumption_bounds.median[0] = 25;
  in.electric_demands[0].consumption_bounds.upper[0] = 40;
  const RvppInstance n = nominal_projection(in);
  CHECK(n.market.dam_price.median[0] == 5.0);
  CHECK(n.market.dam_price.is_degenerate());
  CHECK(n.ndres_units[0].production_bounds.median[0] == 40.0);
  CHECK(n.electric_demands[0].consumption_bounds.median[0] == 10.0);
  CHECK(n.market.srm_up_price.median == in.market.srm_up_price.upper);
  CHECK(to_json(nominal_projection(n)) == to_json(n));
}

TEST_CASE("deviation conventions") {
  const RvppInstance in = toy_instance();
  const PriceDeviations d = price_deviations(in.market);
  for (int t = 0; t < in.T(); ++t) {
    CHECK(d.dam_up[t] == doctest::Approx(in.market.dam_price.upper[t] - in.market.dam_price.median[t]));
    CHECK(d.dam_down[t] == doctest::Approx(in.market.dam_price.median[t] - in.market.dam_price.lower[t]));
    CHECK(d.srm_up[t] == doctest::Approx(in.market.srm_up_price.upper[t] - in.market.srm_up_price.lower[t]));
  }
  CHECK(spread(in.ndres_units[0].production_bounds)[0] == doctest::Approx(39.0 - 18.0));
}

TEST_CASE("percentiles of constant history") {
  History h(30, Series{4.0, 7.5, 0.0});
  const BoundSeries b = compute_bounds(h, 0.2, 0.8);
  CHECK(b.median == Series{4.0, 7.5, 0.0});
  CHECK(b.lower == b.median);
  CHECK(b.upper == b.median);
}

TEST_CASE("interpolated percentiles of 1..10") {
  History h;
  for (int v = 10; v >= 1; --v) h.push_back({static_cast<double>(v)});
  const BoundSeries b = compute_bounds(h, 0.2, 0.8);
  // positions 0.2*9 = 1.8 and 0.8*9 = 7.2 between order statistics 2,3 and 8,9
  CHECK(b.lower[0] == doctest::Approx(2.8));
  CHECK(b.upper[0] == doctest::Approx(8.2));
  CHECK(b.median[0] == doctest::Approx(5.5));
}

TEST_CASE("compute_bounds preconditions") {
  History h(3, Series{1.0, 2.0});
  CHECK_THROWS_AS(compute_bounds(h, 0.5, 0.5), InvariantError);
  CHECK_THROWS_AS(compute_bounds(History{}, 0.2, 0.8), InvariantError);
  h[1][0] = std::nan("");
  CHECK_THROWS_AS(compute_bounds(h, 0.2, 0.8), InvariantError);
}

TEST_CASE("compute_bounds ordering and serial agreement on random histories") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    const int days = uniform_int(rng, 1, 40), T = uniform_int(rng, 1, 30);
    History h(static_cast<std::size_t>(days), Series(static_cast<std::size_t>(T)));
    for (auto& d : h)
      for (auto& v : d) v = uniform(rng, -50.0, 200.0);
    const double lo = uniform(rng, 0.0, 0.5), hi = uniform(rng, 0.5001, 1.0);
    const BoundSeries b = compute_bounds(h, lo, hi);
    for (int t = 0; t < T; ++t) {
      CHECK(b.lower[t] <= b.median[t]);
      CHECK(b.median[t] <= b.upper[t]);
    }
    const BoundSeries s = compute_bounds_serial(h, lo, hi);
    CHECK(s.lower == b.lower);
    CHECK(s.median == b.median);
    CHECK(s.upper == b.upper);
  }
}

TEST_CASE("history csv") {
  std::istringstream ok("h1,h2,h3\n1,2,3\n4,5,6\n");
  const History h = read_history_csv(ok);
  REQUIRE(h.size() == 2);
  CHECK(h[1] == Series{4, 5, 6});
  std::istringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS(read_history_csv(bad_header));
  std::istringstream ragged("h1,h2\n1,2\n3\n");
  CHECK_THROWS(read_history_csv(ragged));
}

TEST_CASE("presets") {
  CHECK(parse_strategy("balanced") == Strategy::balanced);
  CHECK(parse_strategy("pes") == Strategy::pessimistic);
  CHECK_THROWS_AS(parse_strategy("cautious"), InvariantError);
  const PresetLevels b = preset_levels(Strategy::balanced);
  CHECK(b.prices == 6);
  CHECK(b.wind == 6);
  CHECK(b.pv == 4);
  CHECK(b.solar_field == 4);
  CHECK(b.demands == 6);
  const PresetLevels o = preset_levels(Strategy::optimistic);
  CHECK((o.prices == 3 && o.wind == 3 && o.pv == 2 && o.solar_field == 2 && o.demands == 3));
  const PresetLevels p = preset_levels(Strategy::pessimistic);
  CHECK((p.prices == 9 && p.wind == 9 && p.pv == 6 && p.solar_field == 6 && p.demands == 9));

  const RvppInstance ref = reference_instance();
  const UncertaintyBudgets ub = preset_budgets(Strategy::balanced, ref);
  CHECK(ub.gamma_dam == 6);
  CHECK(ub.csp("csp") == 4);
  CHECK(ub.ndres("wf1") == 6);
  CHECK(ub.ndres("pv1") == 4);
  CHECK(preset_budgets(Strategy::deterministic, ref).all_zero());
  // levels clamp to the horizon
  CHECK(preset_budgets(Strategy::pessimistic, toy_instance()).gamma_dam == 4);
}

TEST_CASE("scalar budgets cap solar sources at daylight") {
  const RvppInstance ref = reference_instance();
  const int day_pv = daylight_periods(ref.ndres_units[2].production_bounds);
  CHECK(day_pv < ref.T());
  const UncertaintyBudgets b = scalar_budgets(ref.T(), ref);
  CHECK(b.gamma_dam == ref.T());
  CHECK(b.ndres("wf1") == ref.T());
  CHECK(b.ndres(ref.ndres_units[2].name) == day_pv);
  CHECK(b.csp("csp") == daylight_periods(ref.csp_units[0].sf_bounds));
  CHECK(scalar_budgets(0, ref).all_zero());
}

TEST_CASE("market sets") {
  CHECK(MarketSet::parse("dam") == MarketSet::dam_only());
  CHECK(MarketSet::parse("hpa,srm,dam") == MarketSet::all());
  CHECK(MarketSet::parse("dam,hpa").label() == "DAM+HPA");
  CHECK_THROWS(MarketSet::parse("srm"));
  const auto all = MarketSet::all_combinations();
  REQUIRE(all.size() == 4);
  CHECK(all[0].label() == "DAM");
  CHECK(all[1].label() == "DAM+HPA");
  CHECK(all[2].label() == "DAM+SRM");
  CHECK(all[3].label() == "DAM+SRM+HPA");
}

TEST_CASE("random instances are reproducible and valid") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const RvppInstance a = random_instance(s), b = random_instance(s);
    CHECK(to_json(a) == to_json(b));
    CHECK_NOTHROW(validate(a));
    CHECK(a.T() <= 12);
  }
}
