#include "rvpp/core/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rvpp/core/error.hpp"

namespace rvpp {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SchemaError(path + ": " + msg); }

// Reader over one JSON object that tracks which keys were consumed so that
// unknown keys can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) fail(path_, "missing key '" + key + "'");
    return *it;
  }

  std::string sub(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) { return as_number(at(key), sub(key)); }

  double number_or(const std::string& key, double dflt) { return has(key) ? number(key) : dflt; }

  int integer(const std::string& key) { return as_integer(at(key), sub(key)); }

  int integer_or(const std::string& key, int dflt) { return has(key) ? integer(key) : dflt; }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) fail(sub(key), "expected a string");
    return v.get<std::string>();
  }

  Series series(const std::string& key, int T) { return as_series(at(key), sub(key), T); }

  // Scalar values are broadcast to all periods.
  Series series_or_scalar(const std::string& key, int T) {
    const json& v = at(key);
    if (v.is_number()) return Series(static_cast<std::size_t>(T), as_number(v, sub(key)));
    return as_series(v, sub(key), T);
  }

  std::vector<double> vector(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail(sub(key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], sub(key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  BoundSeries bounds(const std::string& key, int T) {
    ObjectReader r(at(key), sub(key));
    BoundSeries b;
    b.median = r.series("median", T);
    b.lower = r.series("lower", T);
    b.upper = r.series("upper", T);
    r.finish();
    return b;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(path_, "unknown key '" + it.key() + "'");
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "not a finite number");
    return d;
  }

  static int as_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
      double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    fail(path, "expected an integer");
  }

  static Series as_series(const json& v, const std::string& path, int T) {
    if (!v.is_array()) fail(path, "expected an array of " + std::to_string(T) + " numbers");
    if (static_cast<int>(v.size()) != T)
      fail(path, "expected " + std::to_string(T) + " entries, got " + std::to_string(v.size()));
    Series s(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      const json& e = v[static_cast<std::size_t>(t)];
      if (!e.is_number()) fail(path + "[period " + std::to_string(t + 1) + "]", "expected a number");
      s[static_cast<std::size_t>(t)] = e.get<double>();
      if (!std::isfinite(s[static_cast<std::size_t>(t)]))
        fail(path + "[period " + std::to_string(t + 1) + "]", "not a finite number");
    }
    return s;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void for_each_item(ObjectReader& parent, const std::string& key, F&& f) {
  const json& arr = parent.at(key);
  if (!arr.is_array()) fail(parent.sub(key), "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader r(arr[i], parent.sub(key) + "[" + std::to_string(i) + "]");
    f(r);
    r.finish();
  }
}

std::map<std::string, int> budget_map(ObjectReader& r, const std::string& key) {
  std::map<std::string, int> m;
  if (!r.has(key)) return m;
  const json& v = r.at(key);
  if (!v.is_object()) fail(r.sub(key), "expected an object keyed by unit name");
  for (auto it = v.begin(); it != v.end(); ++it)
    m[it.key()] = ObjectReader::as_integer(it.value(), r.sub(key) + "." + it.key());
  return m;
}

RvppInstance parse(const json& doc) {
  RvppInstance in;
  ObjectReader root(doc, "$");
  in.schema_version = root.integer("schema_version");
  if (in.schema_version != kSchemaVersion)
    fail("$.schema_version", "unsupported version " + std::to_string(in.schema_version) + " (expected " +
                                 std::to_string(kSchemaVersion) + ")");

  {
    ObjectReader g(root.at("time_grid"), "$.time_grid");
    const json& p = g.at("periods");
    if (!p.is_array() || p.empty()) fail("$.time_grid.periods", "expected a non-empty array");
    for (std::size_t i = 0; i < p.size(); ++i) {
      int v = ObjectReader::as_integer(p[i], "$.time_grid.periods[" + std::to_string(i) + "]");
      if (v != static_cast<int>(i) + 1)
        fail("$.time_grid.periods[" + std::to_string(i) + "]", "periods must be 1..T in order");
    }
    in.time_grid.periods = static_cast<int>(p.size());
    in.time_grid.delta_t = g.number("delta_t");
    g.finish();
  }
  const int T = in.T();

  for_each_item(root, "csp_units", [&](ObjectReader& r) {
    CspUnit c;
    c.name = r.string("name");
    c.sf_max_thermal = r.number("sf_max_thermal");
    c.pb_breakpoints = r.vector("pb_breakpoints");
    c.pb_efficiencies = r.vector("pb_efficiencies");
    c.pb_max = r.number("pb_max");
    c.pb_min = r.number("pb_min");
    c.turbine_max = r.number("turbine_max");
    c.turbine_min = r.number("turbine_min");
    c.startup_loss_k = r.number_or("startup_loss_k", 0.2);
    c.heat_efficiency = r.number("heat_efficiency");
    c.min_up = r.integer("min_up");
    c.min_down = r.integer("min_down");
    c.initial_on = r.integer_or("initial_on", 0);
    c.initial_off = r.integer_or("initial_off", 0);
    c.ts_e_max = r.number("ts_e_max");
    c.ts_e_min = r.number("ts_e_min");
    c.ts_charge_max = r.number("ts_charge_max");
    c.ts_charge_min = r.number("ts_charge_min");
    c.ts_discharge_max = r.number("ts_discharge_max");
    c.ts_discharge_min = r.number("ts_discharge_min");
    c.ts_eta_charge = r.number("ts_eta_charge");
    c.ts_eta_discharge = r.number("ts_eta_discharge");
    c.srm_ramp_up = r.number("srm_ramp_up");
    c.srm_ramp_down = r.number("srm_ramp_down");
    c.srm_capacity_share = r.number("srm_capacity_share");
    c.op_cost = r.number("op_cost");
    c.sf_bounds = r.bounds("sf_bounds", T);
    in.csp_units.push_back(std::move(c));
  });

  for_each_item(root, "ndres_units", [&](ObjectReader& r) {
    NdResUnit u;
    u.name = r.string("name");
    std::string kind = r.string("kind");
    if (kind == "wind")
      u.kind = NdResKind::wind;
    else if (kind == "pv")
      u.kind = NdResKind::pv;
    else
      fail(r.sub("kind"), "expected 'wind' or 'pv', got '" + kind + "'");
    u.p_max = r.number("p_max");
    u.p_min = r.number("p_min");
    u.srm_ramp_up = r.number("srm_ramp_up");
    u.srm_ramp_down = r.number("srm_ramp_down");
    u.op_cost = r.number("op_cost");
    u.production_bounds = r.bounds("production_bounds", T);
    in.ndres_units.push_back(std::move(u));
  });

  for_each_item(root, "electric_demands", [&](ObjectReader& r) {
    ElectricDemand d;
    d.name = r.string("name");
    d.p_max = r.number("p_max");
    d.p_min = r.number("p_min");
    d.min_energy = r.number("min_energy");
    d.beta_up = r.series_or_scalar("beta_up", T);
    d.beta_down = r.series_or_scalar("beta_down", T);
    d.srm_ramp_up = r.number("srm_ramp_up");
    d.srm_ramp_down = r.number("srm_ramp_down");
    d.consumption_bounds = r.bounds("consumption_bounds", T);
    in.electric_demands.push_back(std::move(d));
  });

  for_each_item(root, "thermal_demands", [&](ObjectReader& r) {
    ThermalDemand d;
    d.name = r.string("name");
    d.h_max = r.number("h_max");
    d.h_min = r.number("h_min");
    d.min_energy = r.number("min_energy");
    d.consumption_bounds = r.bounds("consumption_bounds", T);
    in.thermal_demands.push_back(std::move(d));
  });

  {
    ObjectReader m(root.at("market"), "$.market");
    in.market.dam_price = m.bounds("dam_price", T);
    in.market.srm_up_price = m.bounds("srm_up_price", T);
    in.market.srm_down_price = m.bounds("srm_down_price", T);
    in.market.hpa_price = m.series("hpa_price", T);
    in.market.kappa = m.number("kappa");
    in.market.t_sr = m.number("t_sr");
    m.finish();
  }

  if (root.has("budgets")) {
    ObjectReader b(root.at("budgets"), "$.budgets");
    in.budgets.gamma_dam = b.integer_or("gamma_dam", 0);
    in.budgets.gamma_srm_up = b.integer_or("gamma_srm_up", 0);
    in.budgets.gamma_srm_down = b.integer_or("gamma_srm_down", 0);
    in.budgets.gamma_per_csp = budget_map(b, "gamma_per_csp");
    in.budgets.gamma_per_ndres = budget_map(b, "gamma_per_ndres");
    in.budgets.gamma_per_demand = budget_map(b, "gamma_per_demand");
    b.finish();
  }
  root.finish();
  return in;
}

ojson bounds_json(const BoundSeries& b) {
  ojson j;
  j["median"] = b.median;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  return j;
}

}  // namespace

RvppInstance load_instance(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  RvppInstance in = parse(doc);
  validate(in);
  return in;
}

RvppInstance load_instance_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SchemaError("cannot open instance file '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return load_instance(ss.str());
}

std::string to_json(const RvppInstance& in) {
  ojson root;
  root["schema_version"] = in.schema_version;
  std::vector<int> periods(static_cast<std::size_t>(in.T()));
  for (int t = 0; t < in.T(); ++t) periods[static_cast<std::size_t>(t)] = t + 1;
  root["time_grid"] = ojson{{"periods", periods}, {"delta_t", in.dt()}};

  root["csp_units"] = ojson::array();
  for (const auto& c : in.csp_units) {
    ojson j;
    j["name"] = c.name;
    j["sf_max_thermal"] = c.sf_max_thermal;
    j["pb_breakpoints"] = c.pb_breakpoints;
    j["pb_efficiencies"] = c.pb_efficiencies;
    j["pb_max"] = c.pb_max;
    j["pb_min"] = c.pb_min;
    j["turbine_max"] = c.turbine_max;
    j["turbine_min"] = c.turbine_min;
    j["startup_loss_k"] = c.startup_loss_k;
    j["heat_efficiency"] = c.heat_efficiency;
    j["min_up"] = c.min_up;
    j["min_down"] = c.min_down;
    j["initial_on"] = c.initial_on;
    j["initial_off"] = c.initial_off;
    j["ts_e_max"] = c.ts_e_max;
    j["ts_e_min"] = c.ts_e_min;
    j["ts_charge_max"] = c.ts_charge_max;
    j["ts_charge_min"] = c.ts_charge_min;
    j["ts_discharge_max"] = c.ts_discharge_max;
    j["ts_discharge_min"] = c.ts_discharge_min;
    j["ts_eta_charge"] = c.ts_eta_charge;
    j["ts_eta_discharge"] = c.ts_eta_discharge;
    j["srm_ramp_up"] = c.srm_ramp_up;
    j["srm_ramp_down"] = c.srm_ramp_down;
    j["srm_capacity_share"] = c.srm_capacity_share;
    j["op_cost"] = c.op_cost;
    j["sf_bounds"] = bounds_json(c.sf_bounds);
    root["csp_units"].push_back(std::move(j));
  }

  root["ndres_units"] = ojson::array();
  for (const auto& u : in.ndres_units) {
    ojson j;
    j["name"] = u.name;
    j["kind"] = to_string(u.kind);
    j["p_max"] = u.p_max;
    j["p_min"] = u.p_min;
    j["srm_ramp_up"] = u.srm_ramp_up;
    j["srm_ramp_down"] = u.srm_ramp_down;
    j["op_cost"] = u.op_cost;
    j["production_bounds"] = bounds_json(u.production_bounds);
    root["ndres_units"].push_back(std::move(j));
  }

  root["electric_demands"] = ojson::array();
  for (const auto& d : in.electric_demands) {
    ojson j;
    j["name"] = d.name;
    j["p_max"] = d.p_max;
    j["p_min"] = d.p_min;
    j["min_energy"] = d.min_energy;
    j["beta_up"] = d.beta_up;
    j["beta_down"] = d.beta_down;
    j["srm_ramp_up"] = d.srm_ramp_up;
    j["srm_ramp_down"] = d.srm_ramp_down;
    j["consumption_bounds"] = bounds_json(d.consumption_bounds);
    root["electric_demands"].push_back(std::move(j));
  }

  root["thermal_demands"] = ojson::array();
  for (const auto& d : in.thermal_demands) {
    ojson j;
    j["name"] = d.name;
    j["h_max"] = d.h_max;
    j["h_min"] = d.h_min;
    j["min_energy"] = d.min_energy;
    j["consumption_bounds"] = bounds_json(d.consumption_bounds);
    root["thermal_demands"].push_back(std::move(j));
  }

  ojson m;
  m["dam_price"] = bounds_json(in.market.dam_price);
  m["srm_up_price"] = bounds_json(in.market.srm_up_price);
  m["srm_down_price"] = bounds_json(in.market.srm_down_price);
  m["hpa_price"] = in.market.hpa_price;
  m["kappa"] = in.market.kappa;
  m["t_sr"] = in.market.t_sr;
  root["market"] = std::move(m);

  ojson b;
  b["gamma_dam"] = in.budgets.gamma_dam;
  b["gamma_srm_up"] = in.budgets.gamma_srm_up;
  b["gamma_srm_down"] = in.budgets.gamma_srm_down;
  b["gamma_per_csp"] = ojson::object();
  for (const auto& [k, v] : in.budgets.gamma_per_csp) b["gamma_per_csp"][k] = v;
  b["gamma_per_ndres"] = ojson::object();
  for (const auto& [k, v] : in.budgets.gamma_per_ndres) b["gamma_per_ndres"][k] = v;
  b["gamma_per_demand"] = ojson::object();
  for (const auto& [k, v] : in.budgets.gamma_per_demand) b["gamma_per_demand"][k] = v;
  root["budgets"] = std::move(b);

  return root.dump(2) + "\n";
}

void save_instance_file(const RvppInstance& instance, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << to_json(instance);
}

}  // namespace rvpp
