#include <algorithm>
#include <cmath>
#include <random>

#include "rvpp/core/synthetic.hpp"
#include "rvpp/evaluate/evaluate.hpp"

namespace rvpp::evaluate {

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform") return Distribution::uniform;
  if (name == "triangular") return Distribution::triangular;
  throw InvariantError("unknown distribution '" + name + "' (expected uniform or triangular)");
}

const char* to_string(Distribution d) { return d == Distribution::uniform ? "uniform" : "triangular"; }

namespace {

double triangular(double u, double lo, double mode, double hi) {
  if (hi <= lo) return lo;
  const double f = (mode - lo) / (hi - lo);
  if (u < f) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
  return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
}

Series draw(std::mt19937_64& rng, const BoundSeries& b, Distribution d) {
  Series s(b.size());
  for (std::size_t t = 0; t < b.size(); ++t) {
    const double u = uniform01(rng);
    const double v = d == Distribution::uniform ? b.lower[t] + u * (b.upper[t] - b.lower[t])
                                                : triangular(u, b.lower[t], b.median[t], b.upper[t]);
    s[t] = std::clamp(v, b.lower[t], b.upper[t]);
  }
  return s;
}

}  // namespace

std::vector<SampledScenario> sample_scenarios(const RvppInstance& in, int n, std::uint64_t seed, Distribution d) {
  if (n < 1) throw InvariantError("sample_scenarios: n must be at least 1");
  std::vector<SampledScenario> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    SampledScenario& s = out[static_cast<std::size_t>(i)];
    s.dam_price = draw(rng, in.market.dam_price, d);
    s.srm_up_price = draw(rng, in.market.srm_up_price, d);
    s.srm_down_price = draw(rng, in.market.srm_down_price, d);
    for (const auto& c : in.csp_units) s.solar_field.push_back(draw(rng, c.sf_bounds, d));
    for (const auto& r : in.ndres_units) s.production.push_back(draw(rng, r.production_bounds, d));
    for (const auto& e : in.electric_demands) s.electric.push_back(draw(rng, e.consumption_bounds, d));
    for (const auto& h : in.thermal_demands) s.thermal.push_back(draw(rng, h.consumption_bounds, d));
  }
  return out;
}

SampledScenario nominal_scenario(const RvppInstance& in) {
  SampledScenario s;
  s.dam_price = in.market.dam_price.median;
  s.srm_up_price = in.market.srm_up_price.upper;
  s.srm_down_price = in.market.srm_down_price.upper;
  for (const auto& c : in.csp_units) s.solar_field.push_back(c.sf_bounds.upper);
  for (const auto& r : in.ndres_units) s.production.push_back(r.production_bounds.upper);
  for (const auto& e : in.electric_demands) s.electric.push_back(e.consumption_bounds.lower);
  for (const auto& h : in.thermal_demands) s.thermal.push_back(h.consumption_bounds.lower);
  return s;
}

RvppInstance realize(const RvppInstance& in, const SampledScenario& s) {
  RvppInstance r = in;
  auto degenerate = [](const Series& v) { return BoundSeries{v, v, v}; };
  r.market.dam_price = degenerate(s.dam_price);
  r.market.srm_up_price = degenerate(s.srm_up_price);
  r.market.srm_down_price = degenerate(s.srm_down_price);
  for (std::size_t i = 0; i < r.csp_units.size(); ++i) r.csp_units[i].sf_bounds = degenerate(s.solar_field[i]);
  for (std::size_t i = 0; i < r.ndres_units.size(); ++i)
    r.ndres_units[i].production_bounds = degenerate(s.production[i]);
  for (std::size_t i = 0; i < r.electric_demands.size(); ++i)
    r.electric_demands[i].consumption_bounds = degenerate(s.electric[i]);
  for (std::size_t i = 0; i < r.thermal_demands.size(); ++i)
    r.thermal_demands[i].consumption_bounds = degenerate(s.thermal[i]);
  return r;
}

}  // namespace rvpp::evaluate
