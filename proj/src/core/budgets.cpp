#include "rvpp/core/budgets.hpp"

#include <algorithm>
#include <cctype>

#include "rvpp/core/error.hpp"

namespace rvpp {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::deterministic: return "deterministic";
    case Strategy::optimistic: return "optimistic";
    case Strategy::balanced: return "balanced";
    case Strategy::pessimistic: return "pessimistic";
  }
  return "?";
}

Strategy parse_strategy(const std::string& text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "deterministic" || t == "det") return Strategy::deterministic;
  if (t == "optimistic" || t == "opt") return Strategy::optimistic;
  if (t == "balanced" || t == "bal") return Strategy::balanced;
  if (t == "pessimistic" || t == "pes") return Strategy::pessimistic;
  throw InvariantError("unknown preset '" + text + "' (expected deterministic|optimistic|balanced|pessimistic)");
}

std::vector<Strategy> all_strategies() {
  return {Strategy::deterministic, Strategy::optimistic, Strategy::balanced, Strategy::pessimistic};
}

PresetLevels preset_levels(Strategy s) {
  switch (s) {
    case Strategy::deterministic: return {0, 0, 0, 0, 0};
    case Strategy::optimistic: return {3, 3, 2, 2, 3};
    case Strategy::balanced: return {6, 6, 4, 4, 6};
    case Strategy::pessimistic: return {9, 9, 6, 6, 9};
  }
  return {};
}

namespace {

void assign_demands(UncertaintyBudgets& b, const RvppInstance& in, int level) {
  for (const auto& d : in.electric_demands) b.gamma_per_demand[d.name] = level;
  for (const auto& d : in.thermal_demands) b.gamma_per_demand[d.name] = level;
}

}  // namespace

UncertaintyBudgets preset_budgets(Strategy s, const RvppInstance& in) {
  const PresetLevels L = preset_levels(s);
  const int T = in.T();
  auto clamp = [T](int g) { return std::min(g, T); };
  UncertaintyBudgets b;
  b.gamma_dam = b.gamma_srm_up = b.gamma_srm_down = clamp(L.prices);
  for (const auto& c : in.csp_units) b.gamma_per_csp[c.name] = clamp(L.solar_field);
  for (const auto& r : in.ndres_units) b.gamma_per_ndres[r.name] = clamp(r.kind == NdResKind::pv ? L.pv : L.wind);
  assign_demands(b, in, clamp(L.demands));
  return b;
}

int daylight_periods(const BoundSeries& b) {
  return static_cast<int>(std::count_if(b.upper.begin(), b.upper.end(), [](double v) { return v > 0.0; }));
}

UncertaintyBudgets scalar_budgets(int gamma, const RvppInstance& in) {
  const int T = in.T();
  if (gamma < 0 || gamma > T)
    throw InvariantError("scalar budget " + std::to_string(gamma) + " outside [0, " + std::to_string(T) + "]");
  UncertaintyBudgets b;
  b.gamma_dam = b.gamma_srm_up = b.gamma_srm_down = gamma;
  for (const auto& c : in.csp_units) b.gamma_per_csp[c.name] = std::min(gamma, daylight_periods(c.sf_bounds));
  for (const auto& r : in.ndres_units)
    b.gamma_per_ndres[r.name] =
        r.kind == NdResKind::pv ? std::min(gamma, daylight_periods(r.production_bounds)) : gamma;
  assign_demands(b, in, gamma);
  return b;
}

}  // namespace rvpp
