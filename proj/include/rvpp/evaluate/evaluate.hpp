#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rvpp/core/budgets.hpp"
#include "rvpp/core/error.hpp"
#include "rvpp/core/types.hpp"
#include "rvpp/milp/model.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/decision.hpp"

namespace rvpp::evaluate {

// Solve ended without an incumbent. `status` tells infeasible from the rest.
class SolveFailure : public SolverError {
 public:
  SolveFailure(const std::string& what, milp::SolveStatus status) : SolverError(what), status(status) {}
  milp::SolveStatus status;
};

struct Plan {
  std::string label;
  UncertaintyBudgets budgets;
  MarketSet markets;
  bool robust = false;
  milp::MilpSolution solution;
  model::FirstStageDecision decision;
  double objective = 0.0;  // profit net of protection
  double cost = 0.0;       // -objective
};

// Deterministic model when every budget is zero, robust model otherwise.
// Throws SolveFailure when the solver returns no incumbent.
Plan make_plan(const RvppInstance& instance, const UncertaintyBudgets& budgets, const MarketSet& markets,
               const milp::SolveOptions& options = {});
Plan make_plan(const RvppInstance& instance, Strategy strategy, const MarketSet& markets,
               const milp::SolveOptions& options = {});

// ---- flexibility ----

struct FlexibilityRow {
  std::string unit;
  std::string kind;  // csp, wind, pv, demand
  double capacity = 0.0;
  double total_up = 0.0;    // MW summed over periods
  double total_down = 0.0;
  double up_ratio_pct = 0.0;    // 100 * total / (capacity * T)
  double down_ratio_pct = 0.0;
  double up_hours = 0.0;    // total / capacity
  double down_hours = 0.0;
};

struct FlexibilityTable {
  std::vector<FlexibilityRow> rows;
  double max_reconcile_residual = 0.0;  // max_t |sum of unit reserves - traded reserve|
};

FlexibilityTable flexibility_metrics(const model::FirstStageDecision& decision, const RvppInstance& instance);

// ---- budget sweep ----

struct SweepPoint {
  int gamma = 0;
  double cost = 0.0;
  double objective = 0.0;
  double energy_sold = 0.0;    // MWh
  double energy_bought = 0.0;  // MWh
  double reserve_up = 0.0;     // MW summed over periods
  double reserve_down = 0.0;
  double hpa_heat = 0.0;       // MWh
  double csp_reserve_up = 0.0;
  double csp_reserve_down = 0.0;
  double csp_energy = 0.0;     // MWh
};

// Budgets per point come from scalar_budgets. A failing point throws
// SolveFailure naming its gamma.
std::vector<SweepPoint> budget_sweep(const RvppInstance& instance, const std::vector<int>& gammas,
                                     const MarketSet& markets, const milp::SolveOptions& options = {},
                                     bool parallel = true);

// Indices i with cost[i+1] < cost[i] - rel_tol * max(1, |cost[i]|).
std::vector<std::size_t> sweep_decreases(const std::vector<SweepPoint>& curve, double rel_tol);

// ---- strategy matrix ----

struct StrategyMatrix {
  std::vector<Strategy> strategies;
  std::vector<MarketSet> markets;
  std::vector<std::vector<double>> cost;  // [strategy][market set]
};

StrategyMatrix strategy_matrix(const RvppInstance& instance, const std::vector<Strategy>& strategies,
                               const std::vector<MarketSet>& markets, const milp::SolveOptions& options = {},
                               bool parallel = true);

// Ordering problems of one row over the four standard market sets; empty
// when DAM >= DAM+HPA >= full and DAM >= DAM+SRM >= full hold within rel_tol.
std::vector<std::string> market_order_violations(const StrategyMatrix& matrix, std::size_t row, double rel_tol);

// ---- HPA price sensitivity ----

struct HpaVariant {
  std::string name;
  Series price;
};

// The instance's own time-of-use series, then flat 70, 60 and 50.
std::vector<HpaVariant> default_hpa_variants(const RvppInstance& instance);

struct HpaResult {
  std::string name;
  double cost = 0.0;
  double hpa_heat = 0.0;  // MWh bought
  double csp_heat = 0.0;  // MWh supplied by CSP units
};

std::vector<HpaResult> hpa_price_sensitivity(const RvppInstance& instance, const std::vector<HpaVariant>& variants,
                                             const UncertaintyBudgets& budgets, const MarketSet& markets,
                                             const milp::SolveOptions& options = {});

// ---- sampling ----

enum class Distribution { uniform, triangular };
Distribution parse_distribution(const std::string& name);  // "uniform" or "triangular"
const char* to_string(Distribution d);

struct SampledScenario {
  Series dam_price, srm_up_price, srm_down_price;
  std::vector<Series> solar_field;  // per CSP unit
  std::vector<Series> production;   // per ND-RES unit
  std::vector<Series> electric;     // per electric demand
  std::vector<Series> thermal;      // per thermal demand
};

// Scenario i draws from its own engine seeded with (seed, i), so the list is
// identical however it is computed.
std::vector<SampledScenario> sample_scenarios(const RvppInstance& instance, int n, std::uint64_t seed,
                                              Distribution distribution = Distribution::uniform);

// The instance as seen in one scenario: prices, productions and demands
// collapsed onto the sampled values.
RvppInstance realize(const RvppInstance& instance, const SampledScenario& scenario);

// The nominal values (DAM median, SRM upper, production upper, demand lower).
SampledScenario nominal_scenario(const RvppInstance& instance);

// ---- out of sample ----

struct PenaltyConfig {
  double energy = 0.0;   // EUR/MWh of electric imbalance, either sign
  double reserve = 0.0;  // EUR/MW of undeliverable reserve
  double heat = 0.0;     // EUR/MWh of unserved heat or missing power-block heat
};

// 1.5 * max_t(median + upward deviation of the DAM price) for every entry.
PenaltyConfig default_penalty(const RvppInstance& instance);

struct ScenarioOutcome {
  double cost = 0.0;     // market expenses and operating cost, penalties excluded
  double penalty = 0.0;
  double energy_imbalance = 0.0;  // MWh
  double reserve_shortfall = 0.0;  // MW
  double heat_shortfall = 0.0;    // MWh
};

struct OutOfSampleReport {
  double avg_cost = 0.0;
  double avg_penalty = 0.0;
  double avg_net = 0.0;  // avg_cost + avg_penalty
  double max_penalty = 0.0;
  std::vector<ScenarioOutcome> scenarios;
  double seconds = 0.0;
};

// Recourse LP per scenario: binaries and market positions fixed from the
// plan, continuous dispatch re-optimized against the realized bounds, with
// penalized slacks on the no-activation electric balance, the activation
// balances (reserve deliverability), the heat balance and the power-block
// thermal balance.
ScenarioOutcome evaluate_scenario(const Plan& plan, const RvppInstance& instance, const SampledScenario& scenario,
                                  const PenaltyConfig& penalty);
OutOfSampleReport out_of_sample(const Plan& plan, const RvppInstance& instance,
                                const std::vector<SampledScenario>& scenarios, const PenaltyConfig& penalty,
                                bool parallel = true);
OutOfSampleReport out_of_sample_serial(const Plan& plan, const RvppInstance& instance,
                                       const std::vector<SampledScenario>& scenarios, const PenaltyConfig& penalty);

// ---- CSV ----

// Six significant digits.
std::string format_number(double v);

// Write to a sibling temporary file and rename over `path`. Throws Error
// when `path` exists and `force` is false.
void write_file_atomic(const std::filesystem::path& path, const std::string& content, bool force);

std::string strategy_matrix_csv(const StrategyMatrix& matrix);
std::string budget_sweep_csv(const std::vector<SweepPoint>& curve);
std::string flexibility_csv(const FlexibilityTable& table);
std::string hpa_sensitivity_csv(const std::vector<HpaResult>& results);

struct LabeledReport {
  std::string label;
  OutOfSampleReport report;
};
std::string out_of_sample_csv(const std::vector<LabeledReport>& reports);
std::string out_of_sample_detail_csv(const std::vector<LabeledReport>& reports);

}  // namespace rvpp::evaluate
