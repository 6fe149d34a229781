#pragma once

#include <string>
#include <vector>

#include "rvpp/core/types.hpp"
#include "rvpp/milp/model.hpp"
#include "rvpp/model/decision.hpp"

namespace rvpp::model {

// An uncertain quantity with its own budget. Demands group the electric and
// thermal demand sharing a name; either side may be absent.
struct QuantitySource {
  enum class Kind { csp, ndres, demand };
  Kind kind = Kind::ndres;
  std::string name;
  std::string key;  // "csp.<name>", "res.<name>", "dem.<name>"
  int gamma = 0;
  int csp_index = -1, ndres_index = -1, electric_index = -1, thermal_index = -1;
  Series deviation;       // SF or ND-RES production, or electric consumption
  Series heat_deviation;  // thermal consumption (demands only)
};

// All quantity sources of the instance, in unit order, with budgets attached.
std::vector<QuantitySource> quantity_sources(const RvppInstance& instance, const UncertaintyBudgets& budgets);

// Price sources are "da", "up", "dn".
struct PriceSource {
  std::string key;
  int gamma = 0;
  Series deviation;  // downward deviation applied to revenue
};
std::vector<PriceSource> price_sources(const RvppInstance& instance, const UncertaintyBudgets& budgets);

// Big-M of a quantity source: twice its largest deviation plus one.
double big_m(const QuantitySource& source);

// Single-level robust MILP. Quantity sources with a zero budget add no
// auxiliaries (their worst case is the nominal bound). Throws BuildError
// when a budget lies outside [0, T] or a deviation is negative.
milp::MilpModel build_robust(const RvppInstance& instance, const UncertaintyBudgets& budgets,
                             const MarketSet& markets);

// Traded-energy weight of the DAM protection term: y = max(p dt, -(hat/check) p dt)
// when the downward deviation is positive, p dt otherwise.
double dam_weight(double p_da, double dt, double dev_up, double dev_down);

struct SourceReport {
  std::string key;
  int gamma = 0;
  std::vector<int> periods;  // 0-based, ascending
  Series realized;           // worst-case series at the flagged periods
  Series realized_heat;      // thermal side of a demand group, else empty
  // Prices: gamma * phi + sum(zeta) from the solution. Quantities: bound
  // tightening valued at the nominal DAM price (SF heat scaled by the best
  // power-block efficiency, thermal demand at the HPA price).
  double protection_cost = 0.0;
  double tightening = 0.0;  // sum of y over periods (quantities, MW)
};

struct WorstCaseReport {
  std::vector<SourceReport> prices;
  std::vector<SourceReport> quantities;
};

// Price sets are canonicalized by the sort-and-sum rule with lexicographic
// tie-breaking; quantity sets are the chi variables of the solution. Throws
// InvariantError when a chi value is further than 1e-6 from {0, 1}.
WorstCaseReport worst_case_report(const milp::MilpSolution& solution, const RvppInstance& instance,
                                  const UncertaintyBudgets& budgets);

// Value of max sum w_t d_t z_t s.t. sum z <= gamma, 0 <= z <= 1, and the
// lexicographically smallest optimal period set. Throws on negative input.
struct Protection {
  double value = 0.0;
  std::vector<int> periods;
};
Protection protection_value_primal(const Series& weights, const Series& deviations, int gamma);

}  // namespace rvpp::model
