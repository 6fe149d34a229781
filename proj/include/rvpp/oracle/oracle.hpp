#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvpp/core/types.hpp"
#include "rvpp/milp/model.hpp"

namespace rvpp::oracle {

inline constexpr double kDefaultMaxSubsets = 2e6;

// C(n, k) as a double; 0 outside 0 <= k <= n.
double binomial(int n, int k);

struct Subset {
  double value = 0.0;
  std::vector<int> periods;  // 0-based, ascending
};

// Exact max of sum_{t in S} w_t d_t over |S| = gamma. Subsets are visited in
// colexicographic order; among equal values the lexicographically smallest
// set wins. Throws EnumerationLimitError when C(T, gamma) > max_subsets and
// InvariantError on mismatched lengths or gamma outside [0, T].
Subset brute_force_protection(const Series& weights, const Series& deviations, int gamma,
                              double max_subsets = kDefaultMaxSubsets);
Subset brute_force_protection_serial(const Series& weights, const Series& deviations, int gamma,
                                     double max_subsets = kDefaultMaxSubsets);

// (gamma phi + sum zeta) - brute_force_protection. Throws InvariantError
// naming the period when phi + zeta_t < w_t d_t - tol (1 + w_t d_t) or a
// dual value is negative beyond tol.
double duality_gap(const Series& weights, const Series& deviations, int gamma, double phi, const Series& zetas,
                   double tol = 1e-9);

// Per price source: the dual value gamma phi + sum zeta read from a robust
// solution against the sort-and-sum primal value of its protection problem,
// with weights taken from the same solution (the traded-energy auxiliary
// for the DAM, the traded reserve for SRM up/down).
struct DualityCheck {
  std::string key;  // "da", "up", "dn"
  int gamma = 0;
  double dual = 0.0;
  double primal = 0.0;
  double relative_difference = 0.0;  // |dual - primal| / max(1, |primal|)
};
std::vector<DualityCheck> price_duality(const RvppInstance& instance, const UncertaintyBudgets& budgets,
                                        const milp::MilpSolution& robust_solution);

struct OracleOptions {
  double max_subsets = kDefaultMaxSubsets;
  double rel_gap_target = 1e-9;  // for the robust solve inside brute_force_robust
  bool parallel = true;
};

struct OracleReport {
  double robust_objective = 0.0;      // objective reported for the robust solution
  double worst_case_objective = 0.0;  // min over enumerated prices of the fixed decision's profit
  double relative_difference = 0.0;   // |robust - worst| / max(1, |worst|)
  std::uint64_t combinations = 0;
  std::uint64_t infeasible = 0;
  std::string worst_combination;        // source:periods list of the minimizing combination
  std::string first_infeasible;         // first infeasible combination in enumeration order
  std::string first_infeasible_detail;  // violated row of that combination

  bool matches(double rel_tol) const { return relative_difference <= rel_tol; }
};

// Evaluate a robust solution's full decision against every combination of
// per-source worst-case period sets (products of C(T, gamma_i)). Prices
// change the objective only, quantities change the bounds only. The
// decision is fixed: nothing is re-optimized per combination.
OracleReport evaluate_robust_solution(const RvppInstance& instance, const UncertaintyBudgets& budgets,
                                      const MarketSet& markets, const milp::MilpSolution& robust_solution,
                                      const OracleOptions& options = {});

// Solve the robust model and evaluate its solution as above. Throws
// SolverError when the robust model does not solve to optimality.
OracleReport brute_force_robust(const RvppInstance& instance, const UncertaintyBudgets& budgets,
                                const MarketSet& markets, const OracleOptions& options = {});

}  // namespace rvpp::oracle
