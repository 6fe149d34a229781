#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rvpp/core/budgets.hpp"
#include "rvpp/core/types.hpp"
#include "rvpp/evaluate/evaluate.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/robust.hpp"

namespace rvpp::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,
  kInfeasible = 2,
  kSolverFailure = 3,
  kVerifyFailed = 4,
};

struct RunConfig {
  std::string subcommand;
  // A JSON file, or "@reference" / "@toy" for the bundled instances.
  std::string instance = "@reference";
  std::optional<std::string> preset;     // solve, hpa-sens, export
  std::optional<std::string> gamma;      // "g" or "a..b"
  std::string markets = "dam,srm,hpa";   // a set, or "all-combos" (matrix)
  std::string presets = "det,opt,bal,pes";
  std::filesystem::path out = ".";
  bool force = false;
  milp::SolveOptions solver;
  bool serial = false;
  // oos
  int n = 200;
  std::uint64_t seed = 7;
  std::string distribution = "uniform";
  // export
  std::string format = "mps";
  // verify
  int count = 10;
  bool strict = false;
};

RvppInstance load_config_instance(const std::string& spec);

// "7" -> {7}; "0..24" -> {0, 1, ..., 24}. Throws InvariantError.
std::vector<int> parse_gamma_range(const std::string& text);

// Budgets for a single-plan command: --preset wins, then a scalar --gamma,
// then the budgets stored in the instance.
UncertaintyBudgets resolve_budgets(const RunConfig& config, const RvppInstance& instance);

// Long format: period,unit,quantity,value. Period-free values use period 0.
std::string schedule_csv(const model::FirstStageDecision& decision, const RvppInstance& instance);
// source,gamma,periods,protection_cost,tightening. Periods are 1-based and
// space separated.
std::string worst_case_csv(const model::WorstCaseReport& report);
// key,value
std::string summary_csv(const evaluate::Plan& plan, const std::string& instance, bool with_timing = true);

int cmd_solve(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_matrix(const RunConfig& config, std::ostream& out);
int cmd_hpa_sens(const RunConfig& config, std::ostream& out);
int cmd_oos(const RunConfig& config, std::ostream& out);
int cmd_export(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

// Parse argv, dispatch, and map exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rvpp::cli
