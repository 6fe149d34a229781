#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "rvpp/milp/model.hpp"

namespace rvpp::milp {

struct SolveOptions {
  double rel_gap_target = 1e-4;
  double time_limit_seconds = 0.0;  // <= 0 means no limit
  std::uint64_t seed = 0;
  // Re-solve the LP with binaries fixed at their rounded values to clean up
  // continuous values after branch and bound.
  bool polish = true;
};

// Backends are stateless: solve() may be called concurrently on independent
// models.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  // Status is reported in the result; SolverError is thrown only when the
  // backend itself cannot run (missing binary, unreadable output).
  virtual MilpSolution solve(const MilpModel& model, const SolveOptions& options) const = 0;
};

// "highs" (in-process) or "cbc" (external executable reading the MPS export).
std::unique_ptr<SolverBackend> make_backend(const std::string& name);

// Backend named by the RVPP_SOLVER environment variable, "highs" when unset.
std::unique_ptr<SolverBackend> default_backend();
std::string default_backend_name();

// Path of the CBC executable: RVPP_CBC, then the path found at configure
// time, then `cbc` on PATH. Empty when none is usable.
std::string cbc_executable();

MilpSolution solve(const MilpModel& model, const SolveOptions& options = {});

}  // namespace rvpp::milp
