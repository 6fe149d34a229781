#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "rvpp/milp/model.hpp"

namespace rvpp::milp {

struct Violation {
  enum class Kind { constraint, lower_bound, upper_bound, integrality };
  Kind kind = Kind::constraint;
  std::string name;  // constraint or variable name
  double amount = 0.0;  // by how much the requirement is missed (> 0)
  double activity = 0.0;  // row activity or variable value
  double limit = 0.0;  // rhs or bound
};

std::string describe(const Violation& v);

// 1e-6 * (1 + max |rhs|)
double default_tolerance(const MilpModel& model);

// Every constraint, bound and integrality requirement missed by more than
// tol_abs. `values` must be index-aligned with the model's variables.
std::vector<Violation> check_feasibility(const MilpModel& model, const std::vector<double>& values, double tol_abs);

// Same, keyed by variable name; a missing name throws InvariantError.
std::vector<Violation> check_feasibility(const MilpModel& model,
                                         const std::unordered_map<std::string, double>& assignment, double tol_abs);

}  // namespace rvpp::milp
