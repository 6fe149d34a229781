#include "rvpp/milp/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rvpp/core/error.hpp"

namespace rvpp::milp {

std::string describe(const Violation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case Violation::Kind::constraint: os << "constraint " << v.name << ": activity " << v.activity << " vs rhs "; break;
    case Violation::Kind::lower_bound: os << "variable " << v.name << ": value " << v.activity << " below lower "; break;
    case Violation::Kind::upper_bound: os << "variable " << v.name << ": value " << v.activity << " above upper "; break;
    case Violation::Kind::integrality: os << "variable " << v.name << ": value " << v.activity << " not integral, nearest "; break;
  }
  os << v.limit << " (off by " << v.amount << ")";
  return os.str();
}

double default_tolerance(const MilpModel& model) {
  double m = 0.0;
  for (const auto& r : model.constraints()) m = std::max(m, std::abs(r.rhs));
  return 1e-6 * (1.0 + m);
}

std::vector<Violation> check_feasibility(const MilpModel& model, const std::vector<double>& x, double tol) {
  if (x.size() != model.num_vars())
    throw InvariantError("assignment has " + std::to_string(x.size()) + " values, model has " +
                         std::to_string(model.num_vars()) + " variables");
  std::vector<Violation> out;
  for (std::size_t i = 0; i < model.num_vars(); ++i) {
    const auto& v = model.variables()[i];
    if (x[i] < v.lower - tol) out.push_back({Violation::Kind::lower_bound, v.name, v.lower - x[i], x[i], v.lower});
    if (x[i] > v.upper + tol) out.push_back({Violation::Kind::upper_bound, v.name, x[i] - v.upper, x[i], v.upper});
    if (v.kind == VarKind::binary) {
      const double r = std::round(x[i]);
      if (std::abs(x[i] - r) > tol) out.push_back({Violation::Kind::integrality, v.name, std::abs(x[i] - r), x[i], r});
    }
  }
  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    const auto& r = model.constraints()[i];
    const double a = model.activity(RowId{i}, x);
    double miss = 0.0;
    switch (r.sense) {
      case Sense::le: miss = a - r.rhs; break;
      case Sense::ge: miss = r.rhs - a; break;
      case Sense::eq: miss = std::abs(a - r.rhs); break;
    }
    if (miss > tol) out.push_back({Violation::Kind::constraint, r.name, miss, a, r.rhs});
  }
  return out;
}

std::vector<Violation> check_feasibility(const MilpModel& model,
                                         const std::unordered_map<std::string, double>& assignment, double tol) {
  std::vector<double> x(model.num_vars());
  for (std::size_t i = 0; i < model.num_vars(); ++i) {
    const auto& name = model.variables()[i].name;
    auto it = assignment.find(name);
    if (it == assignment.end()) throw InvariantError("assignment is missing variable '" + name + "'");
    x[i] = it->second;
  }
  return check_feasibility(model, x, tol);
}

}  // namespace rvpp::milp
