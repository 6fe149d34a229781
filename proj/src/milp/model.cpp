#include "rvpp/milp/model.hpp"

#include <cmath>

#include "rvpp/core/error.hpp"

namespace rvpp::milp {

namespace {

void merge_term(std::vector<Term>& terms, VarId v, double coef) {
  for (auto& t : terms)
    if (t.var == v) {
      t.coef += coef;
      return;
    }
  terms.push_back({v, coef});
}

}  // namespace

VarId MilpModel::add_var(std::string name, VarKind kind, double lower, double upper) {
  if (name.empty()) throw InvariantError("variable without a name");
  if (var_index_.count(name)) throw InvariantError("duplicate variable name '" + name + "'");
  if (std::isnan(lower) || std::isnan(upper)) throw InvariantError("NaN bound on variable '" + name + "'");
  const VarId id{vars_.size()};
  var_index_.emplace(name, id.index);
  vars_.push_back({std::move(name), kind, lower, upper});
  return id;
}

RowId MilpModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  if (name.empty()) throw InvariantError("constraint without a name");
  if (row_index_.count(name)) throw InvariantError("duplicate constraint name '" + name + "'");
  if (!std::isfinite(rhs)) throw InvariantError("non-finite rhs on constraint '" + name + "'");
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.var.index >= vars_.size())
      throw InvariantError("constraint '" + name + "' references an unknown variable");
    merge_term(merged, t.var, t.coef);
  }
  const RowId id{rows_.size()};
  row_index_.emplace(name, id.index);
  rows_.push_back({std::move(name), std::move(merged), sense, rhs});
  return id;
}

void MilpModel::add_term(RowId row, VarId var, double coef) {
  if (row.index >= rows_.size() || var.index >= vars_.size()) throw InvariantError("add_term: id out of range");
  merge_term(rows_[row.index].terms, var, coef);
}

void MilpModel::set_bounds(VarId v, double lower, double upper) {
  auto& x = vars_.at(v.index);
  x.lower = lower;
  x.upper = upper;
}

void MilpModel::set_kind(VarId v, VarKind kind) { vars_.at(v.index).kind = kind; }

void MilpModel::add_objective_term(VarId v, double coef) {
  if (v.index >= vars_.size()) throw InvariantError("objective references an unknown variable");
  merge_term(objective_.terms, v, coef);
}

VarId MilpModel::var_id(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) throw InvariantError("unknown variable '" + std::string(name) + "'");
  return {it->second};
}

RowId MilpModel::row_id(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) throw InvariantError("unknown constraint '" + std::string(name) + "'");
  return {it->second};
}

double MilpModel::evaluate_objective(const std::vector<double>& x) const {
  double v = objective_.offset;
  for (const auto& t : objective_.terms) v += t.coef * x[t.var.index];
  return v;
}

double MilpModel::activity(RowId r, const std::vector<double>& x) const {
  double a = 0.0;
  for (const auto& t : rows_[r.index].terms) a += t.coef * x[t.var.index];
  return a;
}

void MilpModel::check() const {
  for (const auto& v : vars_) {
    if (v.lower > v.upper) throw InvariantError("variable '" + v.name + "' has lower > upper");
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0))
      throw InvariantError("binary variable '" + v.name + "' has bounds outside [0, 1]");
  }
  for (const auto& r : rows_)
    for (const auto& t : r.terms) {
      if (t.var.index >= vars_.size()) throw InvariantError("constraint '" + r.name + "' references an unknown variable");
      if (!std::isfinite(t.coef)) throw InvariantError("non-finite coefficient in constraint '" + r.name + "'");
    }
  for (const auto& t : objective_.terms)
    if (!std::isfinite(t.coef)) throw InvariantError("non-finite objective coefficient");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::gap_limit: return "gap_limit";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::error: return "error";
  }
  return "?";
}

double MilpSolution::value(std::string_view name) const {
  auto it = assignment.find(std::string(name));
  if (it == assignment.end()) throw InvariantError("solution has no variable '" + std::string(name) + "'");
  return it->second;
}

void attach_names(const MilpModel& model, MilpSolution& solution) {
  solution.assignment.clear();
  if (solution.values.empty()) return;
  if (solution.values.size() != model.num_vars())
    throw InvariantError("solution size " + std::to_string(solution.values.size()) + " does not match model size " +
                         std::to_string(model.num_vars()));
  solution.assignment.reserve(model.num_vars());
  for (std::size_t i = 0; i < model.num_vars(); ++i) solution.assignment[model.variables()[i].name] = solution.values[i];
}

}  // namespace rvpp::milp
