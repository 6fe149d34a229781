#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rvpp::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };
enum class Sense { le, eq, ge };
enum class ObjSense { maximize, minimize };

struct VarId {
  std::size_t index = 0;
  bool operator==(const VarId&) const = default;
};

struct RowId {
  std::size_t index = 0;
  bool operator==(const RowId&) const = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

struct Objective {
  ObjSense sense = ObjSense::maximize;
  std::vector<Term> terms;
  double offset = 0.0;
};

// Solver-agnostic linear model. Names are unique across variables and across
// constraints (the two namespaces are separate). Repeated terms on the same
// variable inside one row are merged on insertion.
class MilpModel {
 public:
  VarId add_var(std::string name, VarKind kind, double lower, double upper);
  VarId add_continuous(std::string name, double lower = 0.0, double upper = kInf) {
    return add_var(std::move(name), VarKind::continuous, lower, upper);
  }
  VarId add_binary(std::string name) { return add_var(std::move(name), VarKind::binary, 0.0, 1.0); }

  RowId add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs);
  void add_term(RowId row, VarId var, double coef);

  void set_bounds(VarId v, double lower, double upper);
  void fix(VarId v, double value) { set_bounds(v, value, value); }
  void set_kind(VarId v, VarKind kind);

  void set_objective_sense(ObjSense s) { objective_.sense = s; }
  void add_objective_term(VarId v, double coef);
  void add_objective_offset(double c) { objective_.offset += c; }

  // Descriptive role tag, e.g. "power balance, scenario up, t=7".
  void tag(const std::string& name, std::string description) { metadata_[name] = std::move(description); }

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Objective& objective() const { return objective_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }
  const Variable& var(VarId v) const { return vars_[v.index]; }
  const Constraint& row(RowId r) const { return rows_[r.index]; }

  bool has_var(std::string_view name) const { return var_index_.count(std::string(name)) > 0; }
  bool has_constraint(std::string_view name) const { return row_index_.count(std::string(name)) > 0; }
  VarId var_id(std::string_view name) const;
  RowId row_id(std::string_view name) const;

  // Objective value of an index-aligned assignment (offset included).
  double evaluate_objective(const std::vector<double>& x) const;
  // Row activity of an index-aligned assignment.
  double activity(RowId r, const std::vector<double>& x) const;

  // Checks the structural invariants (term indices, binary bounds, finite
  // coefficients); throws InvariantError.
  void check() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  Objective objective_;
  std::map<std::string, std::string> metadata_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::unordered_map<std::string, std::size_t> row_index_;
};

enum class SolveStatus { optimal, infeasible, unbounded, gap_limit, time_limit, error };

const char* to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::error;
  double objective_value = 0.0;
  std::vector<double> values;                       // index-aligned with the model's variables
  std::unordered_map<std::string, double> assignment;  // same values keyed by name
  double mip_gap = 0.0;
  double solve_seconds = 0.0;
  std::string backend;
  std::string message;

  bool ok() const { return status == SolveStatus::optimal; }
  // True when `values` holds an incumbent (optimal, or stopped at a limit).
  bool has_solution() const { return !values.empty(); }
  // Throws InvariantError naming the variable when absent.
  double value(std::string_view name) const;
};

// Builds `assignment` from `values` using the model's variable names.
void attach_names(const MilpModel& model, MilpSolution& solution);

}  // namespace rvpp::milp
