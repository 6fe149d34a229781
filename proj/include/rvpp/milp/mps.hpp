#pragma once

#include <string>
#include <vector>

#include "rvpp/milp/model.hpp"

namespace rvpp::milp {

struct MpsOptions {
  std::string model_name = "RVPP";
  // Width of the base-36 counter in mangled names: prefix + '#' + counter.
  int suffix_width = 4;
};

struct MpsExport {
  std::string text;
  std::string objective_row;
  std::vector<std::string> column_names;  // index-aligned with model variables
  std::vector<std::string> row_names;     // index-aligned with model constraints
};

// Fixed-format MPS. Names that are not valid 8-character identifiers are
// mangled deterministically; the mapping is written as a comment block.
// Throws Error when a mangling prefix runs out of suffixes.
MpsExport export_mps(const MilpModel& model, const MpsOptions& options = {});

// Fixed-width number formatting used by the writer: shortest round-trip
// representation, or reduced precision when that exceeds 12 characters.
std::string mps_number(double v);

// CPLEX-LP text in the same row/column order. Human-readable, not golden.
std::string export_lp(const MilpModel& model);

}  // namespace rvpp::milp
