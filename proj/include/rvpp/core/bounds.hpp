#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "rvpp/core/types.hpp"

namespace rvpp {

// days x T sample matrix
using History = std::vector<Series>;

// Percentile of an ascending-sorted sample, linear interpolation between order
// statistics at position p*(n-1).
double interpolated_percentile(const std::vector<double>& sorted, double p);

// Per-hour median and [low_pct, high_pct] percentiles of the history.
BoundSeries compute_bounds(const History& history, double low_pct, double high_pct);
BoundSeries compute_bounds_serial(const History& history, double low_pct, double high_pct);

// CSV with header h1..hT and one row per day.
History read_history_csv(std::istream& in);
History read_history_csv(const std::filesystem::path& path);

}  // namespace rvpp
