#include "rvpp/core/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rvpp/core/error.hpp"

namespace rvpp {

double interpolated_percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InvariantError("percentile of an empty sample");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

std::size_t check_history(const History& history, double low_pct, double high_pct) {
  if (history.empty()) throw InvariantError("compute_bounds: empty history");
  if (!(low_pct >= 0.0 && low_pct < high_pct && high_pct <= 1.0))
    throw InvariantError("compute_bounds: require 0 <= low_pct < high_pct <= 1");
  const std::size_t T = history.front().size();
  if (T == 0) throw InvariantError("compute_bounds: zero hours per day");
  for (std::size_t d = 0; d < history.size(); ++d) {
    if (history[d].size() != T)
      throw InvariantError("compute_bounds: day " + std::to_string(d + 1) + " has " +
                           std::to_string(history[d].size()) + " hours, expected " + std::to_string(T));
    for (std::size_t t = 0; t < T; ++t)
      if (!std::isfinite(history[d][t]))
        throw InvariantError("compute_bounds: non-finite sample at day " + std::to_string(d + 1) + ", hour " +
                             std::to_string(t + 1));
  }
  return T;
}

void hour_stats(const History& history, std::size_t t, double lo, double hi, BoundSeries& out) {
  std::vector<double> col(history.size());
  for (std::size_t d = 0; d < history.size(); ++d) col[d] = history[d][t];
  std::sort(col.begin(), col.end());
  out.lower[t] = interpolated_percentile(col, lo);
  out.median[t] = interpolated_percentile(col, 0.5);
  out.upper[t] = interpolated_percentile(col, hi);
  // Interpolation is monotone in p, but guard against rounding at equal samples.
  out.lower[t] = std::min(out.lower[t], out.median[t]);
  out.upper[t] = std::max(out.upper[t], out.median[t]);
}

}  // namespace

BoundSeries compute_bounds_serial(const History& history, double low_pct, double high_pct) {
  const std::size_t T = check_history(history, low_pct, high_pct);
  BoundSeries b{Series(T), Series(T), Series(T)};
  for (std::size_t t = 0; t < T; ++t) hour_stats(history, t, low_pct, high_pct, b);
  return b;
}

BoundSeries compute_bounds(const History& history, double low_pct, double high_pct) {
  const std::size_t T = check_history(history, low_pct, high_pct);
  BoundSeries b{Series(T), Series(T), Series(T)};
  const auto n = static_cast<long>(T);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < n; ++t) hour_stats(history, static_cast<std::size_t>(t), low_pct, high_pct, b);
  return b;
}

History read_history_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("history CSV: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      header.push_back(cell);
    }
  }
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != "h" + std::to_string(i + 1))
      throw SchemaError("history CSV: header column " + std::to_string(i + 1) + " must be 'h" + std::to_string(i + 1) +
                        "', got '" + header[i] + "'");
  History h;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    Series day;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        day.push_back(v);
      } catch (const std::exception&) {
        throw SchemaError("history CSV: row " + std::to_string(row) + ", column " + std::to_string(day.size() + 1) +
                          ": not a number");
      }
    }
    if (day.size() != header.size())
      throw SchemaError("history CSV: row " + std::to_string(row) + " has " + std::to_string(day.size()) +
                        " values, expected " + std::to_string(header.size()));
    h.push_back(std::move(day));
  }
  return h;
}

History read_history_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open history file '" + path.string() + "'");
  return read_history_csv(f);
}

}  // namespace rvpp
