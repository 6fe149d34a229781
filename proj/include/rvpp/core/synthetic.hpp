#pragma once

#include <cstdint>
#include <random>

#include "rvpp/core/types.hpp"

namespace rvpp {

// Uniform double in [0, 1) from the top 53 bits of the engine output.
// Unlike std::uniform_real_distribution, the sequence is identical across
// standard library implementations.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// The bundled 24-period dataset: 1 CSP, 2 wind farms, 3 PV plants, 3
// electric and 2 thermal demands. Unit ratings are realistic; the hourly
// profiles are synthetic.
RvppInstance reference_instance();

// A 4-period instance with one unit of each class, used for CLI examples and
// golden files.
RvppInstance toy_instance();

struct RandomInstanceOptions {
  int min_periods = 2;
  int max_periods = 12;
  int max_units_per_class = 2;
  bool with_csp = true;
  bool with_thermal = true;  // thermal demands need the HPA or a CSP to be served
  int max_budget = 0;        // budgets drawn in [0, max_budget], capped at T
  // Product of C(T, gamma) over all sources is kept at or below this cap.
  double max_subsets = 2e6;
};

RvppInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

}  // namespace rvpp
