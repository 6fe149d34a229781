#include <algorithm>
#include <cmath>

#include "rvpp/core/error.hpp"
#include "rvpp/oracle/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rvpp::oracle {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

namespace {

Series products(const Series& w, const Series& d, int gamma, double cap) {
  if (w.size() != d.size()) throw InvariantError("brute_force_protection: weights and deviations differ in length");
  const int T = static_cast<int>(w.size());
  if (gamma < 0 || gamma > T)
    throw InvariantError("brute_force_protection: gamma " + std::to_string(gamma) + " outside [0, " +
                         std::to_string(T) + "]");
  if (binomial(T, gamma) > cap)
    throw EnumerationLimitError("brute_force_protection: C(" + std::to_string(T) + ", " + std::to_string(gamma) +
                                ") subsets exceed the cap");
  Series p(w.size());
  for (int t = 0; t < T; ++t) p[t] = w[t] * d[t];
  return p;
}

// Colex successor of an ascending k-subset of {0..n-1}; false after the last.
bool next_colex(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int j = 0; j < k; ++j) {
    const int limit = j + 1 < k ? c[j + 1] : n;
    if (c[j] + 1 < limit) {
      ++c[j];
      for (int i = 0; i < j; ++i) c[i] = i;
      return true;
    }
  }
  return false;
}

// Subset of colex rank r: r = sum_i C(c_i, i + 1).
std::vector<int> unrank_colex(std::uint64_t r, int k) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = k; i >= 1; --i) {
    int v = i - 1;
    while (binomial(v + 1, i) <= static_cast<double>(r)) ++v;
    c[static_cast<std::size_t>(i - 1)] = v;
    r -= static_cast<std::uint64_t>(binomial(v, i));
  }
  return c;
}

double subset_sum(const Series& p, const std::vector<int>& c) {
  double s = 0.0;
  for (int t : c) s += p[static_cast<std::size_t>(t)];
  return s;
}

// Strictly better under the tie rule: larger value, then lexicographically smaller.
bool better(double v, const std::vector<int>& c, const Subset& best) {
  if (v != best.value) return v > best.value;
  return std::lexicographical_compare(c.begin(), c.end(), best.periods.begin(), best.periods.end());
}

Subset scan(const Series& p, int gamma, std::uint64_t first, std::uint64_t count) {
  Subset best;
  if (count == 0) return best;
  std::vector<int> c = unrank_colex(first, gamma);
  best.value = subset_sum(p, c);
  best.periods = c;
  for (std::uint64_t i = 1; i < count; ++i) {
    next_colex(c, static_cast<int>(p.size()));
    const double v = subset_sum(p, c);
    if (better(v, c, best)) {
      best.value = v;
      best.periods = c;
    }
  }
  return best;
}

}  // namespace

Subset brute_force_protection_serial(const Series& w, const Series& d, int gamma, double cap) {
  const Series p = products(w, d, gamma, cap);
  const auto n = static_cast<std::uint64_t>(binomial(static_cast<int>(p.size()), gamma));
  return scan(p, gamma, 0, n);
}

Subset brute_force_protection(const Series& w, const Series& d, int gamma, double cap) {
  const Series p = products(w, d, gamma, cap);
  const auto n = static_cast<std::uint64_t>(binomial(static_cast<int>(p.size()), gamma));
  int chunks = 1;
#ifdef _OPENMP
  chunks = n < 4096 ? 1 : omp_get_max_threads();
#endif
  if (chunks <= 1) return scan(p, gamma, 0, n);
  std::vector<Subset> part(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < chunks; ++i) {
    const std::uint64_t lo = n * static_cast<std::uint64_t>(i) / static_cast<std::uint64_t>(chunks);
    const std::uint64_t hi = n * static_cast<std::uint64_t>(i + 1) / static_cast<std::uint64_t>(chunks);
    part[static_cast<std::size_t>(i)] = scan(p, gamma, lo, hi - lo);
  }
  Subset best = part.front();
  for (std::size_t i = 1; i < part.size(); ++i)
    if (!part[i].periods.empty() && better(part[i].value, part[i].periods, best)) best = part[i];
  return best;
}

double duality_gap(const Series& w, const Series& d, int gamma, double phi, const Series& zetas, double tol) {
  if (zetas.size() != w.size()) throw InvariantError("duality_gap: zeta series has the wrong length");
  if (phi < -tol) throw InvariantError("duality_gap: phi is negative");
  double dual = gamma * phi;
  for (std::size_t t = 0; t < w.size(); ++t) {
    const double need = w[t] * d[t];
    if (zetas[t] < -tol) throw InvariantError("duality_gap: zeta negative at period " + std::to_string(t + 1));
    if (phi + zetas[t] < need - tol * (1.0 + std::abs(need)))
      throw InvariantError("duality_gap: phi + zeta below w*d at period " + std::to_string(t + 1));
    dual += zetas[t];
  }
  return dual - brute_force_protection(w, d, gamma).value;
}

}  // namespace rvpp::oracle
