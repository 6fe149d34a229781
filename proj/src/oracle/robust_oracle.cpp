#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rvpp/core/error.hpp"
#include "rvpp/milp/feasibility.hpp"
#include "rvpp/milp/solver.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/robust.hpp"
#include "rvpp/oracle/oracle.hpp"

namespace rvpp::oracle {

namespace {

using milp::MilpModel;

std::vector<std::vector<int>> colex_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int j = 0;
    while (j < k && c[static_cast<std::size_t>(j)] + 1 == (j + 1 < k ? c[static_cast<std::size_t>(j) + 1] : n)) ++j;
    if (j == k) break;
    ++c[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) c[static_cast<std::size_t>(i)] = i;
  }
  return out;
}

// Bound or rhs change caused by moving one source to its worst case in one period.
struct Shift {
  enum class What { rhs, lower, upper } what = What::rhs;
  std::size_t index = 0;
  double delta = 0.0;
};

struct Source {
  std::string key;
  bool price = false;
  std::vector<std::vector<int>> subsets;
  Series objective_delta;                 // prices: per period
  std::vector<std::vector<Shift>> shifts;  // quantities: per period
};

void set_worst_production(BoundSeries& b, int t) {
  b.upper[t] = b.lower[t];
  b.median[t] = b.lower[t];
}

void set_worst_consumption(BoundSeries& b, int t) {
  b.lower[t] = b.upper[t];
  b.median[t] = b.upper[t];
}

std::vector<Shift> diff(const MilpModel& base, const MilpModel& other) {
  if (base.num_vars() != other.num_vars() || base.num_constraints() != other.num_constraints())
    throw InvariantError("oracle: a realized bound changed the model structure");
  std::vector<Shift> out;
  for (std::size_t i = 0; i < base.num_constraints(); ++i) {
    const auto& a = base.constraints()[i];
    const auto& b = other.constraints()[i];
    if (a.name != b.name || a.sense != b.sense || a.terms.size() != b.terms.size())
      throw InvariantError("oracle: row '" + a.name + "' changed shape under a realized bound");
    if (a.rhs != b.rhs) out.push_back({Shift::What::rhs, i, b.rhs - a.rhs});
  }
  for (std::size_t j = 0; j < base.num_vars(); ++j) {
    const auto& a = base.variables()[j];
    const auto& b = other.variables()[j];
    if (a.lower != b.lower) out.push_back({Shift::What::lower, j, b.lower - a.lower});
    if (a.upper != b.upper) out.push_back({Shift::What::upper, j, b.upper - a.upper});
  }
  return out;
}

std::string describe_combination(const std::vector<Source>& src, const std::vector<std::size_t>& pick) {
  std::ostringstream s;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (i) s << ' ';
    s << src[i].key << ":{";
    const auto& sub = src[i].subsets[pick[i]];
    for (std::size_t k = 0; k < sub.size(); ++k) s << (k ? "," : "") << sub[k] + 1;
    s << '}';
  }
  return s.str();
}

std::vector<std::size_t> decode(std::uint64_t idx, const std::vector<Source>& src) {
  std::vector<std::size_t> pick(src.size());
  for (std::size_t i = src.size(); i-- > 0;) {
    const auto n = static_cast<std::uint64_t>(src[i].subsets.size());
    pick[i] = static_cast<std::size_t>(idx % n);
    idx /= n;
  }
  return pick;
}

struct Partial {
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t first_infeasible = std::numeric_limits<std::uint64_t>::max();
  std::string first_detail;
};

class Evaluator {
 public:
  Evaluator(const MilpModel& base, const std::vector<double>& x, const std::vector<Source>& src, double base_obj,
            double tol)
      : base_(base), x_(x), src_(src), base_obj_(base_obj), tol_(tol) {
    activity_.resize(base.num_constraints());
    for (std::size_t i = 0; i < base.num_constraints(); ++i) activity_[i] = base.activity(milp::RowId{i}, x);
    // Per source and subset, the summed shifts.
    for (const auto& s : src) {
      std::vector<std::vector<Shift>> per;
      for (const auto& sub : s.subsets) {
        std::vector<Shift> acc;
        if (!s.price)
          for (int t : sub) acc.insert(acc.end(), s.shifts[t].begin(), s.shifts[t].end());
        per.push_back(std::move(acc));
      }
      subset_shifts_.push_back(std::move(per));
      std::vector<double> val;
      for (const auto& sub : s.subsets) {
        double v = 0.0;
        if (s.price)
          for (int t : sub) v += s.objective_delta[t];
        val.push_back(v);
      }
      subset_value_.push_back(std::move(val));
    }
  }

  Partial run(std::uint64_t first, std::uint64_t count) const {
    Partial p;
    std::vector<double> rhs(base_.num_constraints(), 0.0), lo(base_.num_vars(), 0.0), up(base_.num_vars(), 0.0);
    std::vector<std::size_t> rows, lows, ups;
    for (std::uint64_t idx = first; idx < first + count; ++idx) {
      const auto pick = decode(idx, src_);
      double obj = base_obj_;
      rows.clear();
      lows.clear();
      ups.clear();
      for (std::size_t i = 0; i < src_.size(); ++i) {
        obj += subset_value_[i][pick[i]];
        for (const auto& sh : subset_shifts_[i][pick[i]]) {
          switch (sh.what) {
            case Shift::What::rhs:
              if (rhs[sh.index] == 0.0) rows.push_back(sh.index);
              rhs[sh.index] += sh.delta;
              break;
            case Shift::What::lower:
              if (lo[sh.index] == 0.0) lows.push_back(sh.index);
              lo[sh.index] += sh.delta;
              break;
            case Shift::What::upper:
              if (up[sh.index] == 0.0) ups.push_back(sh.index);
              up[sh.index] += sh.delta;
              break;
          }
        }
      }
      std::string why;
      for (std::size_t r : rows) {
        const auto& c = base_.constraints()[r];
        const double b = c.rhs + rhs[r];
        const double a = activity_[r];
        const bool ok = c.sense == milp::Sense::le   ? a <= b + tol_
                        : c.sense == milp::Sense::ge ? a >= b - tol_
                                                     : std::abs(a - b) <= tol_;
        if (!ok && why.empty()) why = "row " + c.name + " activity " + std::to_string(a) + " vs " + std::to_string(b);
        rhs[r] = 0.0;
      }
      for (std::size_t j : lows) {
        if (x_[j] < base_.variables()[j].lower + lo[j] - tol_ && why.empty())
          why = "variable " + base_.variables()[j].name + " below its realized lower bound";
        lo[j] = 0.0;
      }
      for (std::size_t j : ups) {
        if (x_[j] > base_.variables()[j].upper + up[j] + tol_ && why.empty())
          why = "variable " + base_.variables()[j].name + " above its realized upper bound";
        up[j] = 0.0;
      }
      if (!why.empty()) {
        ++p.infeasible;
        if (idx < p.first_infeasible) {
          p.first_infeasible = idx;
          p.first_detail = why;
        }
      }
      if (obj < p.best) {
        p.best = obj;
        p.best_index = idx;
      }
    }
    return p;
  }

 private:
  const MilpModel& base_;
  const std::vector<double>& x_;
  const std::vector<Source>& src_;
  double base_obj_;
  double tol_;
  std::vector<double> activity_;
  std::vector<std::vector<std::vector<Shift>>> subset_shifts_;
  std::vector<std::vector<double>> subset_value_;
};

}  // namespace

OracleReport evaluate_robust_solution(const RvppInstance& in, const UncertaintyBudgets& budgets,
                                      const MarketSet& ms, const milp::MilpSolution& sol, const OracleOptions& opt) {
  if (!sol.has_solution()) throw InvariantError("oracle: robust solution holds no assignment");
  const int T = in.T();
  const MilpModel base = model::build_deterministic(in, ms);
  std::vector<double> x(base.num_vars());
  for (std::size_t j = 0; j < base.num_vars(); ++j) x[j] = sol.value(base.variables()[j].name);
  const double base_obj = base.evaluate_objective(x);
  const double tol = milp::default_tolerance(base);

  std::vector<Source> src;
  auto objective_with = [&](auto&& edit) {
    RvppInstance r = in;
    edit(r);
    return model::build_deterministic(r, ms).evaluate_objective(x) - base_obj;
  };
  for (const auto& p : model::price_sources(in, budgets)) {
    if (p.gamma == 0) continue;
    Source s;
    s.key = p.key;
    s.price = true;
    s.objective_delta.resize(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      if (p.key == "da") {
        // The adversary takes whichever DAM extreme hurts the fixed trade.
        const double lo = objective_with([&](RvppInstance& r) { r.market.dam_price.median[t] = r.market.dam_price.lower[t]; });
        const double hi = objective_with([&](RvppInstance& r) { r.market.dam_price.median[t] = r.market.dam_price.upper[t]; });
        s.objective_delta[t] = std::min({lo, hi, 0.0});
      } else {
        s.objective_delta[t] = objective_with([&](RvppInstance& r) {
          auto& b = p.key == "up" ? r.market.srm_up_price : r.market.srm_down_price;
          b.upper[t] = b.lower[t];
          b.median[t] = b.lower[t];
        });
      }
    }
    s.subsets = colex_subsets(T, p.gamma);
    src.push_back(std::move(s));
  }
  for (const auto& q : model::quantity_sources(in, budgets)) {
    if (q.gamma == 0) continue;
    Source s;
    s.key = q.key;
    for (int t = 0; t < T; ++t) {
      RvppInstance r = in;
      if (q.csp_index >= 0) set_worst_production(r.csp_units[q.csp_index].sf_bounds, t);
      if (q.ndres_index >= 0) set_worst_production(r.ndres_units[q.ndres_index].production_bounds, t);
      if (q.electric_index >= 0) set_worst_consumption(r.electric_demands[q.electric_index].consumption_bounds, t);
      if (q.thermal_index >= 0) set_worst_consumption(r.thermal_demands[q.thermal_index].consumption_bounds, t);
      s.shifts.push_back(diff(base, model::build_deterministic(r, ms)));
    }
    s.subsets = colex_subsets(T, q.gamma);
    src.push_back(std::move(s));
  }

  double total = 1.0;
  for (const auto& s : src) total *= static_cast<double>(s.subsets.size());
  if (total > opt.max_subsets)
    throw EnumerationLimitError("oracle: " + std::to_string(static_cast<long long>(total)) +
                                " worst-case combinations exceed the cap");
  const auto n = static_cast<std::uint64_t>(total);

  OracleReport rep;
  rep.robust_objective = sol.objective_value;
  rep.combinations = n;
  const auto base_violations = milp::check_feasibility(base, x, tol);

  const Evaluator ev(base, x, src, base_obj, tol);
  int chunks = 1;
#ifdef _OPENMP
  if (opt.parallel && n >= 256) chunks = 64;
#endif
  std::vector<Partial> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic) if (chunks > 1)
  for (int i = 0; i < chunks; ++i) {
    const std::uint64_t lo = n * static_cast<std::uint64_t>(i) / static_cast<std::uint64_t>(chunks);
    const std::uint64_t hi = n * static_cast<std::uint64_t>(i + 1) / static_cast<std::uint64_t>(chunks);
    parts[static_cast<std::size_t>(i)] = ev.run(lo, hi - lo);
  }
  // Chunks are in index order, so strict comparisons keep the first optimum.
  Partial all;
  for (const auto& p : parts) {
    if (p.best < all.best) {
      all.best = p.best;
      all.best_index = p.best_index;
    }
    all.infeasible += p.infeasible;
    if (p.first_infeasible < all.first_infeasible) {
      all.first_infeasible = p.first_infeasible;
      all.first_detail = p.first_detail;
    }
  }
  rep.worst_case_objective = all.best;
  rep.worst_combination = describe_combination(src, decode(all.best_index, src));
  if (!base_violations.empty()) {
    rep.infeasible = n;
    rep.first_infeasible = describe_combination(src, decode(0, src));
    rep.first_infeasible_detail = "nominal: " + milp::describe(base_violations.front());
  } else {
    rep.infeasible = all.infeasible;
    if (all.infeasible > 0) {
      rep.first_infeasible = describe_combination(src, decode(all.first_infeasible, src));
      rep.first_infeasible_detail = all.first_detail;
    }
  }
  rep.relative_difference =
      std::abs(rep.robust_objective - rep.worst_case_objective) / std::max(1.0, std::abs(rep.worst_case_objective));
  return rep;
}

OracleReport brute_force_robust(const RvppInstance& in, const UncertaintyBudgets& budgets, const MarketSet& ms,
                                const OracleOptions& opt) {
  const MilpModel m = model::build_robust(in, budgets, ms);
  milp::SolveOptions so;
  so.rel_gap_target = opt.rel_gap_target;
  const auto sol = milp::solve(m, so);
  if (!sol.ok())
    throw SolverError(std::string("oracle: robust model not solved to optimality (") + milp::to_string(sol.status) +
                      ")");
  return evaluate_robust_solution(in, budgets, ms, sol, opt);
}

}  // namespace rvpp::oracle
