#include <algorithm>
#include <cmath>

#include "rvpp/model/names.hpp"
#include "rvpp/model/robust.hpp"
#include "rvpp/oracle/oracle.hpp"

namespace rvpp::oracle {

namespace names = model::names;

std::vector<DualityCheck> price_duality(const RvppInstance& in, const UncertaintyBudgets& budgets,
                                        const milp::MilpSolution& sol) {
  const int T = in.T();
  std::vector<DualityCheck> out;
  for (const auto& src : model::price_sources(in, budgets)) {
    Series w(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      const std::string name = src.key == "da"   ? names::rob("da", "y", t)
                               : src.key == "up" ? names::r_sr_up(t)
                                                 : names::r_sr_dn(t);
      w[t] = std::max(0.0, sol.value(name));
    }
    DualityCheck c;
    c.key = src.key;
    c.gamma = src.gamma;
    c.dual = src.gamma * sol.value(names::rob(src.key, "phi"));
    for (int t = 0; t < T; ++t) c.dual += sol.value(names::rob(src.key, "zeta", t));
    c.primal = model::protection_value_primal(w, src.deviation, src.gamma).value;
    c.relative_difference = std::abs(c.dual - c.primal) / std::max(1.0, std::abs(c.primal));
    out.push_back(c);
  }
  return out;
}

}  // namespace rvpp::oracle
