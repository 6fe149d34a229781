#include <algorithm>
#include <chrono>
#include <cmath>

#include "rvpp/evaluate/evaluate.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/model/names.hpp"

namespace rvpp::evaluate {

namespace mn = model::names;
using milp::Sense;

PenaltyConfig default_penalty(const RvppInstance& in) {
  const auto& b = in.market.dam_price;
  double top = 0.0;
  for (std::size_t t = 0; t < b.size(); ++t) top = std::max(top, b.median[t] + (b.upper[t] - b.median[t]));
  const double p = 1.5 * top;
  return {p, p, p};
}

namespace {

struct Slack {
  milp::VarId var;
  enum class Kind { energy, reserve, heat } kind;
};

}  // namespace

ScenarioOutcome evaluate_scenario(const Plan& plan, const RvppInstance& in, const SampledScenario& sc,
                                  const PenaltyConfig& pen) {
  const RvppInstance r = realize(in, sc);
  const int T = in.T();
  const double dt = in.dt();
  milp::MilpModel m = model::build_deterministic(r, plan.markets);

  // Commitment, storage mode and segment choices stay as planned; so do the
  // market positions.
  for (std::size_t j = 0; j < m.num_vars(); ++j) {
    const auto& v = m.variables()[j];
    const milp::VarId id{j};
    if (v.kind == milp::VarKind::binary) {
      m.fix(id, std::round(plan.solution.value(v.name)));
      m.set_kind(id, milp::VarKind::continuous);
    }
  }
  for (int t = 0; t < T; ++t)
    for (const auto& name : {mn::p_da(t), mn::r_sr_up(t), mn::r_sr_dn(t), mn::h_hpa(t)})
      m.fix(m.var_id(name), plan.solution.value(name));

  std::vector<Slack> slacks;
  auto slack = [&](const std::string& row, double coef, Slack::Kind kind, double price) {
    const milp::VarId v = m.add_continuous("slack." + std::to_string(slacks.size()) + "." + row);
    m.add_term(m.row_id(row), v, coef);
    m.add_objective_term(v, -price);
    slacks.push_back({v, kind});
  };
  for (int t = 0; t < T; ++t) {
    const std::string at = "[" + std::to_string(t + 1) + "]";
    // Energy slacks also enter the activation rows, so reserve slack only
    // prices what the unit cannot deliver on top of the energy imbalance.
    for (double coef : {1.0, -1.0}) {
      slack("bal.none" + at, coef, Slack::Kind::energy, pen.energy * dt);
      m.add_term(m.row_id("bal.up" + at), slacks.back().var, coef);
      m.add_term(m.row_id("bal.dn" + at), slacks.back().var, coef);
    }
    slack("bal.up" + at, 1.0, Slack::Kind::reserve, pen.reserve);
    slack("bal.up" + at, -1.0, Slack::Kind::reserve, pen.reserve);
    slack("bal.dn" + at, 1.0, Slack::Kind::reserve, pen.reserve);
    slack("bal.dn" + at, -1.0, Slack::Kind::reserve, pen.reserve);
    slack("heat" + at, 1.0, Slack::Kind::heat, pen.heat * dt);
    slack("heat" + at, -1.0, Slack::Kind::heat, pen.heat * dt);
    for (const auto& c : in.csp_units) slack(mn::csp(c.name, "pb_bal", t), -1.0, Slack::Kind::heat, pen.heat * dt);
  }

  milp::SolveOptions opt;
  opt.polish = false;
  const auto sol = milp::solve(m, opt);
  if (!sol.ok())
    throw SolveFailure(std::string("recourse LP: ") + milp::to_string(sol.status), sol.status);

  ScenarioOutcome out;
  for (const auto& s : slacks) {
    const double v = std::max(0.0, sol.values[s.var.index]);
    switch (s.kind) {
      case Slack::Kind::energy:
        out.energy_imbalance += v * dt;
        out.penalty += pen.energy * dt * v;
        break;
      case Slack::Kind::reserve:
        out.reserve_shortfall += v;
        out.penalty += pen.reserve * v;
        break;
      case Slack::Kind::heat:
        out.heat_shortfall += v * dt;
        out.penalty += pen.heat * dt * v;
        break;
    }
  }
  out.cost = -(sol.objective_value + out.penalty);
  return out;
}

namespace {

OutOfSampleReport reduce(std::vector<ScenarioOutcome> outcomes) {
  OutOfSampleReport rep;
  for (const auto& o : outcomes) {
    rep.avg_cost += o.cost;
    rep.avg_penalty += o.penalty;
    rep.max_penalty = std::max(rep.max_penalty, o.penalty);
  }
  const auto n = static_cast<double>(outcomes.size());
  rep.avg_cost /= n;
  rep.avg_penalty /= n;
  rep.avg_net = rep.avg_cost + rep.avg_penalty;
  rep.scenarios = std::move(outcomes);
  return rep;
}

void check_scenarios(const std::vector<SampledScenario>& s) {
  if (s.empty()) throw InvariantError("out_of_sample: no scenarios");
}

}  // namespace

OutOfSampleReport out_of_sample_serial(const Plan& plan, const RvppInstance& in,
                                       const std::vector<SampledScenario>& scenarios, const PenaltyConfig& pen) {
  check_scenarios(scenarios);
  const auto start = std::chrono::steady_clock::now();
  std::vector<ScenarioOutcome> out;
  for (const auto& s : scenarios) out.push_back(evaluate_scenario(plan, in, s, pen));
  OutOfSampleReport rep = reduce(std::move(out));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

OutOfSampleReport out_of_sample(const Plan& plan, const RvppInstance& in,
                                const std::vector<SampledScenario>& scenarios, const PenaltyConfig& pen,
                                bool parallel) {
  check_scenarios(scenarios);
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(scenarios.size());
  std::vector<ScenarioOutcome> out(scenarios.size());
  std::vector<std::string> errors(scenarios.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = evaluate_scenario(plan, in, scenarios[i], pen);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty()) throw SolverError("out_of_sample: scenario " + std::to_string(i + 1) + ": " + errors[i]);
  OutOfSampleReport rep = reduce(std::move(out));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace rvpp::evaluate
