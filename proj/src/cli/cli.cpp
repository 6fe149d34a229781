#include "rvpp/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rvpp/core/instance_io.hpp"
#include "rvpp/core/synthetic.hpp"
#include "rvpp/milp/mps.hpp"
#include "rvpp/model/deterministic.hpp"
#include "rvpp/oracle/oracle.hpp"

namespace rvpp::cli {

namespace fs = std::filesystem;
using evaluate::format_number;

RvppInstance load_config_instance(const std::string& spec) {
  if (spec == "@reference") return reference_instance();
  if (spec == "@toy") return toy_instance();
  return load_instance_file(spec);
}

std::vector<int> parse_gamma_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || v < 0)
      throw InvariantError("bad budget '" + text + "' (expected a non-negative integer or a range a..b)");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {to_int(text)};
  const int a = to_int(text.substr(0, dots)), b = to_int(text.substr(dots + 2));
  if (b < a) throw InvariantError("bad budget range '" + text + "': end before start");
  std::vector<int> out;
  for (int g = a; g <= b; ++g) out.push_back(g);
  return out;
}

UncertaintyBudgets resolve_budgets(const RunConfig& c, const RvppInstance& in) {
  if (c.preset) return preset_budgets(parse_strategy(*c.preset), in);
  if (c.gamma) {
    const auto g = parse_gamma_range(*c.gamma);
    if (g.size() != 1) throw InvariantError("--gamma must be a single value here, got '" + *c.gamma + "'");
    if (g[0] > in.T())
      throw InvariantError("--gamma " + std::to_string(g[0]) + " exceeds the horizon of " + std::to_string(in.T()));
    return scalar_budgets(g[0], in);
  }
  return in.budgets;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string num(double v) { return format_number(std::abs(v) < 1e-9 ? 0.0 : v); }

// All targets are checked before anything is written, so a refusal leaves
// no partial output behind.
void write_all(const RunConfig& c, const std::vector<std::pair<std::string, std::string>>& files, std::ostream& out) {
  if (!c.force)
    for (const auto& [name, _] : files)
      if (fs::exists(c.out / name))
        throw Error("refusing to overwrite " + (c.out / name).string() + " (use --force)");
  for (const auto& [name, content] : files) {
    evaluate::write_file_atomic(c.out / name, content, true);
    out << "wrote " << (c.out / name).string() << '\n';
  }
}

bool acceptable(milp::SolveStatus s) { return s == milp::SolveStatus::optimal || s == milp::SolveStatus::gap_limit; }

std::vector<Strategy> parse_presets(const std::string& text) {
  std::vector<Strategy> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_strategy(s));
  if (out.empty()) throw InvariantError("--presets is empty");
  return out;
}

std::vector<MarketSet> parse_market_list(const std::string& text) {
  if (text == "all-combos") return MarketSet::all_combinations();
  std::vector<MarketSet> out;
  for (const auto& s : split(text, ';')) out.push_back(MarketSet::parse(s));
  if (out.empty()) throw InvariantError("--markets is empty");
  return out;
}

std::string plan_label(const RunConfig& c, const UncertaintyBudgets& b) {
  if (c.preset) return to_string(parse_strategy(*c.preset));
  if (c.gamma) return "gamma=" + *c.gamma;
  return b.all_zero() ? "deterministic" : "instance";
}

}  // namespace

std::string schedule_csv(const model::FirstStageDecision& d, const RvppInstance&) {
  std::ostringstream s;
  s << "period,unit,quantity,value\n";
  auto series = [&](const std::string& unit, const char* q, const Series& v) {
    for (std::size_t t = 0; t < v.size(); ++t) s << t + 1 << ',' << unit << ',' << q << ',' << num(v[t]) << '\n';
  };
  series("vpp", "p_da", d.p_da);
  series("vpp", "r_sr_up", d.r_sr_up);
  series("vpp", "r_sr_down", d.r_sr_down);
  series("vpp", "h_hpa", d.h_hpa);
  for (const auto& c : d.csp) {
    series(c.name, "p", c.p);
    series(c.name, "r_up", c.r_up);
    series(c.name, "r_down", c.r_down);
    series(c.name, "p_sf", c.p_sf);
    series(c.name, "p_pb", c.p_pb);
    series(c.name, "p_charge", c.p_charge);
    series(c.name, "p_discharge", c.p_discharge);
    series(c.name, "energy", c.energy);
    series(c.name, "heat", c.heat);
    series(c.name, "u", c.u);
    series(c.name, "u_ts", c.u_ts);
    s << "0," << c.name << ",sigma_up," << num(c.sigma_up) << '\n';
    s << "0," << c.name << ",sigma_down," << num(c.sigma_down) << '\n';
  }
  for (const auto& r : d.ndres) {
    series(r.name, "p", r.p);
    series(r.name, "r_up", r.r_up);
    series(r.name, "r_down", r.r_down);
  }
  for (const auto& e : d.electric) {
    series(e.name, "p", e.p);
    series(e.name, "r_up", e.r_up);
    series(e.name, "r_down", e.r_down);
  }
  for (const auto& h : d.thermal) series(h.name, "h", h.h);
  return s.str();
}

std::string worst_case_csv(const model::WorstCaseReport& r) {
  std::ostringstream s;
  s << "source,gamma,periods,protection_cost,tightening\n";
  for (const auto* group : {&r.prices, &r.quantities})
    for (const auto& src : *group) {
      s << src.key << ',' << src.gamma << ',';
      for (std::size_t i = 0; i < src.periods.size(); ++i) s << (i ? " " : "") << src.periods[i] + 1;
      s << ',' << num(src.protection_cost) << ',' << num(src.tightening) << '\n';
    }
  return s.str();
}

namespace {

// Deterministic plans have no protection variables; report every source
// with a zero budget.
model::WorstCaseReport plan_worst_case(const evaluate::Plan& p, const RvppInstance& in) {
  if (p.robust) return model::worst_case_report(p.solution, in, p.budgets);
  model::WorstCaseReport r;
  for (const auto& s : model::price_sources(in, p.budgets)) r.prices.push_back({s.key, 0, {}, {}, {}, 0.0, 0.0});
  for (const auto& s : model::quantity_sources(in, p.budgets))
    r.quantities.push_back({s.key, 0, {}, {}, {}, 0.0, 0.0});
  return r;
}

}  // namespace

std::string summary_csv(const evaluate::Plan& p, const std::string& instance, bool with_timing) {
  std::ostringstream s;
  s << "key,value\n";
  s << "instance," << instance << '\n';
  s << "plan," << p.label << '\n';
  s << "markets," << p.markets.label() << '\n';
  s << "model," << (p.robust ? "robust" : "deterministic") << '\n';
  s << "gamma_dam," << p.budgets.gamma_dam << '\n';
  s << "gamma_srm_up," << p.budgets.gamma_srm_up << '\n';
  s << "gamma_srm_down," << p.budgets.gamma_srm_down << '\n';
  for (const auto& [k, v] : p.budgets.gamma_per_csp) s << "gamma.csp." << k << ',' << v << '\n';
  for (const auto& [k, v] : p.budgets.gamma_per_ndres) s << "gamma.res." << k << ',' << v << '\n';
  for (const auto& [k, v] : p.budgets.gamma_per_demand) s << "gamma.dem." << k << ',' << v << '\n';
  s << "backend," << p.solution.backend << '\n';
  s << "status," << milp::to_string(p.solution.status) << '\n';
  s << "objective," << num(p.objective) << '\n';
  s << "cost," << num(p.cost) << '\n';
  if (with_timing) {
    s << "mip_gap," << num(p.solution.mip_gap) << '\n';
    s << "solve_seconds," << num(p.solution.solve_seconds) << '\n';
  }
  return s.str();
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  const RvppInstance in = load_config_instance(c.instance);
  const UncertaintyBudgets b = resolve_budgets(c, in);
  evaluate::Plan p = evaluate::make_plan(in, b, MarketSet::parse(c.markets), c.solver);
  p.label = plan_label(c, b);
  const auto flex = evaluate::flexibility_metrics(p.decision, in);
  write_all(c,
            {{"schedule.csv", schedule_csv(p.decision, in)},
             {"worst_case.csv", worst_case_csv(plan_worst_case(p, in))},
             {"flexibility.csv", evaluate::flexibility_csv(flex)},
             {"summary.csv", summary_csv(p, c.instance)}},
            out);
  out << p.label << ' ' << p.markets.label() << ": cost " << num(p.cost) << " (" << milp::to_string(p.solution.status)
      << ", gap " << num(p.solution.mip_gap) << ", " << num(p.solution.solve_seconds) << " s)\n";
  if (!acceptable(p.solution.status)) {
    out << "solver stopped before proving optimality; outputs hold the incumbent\n";
    return kSolverFailure;
  }
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const RvppInstance in = load_config_instance(c.instance);
  const auto gammas = parse_gamma_range(c.gamma.value_or("0.." + std::to_string(in.T())));
  const auto curve = evaluate::budget_sweep(in, gammas, MarketSet::parse(c.markets), c.solver, !c.serial);
  write_all(c, {{"budget_sweep.csv", evaluate::budget_sweep_csv(curve)}}, out);
  for (const auto& pt : curve) out << "gamma " << std::setw(2) << pt.gamma << "  cost " << num(pt.cost) << '\n';
  for (auto i : evaluate::sweep_decreases(curve, c.solver.rel_gap_target))
    out << "warning: cost decreases from gamma " << curve[i].gamma << " to " << curve[i + 1].gamma << '\n';
  return kOk;
}

int cmd_matrix(const RunConfig& c, std::ostream& out) {
  const RvppInstance in = load_config_instance(c.instance);
  const auto mx = evaluate::strategy_matrix(in, parse_presets(c.presets), parse_market_list(c.markets), c.solver,
                                            !c.serial);
  const std::string csv = evaluate::strategy_matrix_csv(mx);
  write_all(c, {{"strategy_matrix.csv", csv}}, out);
  out << csv;
  return kOk;
}

int cmd_hpa_sens(const RunConfig& c, std::ostream& out) {
  const RvppInstance in = load_config_instance(c.instance);
  const auto res = evaluate::hpa_price_sensitivity(in, evaluate::default_hpa_variants(in), resolve_budgets(c, in),
                                                   MarketSet::parse(c.markets), c.solver);
  const std::string csv = evaluate::hpa_sensitivity_csv(res);
  write_all(c, {{"hpa_sensitivity.csv", csv}}, out);
  out << csv;
  return kOk;
}

int cmd_oos(const RunConfig& c, std::ostream& out) {
  const RvppInstance in = load_config_instance(c.instance);
  const auto strategies = parse_presets(c.presets);
  const MarketSet ms = MarketSet::parse(c.markets);
  const auto scenarios = evaluate::sample_scenarios(in, c.n, c.seed, evaluate::parse_distribution(c.distribution));
  const auto pen = evaluate::default_penalty(in);
  std::vector<evaluate::LabeledReport> reports;
  for (Strategy s : strategies) {
    const evaluate::Plan p = evaluate::make_plan(in, s, ms, c.solver);
    reports.push_back({to_string(s), c.serial ? evaluate::out_of_sample_serial(p, in, scenarios, pen)
                                              : evaluate::out_of_sample(p, in, scenarios, pen)});
  }
  const std::string csv = evaluate::out_of_sample_csv(reports);
  write_all(c,
            {{"out_of_sample.csv", csv},
             {"out_of_sample_detail.csv", evaluate::out_of_sample_detail_csv(reports)}},
            out);
  out << csv;
  return kOk;
}

int cmd_export(const RunConfig& c, std::ostream& out) {
  const RvppInstance in = load_config_instance(c.instance);
  const UncertaintyBudgets b = resolve_budgets(c, in);
  const MarketSet ms = MarketSet::parse(c.markets);
  const milp::MilpModel m = b.all_zero() ? model::build_deterministic(in, ms) : model::build_robust(in, b, ms);
  if (c.format == "mps")
    write_all(c, {{"model.mps", milp::export_mps(m).text}}, out);
  else if (c.format == "lp")
    write_all(c, {{"model.lp", milp::export_lp(m)}}, out);
  else
    throw InvariantError("unknown --format '" + c.format + "' (expected mps or lp)");
  out << m.num_vars() << " columns, " << m.num_constraints() << " rows\n";
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  constexpr double kTol = 1e-6;
  RandomInstanceOptions ro;
  ro.min_periods = 2;
  ro.max_periods = 6;
  ro.max_units_per_class = 2;
  ro.max_budget = 2;
  ro.max_subsets = 2e5;
  oracle::OracleOptions oo;
  oo.parallel = !c.serial;
  std::ostringstream csv;
  csv << "instance,periods,combinations,robust_objective,worst_case_objective,relative_difference,infeasible,"
         "duality_max_relative\n";
  int failures = 0;
  std::uint64_t infeasible_total = 0;
  for (int i = 0; i < c.count; ++i) {
    const RvppInstance in = random_instance(c.seed + static_cast<std::uint64_t>(i), ro);
    milp::SolveOptions so = c.solver;
    so.rel_gap_target = oo.rel_gap_target;
    const milp::MilpModel m = model::build_robust(in, in.budgets, MarketSet::all());
    const auto sol = milp::solve(m, so);
    if (!sol.ok())
      throw evaluate::SolveFailure("verify: instance " + std::to_string(i + 1) + ": " + milp::to_string(sol.status),
                                   sol.status);
    const auto rep = oracle::evaluate_robust_solution(in, in.budgets, MarketSet::all(), sol, oo);
    double dual = 0.0;
    for (const auto& d : oracle::price_duality(in, in.budgets, sol)) dual = std::max(dual, d.relative_difference);
    const bool ok = rep.matches(kTol) && dual <= kTol && (!c.strict || rep.infeasible == 0);
    failures += ok ? 0 : 1;
    infeasible_total += rep.infeasible;
    csv << i + 1 << ',' << in.T() << ',' << rep.combinations << ',' << num(rep.robust_objective) << ','
        << num(rep.worst_case_objective) << ',' << format_number(rep.relative_difference) << ',' << rep.infeasible
        << ',' << format_number(dual) << '\n';
    out << "instance " << i + 1 << " (T=" << in.T() << ", " << rep.combinations << " combinations): "
        << (ok ? "ok" : "MISMATCH") << "  objective rel diff " << format_number(rep.relative_difference)
        << ", duality rel diff " << format_number(dual) << ", infeasible realizations " << rep.infeasible << '\n';
    if (rep.infeasible > 0) out << "  first infeasible: " << rep.first_infeasible << " (" << rep.first_infeasible_detail << ")\n";
  }
  write_all(c, {{"verify.csv", csv.str()}}, out);
  if (infeasible_total > 0 && !c.strict)
    out << "note: " << infeasible_total
        << " enumerated realizations were infeasible for the fixed first stage (not counted; use --strict)\n";
  out << (failures == 0 ? "verify: all instances agree with the oracle\n"
                        : "verify: " + std::to_string(failures) + " instance(s) disagree\n");
  return failures == 0 ? kOk : kVerifyFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Day-ahead scheduling of a renewable-only virtual power plant under budgeted uncertainty", "rvpp"};
  app.require_subcommand(1);
  RunConfig c;
  std::string solver_name;

  auto common = [&](CLI::App* s) {
    s->add_option("--instance", c.instance, "Instance JSON file, or @reference / @toy for the bundled data")
        ->capture_default_str();
    s->add_option("--out", c.out, "Output directory (created if absent)")->capture_default_str();
    s->add_flag("--force", c.force, "Overwrite existing output files");
    s->add_option("--gap", c.solver.rel_gap_target, "Relative MIP gap target")->capture_default_str();
    s->add_option("--time-limit", c.solver.time_limit_seconds, "Solver time limit in seconds (0: none)")
        ->capture_default_str();
    s->add_option("--solver", solver_name, "Backend: highs or cbc (default: $RVPP_SOLVER, else highs)")
        ->check(CLI::IsMember({"highs", "cbc"}));
    s->add_flag("--serial", c.serial, "Run independent solves and scenarios one at a time");
  };
  auto markets = [&](CLI::App* s, const char* help) {
    s->add_option("--markets", c.markets, help)->capture_default_str();
  };
  auto budgets = [&](CLI::App* s) {
    auto* p = s->add_option("--preset", c.preset, "deterministic|optimistic|balanced|pessimistic (or det/opt/bal/pes)");
    s->add_option("--gamma", c.gamma, "One budget for every source (capped at daylight periods for pv and solar fields)")
        ->excludes(p);
  };

  auto* solve = app.add_subcommand("solve", "Solve one plan; writes schedule, worst_case, flexibility and summary CSVs");
  common(solve);
  budgets(solve);
  markets(solve, "Market set, e.g. dam or dam,srm,hpa");

  auto* sweep = app.add_subcommand("sweep", "Cost versus a scalar budget; writes budget_sweep.csv");
  common(sweep);
  sweep->add_option("--gamma", c.gamma, "Budget or range a..b (default 0..T)");
  markets(sweep, "Market set, e.g. dam or dam,srm,hpa");

  auto* matrix = app.add_subcommand("matrix", "Strategy by market-set cost table; writes strategy_matrix.csv");
  common(matrix);
  matrix->add_option("--presets", c.presets, "Comma-separated presets")->capture_default_str();
  auto* matrix_markets =
      matrix->add_option("--markets", c.markets, "all-combos, or market sets separated by ';' (default all-combos)");

  auto* hpa = app.add_subcommand("hpa-sens", "Cost under alternative HPA tariffs; writes hpa_sensitivity.csv");
  common(hpa);
  budgets(hpa);
  markets(hpa, "Market set, e.g. dam,hpa");

  auto* oos =
      app.add_subcommand("oos", "Out-of-sample evaluation; writes out_of_sample.csv and out_of_sample_detail.csv");
  common(oos);
  oos->add_option("--presets", c.presets, "Comma-separated presets")->capture_default_str();
  markets(oos, "Market set, e.g. dam,srm,hpa");
  oos->add_option("--n", c.n, "Number of scenarios")->capture_default_str()->check(CLI::PositiveNumber);
  oos->add_option("--seed", c.seed, "Sampling seed")->capture_default_str();
  oos->add_option("--distribution", c.distribution, "uniform or triangular")->capture_default_str();

  auto* exp = app.add_subcommand("export", "Write the MILP as model.mps (or model.lp)");
  common(exp);
  budgets(exp);
  markets(exp, "Market set, e.g. dam,srm,hpa");
  exp->add_option("--format", c.format, "mps or lp")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Check robust solutions against subset enumeration on tiny instances");
  common(verify);
  verify->add_option("--count", c.count, "Number of random instances")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--seed", c.seed, "First instance seed")->capture_default_str();
  verify->add_flag("--strict", c.strict, "Also fail on infeasible enumerated realizations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (!solver_name.empty()) {
      milp::make_backend(solver_name);  // rejects unknown names before any work
      ::setenv("RVPP_SOLVER", solver_name.c_str(), 1);
    }
    CLI::App* sub = app.get_subcommands().front();
    c.subcommand = sub->get_name();
    if (c.subcommand == "matrix" && matrix_markets->count() == 0) c.markets = "all-combos";
    if (c.subcommand == "solve") return cmd_solve(c, out);
    if (c.subcommand == "sweep") return cmd_sweep(c, out);
    if (c.subcommand == "matrix") return cmd_matrix(c, out);
    if (c.subcommand == "hpa-sens") return cmd_hpa_sens(c, out);
    if (c.subcommand == "oos") return cmd_oos(c, out);
    if (c.subcommand == "export") return cmd_export(c, out);
    return cmd_verify(c, out);
  } catch (const evaluate::SolveFailure& e) {
    err << "error: " << e.what() << '\n';
    return e.status == milp::SolveStatus::infeasible ? kInfeasible : kSolverFailure;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace rvpp::cli
