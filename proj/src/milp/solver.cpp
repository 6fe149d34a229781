#include "rvpp/milp/solver.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <Highs.h>

#include "rvpp/core/error.hpp"
#include "rvpp/milp/mps.hpp"

#ifndef RVPP_CBC_DEFAULT
#define RVPP_CBC_DEFAULT ""
#endif

namespace rvpp::milp {

namespace {

using Clock = std::chrono::steady_clock;

bool has_binaries(const MilpModel& m) {
  for (const auto& v : m.variables())
    if (v.kind == VarKind::binary) return true;
  return false;
}

class HighsBackend final : public SolverBackend {
 public:
  std::string name() const override { return "highs"; }

  MilpSolution solve(const MilpModel& model, const SolveOptions& opt) const override {
    model.check();
    const auto start = Clock::now();
    MilpSolution sol;
    sol.backend = name();

    Highs h;
    configure(h, opt);
    pass(h, model);
    const bool mip = has_binaries(model);
    h.run();
    HighsModelStatus st = h.getModelStatus();
    if (st == HighsModelStatus::kUnboundedOrInfeasible) {
      h.setOptionValue("presolve", "off");
      h.run();
      st = h.getModelStatus();
    }
    sol.status = map_status(st);
    sol.mip_gap = mip ? h.getInfo().mip_gap : 0.0;
    if (st == HighsModelStatus::kModelEmpty) {
      sol.status = SolveStatus::optimal;
      sol.values.assign(model.num_vars(), 0.0);
    }
    const bool incumbent = h.getSolution().value_valid || st == HighsModelStatus::kModelEmpty;
    if (incumbent && sol.status != SolveStatus::infeasible && sol.status != SolveStatus::unbounded &&
        st != HighsModelStatus::kModelEmpty)
      sol.values = h.getSolution().col_value;
    if (sol.status == SolveStatus::error) sol.message = h.modelStatusToString(st);

    if (!sol.values.empty()) {
      if (mip && opt.polish) polish(h, model, sol);
      sol.objective_value = model.evaluate_objective(sol.values);
    }
    attach_names(model, sol);
    sol.solve_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return sol;
  }

 private:
  static void configure(Highs& h, const SolveOptions& opt) {
    // RVPP_SOLVER_LOG=1 shows the HiGHS log on stdout.
    const char* log = std::getenv("RVPP_SOLVER_LOG");
    h.setOptionValue("output_flag", log != nullptr && std::string(log) == "1");
    h.setOptionValue("threads", 1);
    h.setOptionValue("random_seed", static_cast<int>(opt.seed % 2147483647ULL));
    h.setOptionValue("mip_rel_gap", opt.rel_gap_target);
    h.setOptionValue("mip_feasibility_tolerance", 1e-7);
    h.setOptionValue("primal_feasibility_tolerance", 1e-8);
    h.setOptionValue("dual_feasibility_tolerance", 1e-8);
    if (opt.time_limit_seconds > 0.0) h.setOptionValue("time_limit", opt.time_limit_seconds);
  }

  static void pass(Highs& h, const MilpModel& model) {
    const auto n = static_cast<HighsInt>(model.num_vars());
    const auto m = static_cast<HighsInt>(model.num_constraints());
    std::vector<double> cost(model.num_vars(), 0.0), lo(model.num_vars()), up(model.num_vars());
    std::vector<HighsInt> integrality(model.num_vars(), 0);
    for (const auto& t : model.objective().terms) cost[t.var.index] += t.coef;
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
      const auto& v = model.variables()[j];
      lo[j] = v.lower;
      up[j] = v.upper;
      integrality[j] = v.kind == VarKind::binary ? 1 : 0;
    }
    // Column-wise matrix.
    std::vector<HighsInt> count(model.num_vars() + 1, 0);
    for (const auto& r : model.constraints())
      for (const auto& t : r.terms) ++count[t.var.index + 1];
    std::vector<HighsInt> start(model.num_vars() + 1, 0);
    for (std::size_t j = 0; j < model.num_vars(); ++j) start[j + 1] = start[j] + count[j + 1];
    std::vector<HighsInt> index(static_cast<std::size_t>(start.back()));
    std::vector<double> value(static_cast<std::size_t>(start.back()));
    std::vector<HighsInt> fill(start.begin(), start.end() - 1);
    std::vector<double> rlo(model.num_constraints()), rup(model.num_constraints());
    for (std::size_t i = 0; i < model.num_constraints(); ++i) {
      const auto& r = model.constraints()[i];
      rlo[i] = r.sense == Sense::le ? -kHighsInf : r.rhs;
      rup[i] = r.sense == Sense::ge ? kHighsInf : r.rhs;
      for (const auto& t : r.terms) {
        const auto k = static_cast<std::size_t>(fill[t.var.index]++);
        index[k] = static_cast<HighsInt>(i);
        value[k] = t.coef;
      }
    }
    const HighsInt sense = model.objective().sense == ObjSense::maximize ? -1 : 1;
    const HighsStatus s = h.passModel(n, m, static_cast<HighsInt>(index.size()), 1, sense, model.objective().offset,
                                      cost.data(), lo.data(), up.data(), rlo.data(), rup.data(), start.data(),
                                      index.data(), value.data(), has_binaries(model) ? integrality.data() : nullptr);
    if (s == HighsStatus::kError) throw SolverError("HiGHS rejected the model");
  }

  static void polish(Highs& h, const MilpModel& model, MilpSolution& sol) {
    std::vector<HighsInt> cols;
    std::vector<double> vals;
    for (std::size_t j = 0; j < model.num_vars(); ++j)
      if (model.variables()[j].kind == VarKind::binary) {
        cols.push_back(static_cast<HighsInt>(j));
        vals.push_back(std::round(sol.values[j]));
      }
    std::vector<HighsVarType> cont(cols.size(), HighsVarType::kContinuous);
    h.changeColsIntegrality(static_cast<HighsInt>(cols.size()), cols.data(), cont.data());
    h.changeColsBounds(static_cast<HighsInt>(cols.size()), cols.data(), vals.data(), vals.data());
    h.setOptionValue("presolve", "on");
    h.run();
    if (h.getModelStatus() == HighsModelStatus::kOptimal) {
      sol.values = h.getSolution().col_value;
      for (std::size_t k = 0; k < cols.size(); ++k) sol.values[static_cast<std::size_t>(cols[k])] = vals[k];
    }
  }

  static SolveStatus map_status(HighsModelStatus st) {
    switch (st) {
      case HighsModelStatus::kOptimal: return SolveStatus::optimal;
      case HighsModelStatus::kInfeasible: return SolveStatus::infeasible;
      case HighsModelStatus::kUnbounded:
      case HighsModelStatus::kUnboundedOrInfeasible: return SolveStatus::unbounded;
      case HighsModelStatus::kTimeLimit: return SolveStatus::time_limit;
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt:
      case HighsModelStatus::kObjectiveBound:
      case HighsModelStatus::kObjectiveTarget: return SolveStatus::gap_limit;
      default: return SolveStatus::error;
    }
  }
};

bool executable(const std::string& path) { return !path.empty() && ::access(path.c_str(), X_OK) == 0; }

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

class CbcBackend final : public SolverBackend {
 public:
  explicit CbcBackend(std::string exe) : exe_(std::move(exe)) {}
  std::string name() const override { return "cbc"; }

  MilpSolution solve(const MilpModel& model, const SolveOptions& opt) const override {
    const auto start = Clock::now();
    static std::atomic<unsigned> counter{0};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("rvpp-cbc-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(dir);
    struct Cleanup {
      fs::path p;
      ~Cleanup() {
        std::error_code ec;
        fs::remove_all(p, ec);
      }
    } cleanup{dir};

    const MpsExport mps = export_mps(model);
    {
      std::ofstream f(dir / "model.mps", std::ios::binary);
      f << mps.text;
    }
    std::ostringstream cmd;
    cmd << shell_quote(exe_) << " " << shell_quote((dir / "model.mps").string());
    // CBC ignores the OBJSENSE section; the direction must be passed explicitly.
    if (model.objective().sense == ObjSense::maximize) cmd << " -max";
    cmd << " -threads 1 -randomCbcSeed " << (opt.seed % 1000000 + 1) << " -ratioGap " << opt.rel_gap_target
        << " -primalTolerance 1e-8 -integerTolerance 1e-7";
    if (opt.time_limit_seconds > 0.0) cmd << " -seconds " << opt.time_limit_seconds;
    cmd << " -solve -printingOptions all -solution " << shell_quote((dir / "sol.txt").string()) << " > "
        << shell_quote((dir / "log.txt").string()) << " 2>&1";
    const int rc = std::system(cmd.str().c_str());
    (void)rc;

    MilpSolution sol;
    sol.backend = name();
    std::ifstream in(dir / "sol.txt");
    if (!in) throw SolverError("CBC produced no solution file (command: " + cmd.str() + ")");
    std::string first;
    std::getline(in, first);
    sol.status = parse_status(first);
    if (sol.status != SolveStatus::infeasible && sol.status != SolveStatus::unbounded) {
      std::unordered_map<std::string, std::size_t> col;
      for (std::size_t j = 0; j < mps.column_names.size(); ++j) col[mps.column_names[j]] = j;
      sol.values.assign(model.num_vars(), 0.0);
      std::string line;
      while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok)
          if (tok != "**") toks.push_back(tok);
        if (toks.size() < 3) continue;
        auto it = col.find(toks[1]);
        if (it == col.end()) continue;
        sol.values[it->second] = std::stod(toks[2]);
      }
      const auto pos = first.find("objective value");
      sol.objective_value = pos == std::string::npos ? model.evaluate_objective(sol.values)
                                                     : std::stod(first.substr(pos + 15));
    }
    attach_names(model, sol);
    sol.solve_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return sol;
  }

 private:
  static SolveStatus parse_status(const std::string& s) {
    if (s.rfind("Optimal", 0) == 0) return SolveStatus::optimal;
    if (s.find("nfeasible") != std::string::npos) return SolveStatus::infeasible;
    if (s.find("nbounded") != std::string::npos) return SolveStatus::unbounded;
    if (s.find("time") != std::string::npos) return SolveStatus::time_limit;
    if (s.find("Stopped") != std::string::npos) return SolveStatus::gap_limit;
    return SolveStatus::error;
  }

  std::string exe_;
};

}  // namespace

std::string cbc_executable() {
  if (const char* env = std::getenv("RVPP_CBC"); env && executable(env)) return env;
  if (executable(RVPP_CBC_DEFAULT)) return RVPP_CBC_DEFAULT;
  if (const char* path = std::getenv("PATH")) {
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':'))
      if (executable(dir + "/cbc")) return dir + "/cbc";
  }
  return "";
}

std::unique_ptr<SolverBackend> make_backend(const std::string& name) {
  if (name == "highs") return std::make_unique<HighsBackend>();
  if (name == "cbc") {
    std::string exe = cbc_executable();
    if (exe.empty()) throw SolverError("CBC backend unavailable: set RVPP_CBC or put cbc on PATH");
    return std::make_unique<CbcBackend>(exe);
  }
  throw SolverError("unknown solver backend '" + name + "' (expected highs or cbc)");
}

std::string default_backend_name() {
  const char* env = std::getenv("RVPP_SOLVER");
  return env && *env ? std::string(env) : std::string("highs");
}

std::unique_ptr<SolverBackend> default_backend() { return make_backend(default_backend_name()); }

MilpSolution solve(const MilpModel& model, const SolveOptions& options) { return default_backend()->solve(model, options); }

}  // namespace rvpp::milp
