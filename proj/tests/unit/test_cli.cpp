#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rvpp/cli/cli.hpp"
#include "rvpp/core/instance_io.hpp"
#include "rvpp/core/synthetic.hpp"

using namespace rvpp;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result rvpp_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rvpp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rvpp_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

std::map<std::string, std::string> key_values(const fs::path& p) {
  std::map<std::string, std::string> kv;
  for (const auto& r : rows(slurp(p)))
    if (r.size() == 2) kv[r[0]] = r[1];
  return kv;
}

bool parse_double(const std::string& s, double& v) {
  try {
    std::size_t used = 0;
    v = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

// Cell-wise comparison; numbers within the six significant digits the writer keeps.
void check_golden(const fs::path& produced, const std::string& golden_name, const std::vector<std::string>& skip_keys = {}) {
  auto got = rows(slurp(produced));
  const auto want = rows(slurp(fs::path(RVPP_GOLDEN_DIR) / golden_name));
  std::erase_if(got, [&](const auto& r) { return !r.empty() && std::find(skip_keys.begin(), skip_keys.end(), r[0]) != skip_keys.end(); });
  INFO(golden_name);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    REQUIRE(got[i].size() == want[i].size());
    for (std::size_t j = 0; j < want[i].size(); ++j) {
      double a = 0, b = 0;
      if (parse_double(got[i][j], a) && parse_double(want[i][j], b)) {
        INFO("row " << i + 1 << " col " << j + 1);
        CHECK(std::abs(a - b) <= 1e-5 * std::max(1.0, std::abs(b)));
      } else {
        CHECK(got[i][j] == want[i][j]);
      }
    }
  }
}

}  // namespace

TEST_CASE("cli: missing instance file exits 1 and names the path") {
  const auto r = rvpp_cli({"solve", "--instance", "/nonexistent/inst.json", "--out", scratch("missing").string()});
  CHECK(r.code == cli::kBadInput);
  CHECK(r.err.find("/nonexistent/inst.json") != std::string::npos);
}

TEST_CASE("cli: bad arguments exit 1") {
  CHECK(rvpp_cli({"solve", "--instance", "@toy", "--preset", "reckless", "--out", scratch("bad").string()}).code == 1);
  CHECK(rvpp_cli({"solve", "--instance", "@toy", "--gamma", "9", "--out", scratch("bad").string()}).code == 1);
  CHECK(rvpp_cli({"sweep", "--instance", "@toy", "--gamma", "3..1", "--out", scratch("bad").string()}).code == 1);
  CHECK(rvpp_cli({"solve", "--instance", "@toy", "--solver", "gurobi", "--out", scratch("bad").string()}).code == 1);
  CHECK(rvpp_cli({"frobnicate"}).code == 1);
  CHECK(rvpp_cli({"--help"}).code == 0);
}

TEST_CASE("cli: gamma range parsing") {
  CHECK(cli::parse_gamma_range("7") == std::vector<int>{7});
  CHECK(cli::parse_gamma_range("2..4") == std::vector<int>{2, 3, 4});
  CHECK_THROWS_AS(cli::parse_gamma_range("-1"), InvariantError);
  CHECK_THROWS_AS(cli::parse_gamma_range("1..x"), InvariantError);
}

TEST_CASE("cli: infeasible data exits 2") {
  RvppInstance in = toy_instance();
  auto& sf = in.csp_units[0].sf_bounds;
  sf = BoundSeries::degenerate(Series(in.T(), 0.0));
  const fs::path dir = scratch("infeasible");
  fs::create_directories(dir);
  save_instance_file(in, dir / "inst.json");
  const auto r = rvpp_cli({"solve", "--instance", (dir / "inst.json").string(), "--gamma", "0", "--markets", "dam,srm",
                           "--out", (dir / "out").string()});
  CHECK(r.code == cli::kInfeasible);
  CHECK(r.err.find("infeasible") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "summary.csv"));
}

TEST_CASE("cli: balanced toy solve matches the frozen outputs") {
  const fs::path dir = scratch("golden");
  const auto r = rvpp_cli({"solve", "--instance", "@toy", "--preset", "bal", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  check_golden(dir / "schedule.csv", "schedule.csv");
  check_golden(dir / "worst_case.csv", "worst_case.csv");
  check_golden(dir / "flexibility.csv", "flexibility.csv");
  check_golden(dir / "summary.csv", "summary.csv", {"mip_gap", "solve_seconds"});

  const auto kv = key_values(dir / "summary.csv");
  CHECK(kv.at("gamma_dam") == "4");
  CHECK(kv.at("gamma.res.pv1") == "4");

  SUBCASE("existing outputs are not overwritten without --force") {
    const std::string before = slurp(dir / "schedule.csv");
    const auto again = rvpp_cli({"solve", "--instance", "@toy", "--gamma", "0", "--out", dir.string()});
    CHECK(again.code == cli::kBadInput);
    CHECK(again.err.find("--force") != std::string::npos);
    CHECK(slurp(dir / "schedule.csv") == before);
    CHECK(rvpp_cli({"solve", "--instance", "@toy", "--gamma", "0", "--out", dir.string(), "--force"}).code == 0);
    CHECK(slurp(dir / "schedule.csv") != before);
  }
}

TEST_CASE("cli: gamma 0 solve reports the deterministic cost") {
  const fs::path a = scratch("g0"), b = scratch("det");
  REQUIRE(rvpp_cli({"solve", "--instance", "@toy", "--gamma", "0", "--out", a.string()}).code == 0);
  REQUIRE(rvpp_cli({"solve", "--instance", "@toy", "--preset", "det", "--out", b.string()}).code == 0);
  double ca = 0, cb = 0;
  REQUIRE(parse_double(key_values(a / "summary.csv").at("cost"), ca));
  REQUIRE(parse_double(key_values(b / "summary.csv").at("cost"), cb));
  CHECK(ca == doctest::Approx(cb).epsilon(1e-6));
  CHECK(ca == doctest::Approx(-24380.7).epsilon(1e-5));
}

TEST_CASE("cli: sweep over the whole horizon") {
  const fs::path dir = scratch("sweep");
  const auto r = rvpp_cli({"sweep", "--instance", "@toy", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(rows(slurp(dir / "budget_sweep.csv")).size() == 1 + 5);
  check_golden(dir / "budget_sweep.csv", "budget_sweep.csv");
}

TEST_CASE("cli: matrix defaults to four presets by four market sets") {
  const fs::path dir = scratch("matrix");
  REQUIRE(rvpp_cli({"matrix", "--instance", "@toy", "--out", dir.string()}).code == 0);
  const auto t = rows(slurp(dir / "strategy_matrix.csv"));
  REQUIRE(t.size() == 5);
  for (const auto& r : t) CHECK(r.size() == 5);
  CHECK(t[1][0] == "deterministic");

  const fs::path one = scratch("matrix1");
  REQUIRE(rvpp_cli({"matrix", "--instance", "@toy", "--presets", "bal", "--markets", "dam;dam,srm", "--out", one.string()})
              .code == 0);
  const auto u = rows(slurp(one / "strategy_matrix.csv"));
  REQUIRE(u.size() == 2);
  CHECK(u[0] == std::vector<std::string>{"strategy", "DAM", "DAM+SRM"});
  CHECK(u[1][1] == t[3][1]);
}

TEST_CASE("cli: export and oos are byte-reproducible") {
  const fs::path a = scratch("rep_a"), b = scratch("rep_b");
  for (const auto& d : {a, b}) {
    REQUIRE(rvpp_cli({"export", "--instance", "@toy", "--preset", "bal", "--out", d.string()}).code == 0);
    REQUIRE(rvpp_cli({"oos", "--instance", "@toy", "--n", "20", "--out", d.string()}).code == 0);
  }
  CHECK(slurp(a / "model.mps") == slurp(b / "model.mps"));
  CHECK(slurp(a / "out_of_sample.csv") == slurp(b / "out_of_sample.csv"));
  CHECK(slurp(a / "out_of_sample_detail.csv") == slurp(b / "out_of_sample_detail.csv"));
  CHECK(rows(slurp(a / "out_of_sample.csv")).size() == 5);
  CHECK(rows(slurp(a / "out_of_sample_detail.csv")).size() == 1 + 4 * 20);

  REQUIRE(rvpp_cli({"export", "--instance", "@toy", "--format", "lp", "--out", a.string()}).code == 0);
  CHECK(fs::file_size(a / "model.lp") > 0);
  CHECK(rvpp_cli({"export", "--instance", "@toy", "--format", "xml", "--out", a.string()}).code == 1);
}

TEST_CASE("cli: hpa-sens and verify") {
  const fs::path dir = scratch("misc");
  REQUIRE(rvpp_cli({"hpa-sens", "--instance", "@toy", "--out", dir.string()}).code == 0);
  CHECK(rows(slurp(dir / "hpa_sensitivity.csv")).size() == 5);
  const auto v = rvpp_cli({"verify", "--count", "3", "--out", dir.string()});
  CHECK(v.code == 0);
  CHECK(rows(slurp(dir / "verify.csv")).size() == 4);
}
