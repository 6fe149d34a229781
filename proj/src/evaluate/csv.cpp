#include <cstdio>
#include <fstream>
#include <sstream>

#include "rvpp/evaluate/evaluate.hpp"

namespace rvpp::evaluate {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content, bool force) {
  namespace fs = std::filesystem;
  if (fs::exists(path) && !force) throw Error("refusing to overwrite " + path.string() + " (use --force)");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string strategy_matrix_csv(const StrategyMatrix& mx) {
  std::ostringstream s;
  s << "strategy";
  for (const auto& m : mx.markets) s << ',' << m.label();
  s << '\n';
  for (std::size_t i = 0; i < mx.strategies.size(); ++i) {
    s << to_string(mx.strategies[i]);
    for (double c : mx.cost[i]) s << ',' << format_number(c);
    s << '\n';
  }
  return s.str();
}

std::string budget_sweep_csv(const std::vector<SweepPoint>& curve) {
  std::ostringstream s;
  s << "gamma,cost,objective,energy_sold,energy_bought,reserve_up,reserve_down,hpa_heat,csp_reserve_up,"
       "csp_reserve_down,csp_energy\n";
  for (const auto& p : curve)
    s << p.gamma << ',' << format_number(p.cost) << ',' << format_number(p.objective) << ','
      << format_number(p.energy_sold) << ',' << format_number(p.energy_bought) << ',' << format_number(p.reserve_up)
      << ',' << format_number(p.reserve_down) << ',' << format_number(p.hpa_heat) << ','
      << format_number(p.csp_reserve_up) << ',' << format_number(p.csp_reserve_down) << ','
      << format_number(p.csp_energy) << '\n';
  return s.str();
}

std::string flexibility_csv(const FlexibilityTable& tab) {
  std::ostringstream s;
  s << "unit,kind,capacity,total_up,total_down,up_ratio_pct,down_ratio_pct,up_hours,down_hours\n";
  for (const auto& r : tab.rows)
    s << r.unit << ',' << r.kind << ',' << format_number(r.capacity) << ',' << format_number(r.total_up) << ','
      << format_number(r.total_down) << ',' << format_number(r.up_ratio_pct) << ','
      << format_number(r.down_ratio_pct) << ',' << format_number(r.up_hours) << ',' << format_number(r.down_hours)
      << '\n';
  return s.str();
}

std::string hpa_sensitivity_csv(const std::vector<HpaResult>& results) {
  std::ostringstream s;
  s << "variant,cost,hpa_heat,csp_heat\n";
  for (const auto& r : results)
    s << r.name << ',' << format_number(r.cost) << ',' << format_number(r.hpa_heat) << ','
      << format_number(r.csp_heat) << '\n';
  return s.str();
}

std::string out_of_sample_csv(const std::vector<LabeledReport>& reports) {
  std::ostringstream s;
  s << "strategy,scenarios,avg_cost,avg_penalty,avg_net,max_penalty\n";
  for (const auto& [label, r] : reports)
    s << label << ',' << r.scenarios.size() << ',' << format_number(r.avg_cost) << ','
      << format_number(r.avg_penalty) << ',' << format_number(r.avg_net) << ',' << format_number(r.max_penalty)
      << '\n';
  return s.str();
}

std::string out_of_sample_detail_csv(const std::vector<LabeledReport>& reports) {
  std::ostringstream s;
  s << "strategy,scenario,cost,penalty,net,energy_imbalance,reserve_shortfall,heat_shortfall\n";
  for (const auto& [label, r] : reports)
    for (std::size_t i = 0; i < r.scenarios.size(); ++i) {
      const auto& o = r.scenarios[i];
      s << label << ',' << i + 1 << ',' << format_number(o.cost) << ',' << format_number(o.penalty) << ','
        << format_number(o.cost + o.penalty) << ',' << format_number(o.energy_imbalance) << ','
        << format_number(o.reserve_shortfall) << ',' << format_number(o.heat_shortfall) << '\n';
    }
  return s.str();
}

}  // namespace rvpp::evaluate
