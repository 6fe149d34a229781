#include "rvpp/model/invariants.hpp"

#include <cmath>
#include <sstream>

#include "builder.hpp"

namespace rvpp::model {

namespace {

class Checker {
 public:
  Checker(const FirstStageDecision& d, const RvppInstance& in, double tol) : d_(d), in_(in), tol_(tol) {}

  std::vector<InvariantFailure> run() {
    const auto cap = detail::capacities(in_);
    scale_ = 1.0 + cap.generation + cap.demand + cap.heat;
    markets();
    balance();
    for (std::size_t i = 0; i < d_.csp.size(); ++i) csp(in_.csp_units[i], d_.csp[i]);
    demands();
    return std::move(out_);
  }

 private:
  void fail(const std::string& check, const std::string& detail) { out_.push_back({check, detail}); }

  static std::string at(const std::string& what, int t) { return what + " t=" + std::to_string(t + 1); }
  static std::string num(double v) {
    std::ostringstream s;
    s.precision(9);
    s << v;
    return s.str();
  }

  // a <= b within tolerance relative to the magnitudes involved.
  bool le(double a, double b) const { return a <= b + tol_ * (1.0 + std::max(std::abs(a), std::abs(b))); }

  void markets() {
    const auto cap = detail::capacities(in_);
    const double kcap = in_.market.kappa * (cap.generation - cap.demand);
    for (int t = 0; t < in_.T(); ++t) {
      if (!le(d_.r_sr_up[t], kcap)) fail("kappa_cap", at("r_sr_up " + num(d_.r_sr_up[t]) + " > " + num(kcap), t));
      if (!le(d_.r_sr_down[t], kcap))
        fail("kappa_cap", at("r_sr_down " + num(d_.r_sr_down[t]) + " > " + num(kcap), t));
      if (!le(d_.p_da[t] + d_.r_sr_up[t], cap.generation)) fail("trade_cap", at("sale plus up reserve", t));
      if (!le(-cap.demand, d_.p_da[t] - d_.r_sr_down[t])) fail("trade_cap", at("purchase plus down reserve", t));
      if (!d_.markets.srm_enabled && (d_.r_sr_up[t] != 0.0 || d_.r_sr_down[t] != 0.0))
        fail("srm_disabled", at("nonzero reserve", t));
      if (!d_.markets.hpa_enabled && d_.h_hpa[t] != 0.0) fail("hpa_disabled", at("nonzero HPA heat", t));
    }
  }

  void balance() {
    for (int t = 0; t < in_.T(); ++t) {
      for (Scenario s : kScenarios) {
        const double r = balance_residual(d_, t, s);
        if (std::abs(r) > tol_ * scale_)
          fail("balance", at(std::string("scenario ") + label(s) + " residual " + num(r), t));
      }
      const double h = heat_residual(d_, t);
      if (std::abs(h) > tol_ * scale_) fail("heat_balance", at("residual " + num(h), t));
      double up = 0.0, dn = 0.0;
      for (const auto& c : d_.csp) up += c.r_up[t], dn += c.r_down[t];
      for (const auto& r : d_.ndres) up += r.r_up[t], dn += r.r_down[t];
      for (const auto& e : d_.electric) up += e.r_up[t], dn += e.r_down[t];
      if (std::abs(up - d_.r_sr_up[t]) > tol_ * scale_ || std::abs(dn - d_.r_sr_down[t]) > tol_ * scale_)
        fail("reserve_reconcile", at("unit reserves differ from traded reserve", t));
    }
  }

  void csp(const CspUnit& u, const CspSchedule& c) {
    const int T = in_.T();
    const std::string w = c.name + " ";
    const double span = u.ts_e_max - u.ts_e_min;
    for (int t = 0; t < T; ++t) {
      for (Scenario s : kScenarios) {
        const Series& x = c.x[index(s)][t];
        double sum = 0.0;
        int first = -1, last = -1, count = 0;
        for (int k = 0; k < static_cast<int>(x.size()); ++k) {
          sum += x[k];
          if (x[k] > tol_) {
            if (first < 0) first = k;
            last = k;
            ++count;
          }
        }
        if (std::abs(sum - 1.0) > tol_) fail("sos2", at(w + label(s) + " weights sum " + num(sum), t));
        if (count > 2 || (count == 2 && last != first + 1))
          fail("sos2", at(w + label(s) + " non-adjacent positive weights", t));
      }
      if (c.p_charge[t] > tol_ && c.p_discharge[t] > tol_)
        fail("ts_exclusive", at(w + "charges and discharges", t));
      if (!le(u.ts_e_min + c.sigma_up * span, c.energy[t]) || !le(c.energy[t], u.ts_e_max - c.sigma_down * span))
        fail("ts_margin", at(w + "energy " + num(c.energy[t]) + " outside reserved margins", t));
      if (c.u[t] < 0.5 && (c.p[t] > tol_ || c.r_up[t] > tol_ || c.r_down[t] > tol_))
        fail("commitment", at(w + "output or reserve while off", t));
    }
    if (std::abs(c.energy.front() - c.energy.back()) > tol_ * (1.0 + u.ts_e_max))
      fail("ts_cyclic", w + "first and last energy differ");
    run_lengths(u, c);
  }

  void run_lengths(const CspUnit& u, const CspSchedule& c) {
    const int T = in_.T();
    const std::string w = c.name + " ";
    std::vector<int> on(T);
    for (int t = 0; t < T; ++t) on[t] = c.u[t] > 0.5 ? 1 : 0;
    for (int t = 0; t < std::min(u.initial_on, T); ++t)
      if (!on[t]) fail("min_up_down", at(w + "off during initial on periods", t));
    for (int t = 0; t < std::min(u.initial_off, T); ++t)
      if (on[t]) fail("min_up_down", at(w + "on during initial off periods", t));
    const int u0 = u.initial_on > 0 ? 1 : 0;
    int t = 0;
    while (t < T) {
      int e = t;
      while (e < T && on[e] == on[t]) ++e;
      const int prev = t == 0 ? u0 : on[t - 1];
      if (prev != on[t]) {
        const int need = std::min(on[t] ? u.min_up : u.min_down, T - t);
        if (e - t < need)
          fail("min_up_down", at(w + (on[t] ? "on" : "off") + " run of " + std::to_string(e - t) + " from", t));
      }
      t = e;
    }
  }

  void demands() {
    const double dt = in_.dt();
    for (std::size_t i = 0; i < d_.electric.size(); ++i) {
      const auto& dm = in_.electric_demands[i];
      const auto& s = d_.electric[i];
      double energy = 0.0;
      for (int t = 0; t < in_.T(); ++t) {
        if (!le(s.r_up[t], dm.beta_up[t] * s.p[t]) || !le(s.r_down[t], dm.beta_down[t] * s.p[t]))
          fail("demand_share", at(s.name + " reserve above flexible share", t));
        energy += (s.p[t] - s.r_up[t]) * dt;
      }
      if (!le(dm.min_energy, energy)) fail("demand_energy", s.name + " energy " + num(energy));
    }
    for (std::size_t i = 0; i < d_.thermal.size(); ++i) {
      double energy = 0.0;
      for (double h : d_.thermal[i].h) energy += h * dt;
      if (!le(in_.thermal_demands[i].min_energy, energy))
        fail("demand_energy", d_.thermal[i].name + " heat energy " + num(energy));
    }
  }

  const FirstStageDecision& d_;
  const RvppInstance& in_;
  double tol_;
  double scale_ = 1.0;
  std::vector<InvariantFailure> out_;
};

}  // namespace

std::vector<InvariantFailure> check_invariants(const FirstStageDecision& d, const RvppInstance& in, double tol) {
  return Checker(d, in, tol).run();
}

}  // namespace rvpp::model
