#pragma once

#include <array>
#include <string>
#include <string_view>

namespace rvpp::model {

// Real-time reserve activation scenarios. Every scheduling constraint that
// involves a reserve holds in each of the three.
enum class Scenario { up, down, none };

inline constexpr std::array<Scenario, 3> kScenarios = {Scenario::up, Scenario::down, Scenario::none};

// +1 for up, -1 for down, 0 for none.
inline double sign(Scenario s) { return s == Scenario::up ? 1.0 : s == Scenario::down ? -1.0 : 0.0; }
inline const char* label(Scenario s) { return s == Scenario::up ? "up" : s == Scenario::down ? "dn" : "none"; }
inline int index(Scenario s) { return static_cast<int>(s); }

// Variable and constraint names shared by the builders, the decoders and the
// tests. Periods t are 0-based arguments and appear 1-based in names.
namespace names {

std::string at(std::string_view base, int t);

std::string p_da(int t);
std::string r_sr_up(int t);
std::string r_sr_dn(int t);
std::string h_hpa(int t);

// Unit-scoped names: csp.<unit>.<field>[t], res.<unit>.<field>[t],
// ed.<unit>.<field>[t], td.<unit>.<field>[t].
std::string csp(std::string_view unit, std::string_view field, int t);
std::string csp(std::string_view unit, std::string_view field);
std::string csp_pwl(std::string_view unit, std::string_view field, int t, Scenario s, int k);
std::string res(std::string_view unit, std::string_view field, int t);
std::string ed(std::string_view unit, std::string_view field, int t);
std::string td(std::string_view unit, std::string_view field, int t);

// Robust auxiliaries. Price sources are "da", "up", "dn"; quantity sources
// are "csp.<unit>", "res.<unit>" and "dem.<demand>".
std::string rob(std::string_view source, std::string_view field, int t);
std::string rob(std::string_view source, std::string_view field);

}  // namespace names
}  // namespace rvpp::model
