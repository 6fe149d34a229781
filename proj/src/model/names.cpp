#include "rvpp/model/names.hpp"

namespace rvpp::model::names {

std::string at(std::string_view base, int t) { return std::string(base) + "[" + std::to_string(t + 1) + "]"; }

std::string p_da(int t) { return at("p_da", t); }
std::string r_sr_up(int t) { return at("r_sr_up", t); }
std::string r_sr_dn(int t) { return at("r_sr_dn", t); }
std::string h_hpa(int t) { return at("h_hpa", t); }

namespace {

std::string scoped(std::string_view cls, std::string_view unit, std::string_view field) {
  std::string s(cls);
  s += '.';
  s += unit;
  s += '.';
  s += field;
  return s;
}

}  // namespace

std::string csp(std::string_view unit, std::string_view field, int t) { return at(scoped("csp", unit, field), t); }
std::string csp(std::string_view unit, std::string_view field) { return scoped("csp", unit, field); }

std::string csp_pwl(std::string_view unit, std::string_view field, int t, Scenario s, int k) {
  return scoped("csp", unit, field) + "[" + std::to_string(t + 1) + "," + label(s) + "," + std::to_string(k) + "]";
}

std::string res(std::string_view unit, std::string_view field, int t) { return at(scoped("res", unit, field), t); }
std::string ed(std::string_view unit, std::string_view field, int t) { return at(scoped("ed", unit, field), t); }
std::string td(std::string_view unit, std::string_view field, int t) { return at(scoped("td", unit, field), t); }

std::string rob(std::string_view source, std::string_view field, int t) {
  return at("rob." + std::string(source) + "." + std::string(field), t);
}

std::string rob(std::string_view source, std::string_view field) {
  return "rob." + std::string(source) + "." + std::string(field);
}

}  // namespace rvpp::model::names
