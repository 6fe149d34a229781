#include "rvpp/milp/mps.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "rvpp/core/error.hpp"

namespace rvpp::milp {

std::string mps_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  for (int prec = 12; s.size() > 12 && prec >= 1; --prec) {
    r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, prec);
    s.assign(buf, r.ptr);
  }
  return s;
}

namespace {

std::string sanitize(const std::string& name) {
  std::string s = name;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) c = '_';
  return s;
}

std::string base36(std::size_t n, int width) {
  static const char* digits = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = width - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[n % 36];
    n /= 36;
  }
  return s;
}

// One namespace of MPS names (rows or columns).
class Mangler {
 public:
  Mangler(int width, std::string kind) : width_(width), kind_(std::move(kind)) {
    if (width_ < 1 || width_ > 4) throw Error("MPS suffix width must be in 1..4");
    capacity_ = 1;
    for (int i = 0; i < width_; ++i) capacity_ *= 36;
  }

  void reserve(const std::string& name) { used_.insert(name); }

  std::string map(const std::string& original) {
    const std::string s = sanitize(original);
    if (!s.empty() && s.size() <= 8 && used_.insert(s).second) return s;
    const std::string prefix = s.substr(0, static_cast<std::size_t>(std::min(3, 7 - width_)));
    std::size_t& next = counters_[prefix];
    if (next >= capacity_)
      throw Error("MPS name mangling: " + kind_ + " prefix '" + prefix + "' exhausted its " +
                  std::to_string(capacity_) + " suffixes at '" + original + "'");
    std::string m = prefix + "#" + base36(next++, width_);
    if (!used_.insert(m).second) throw Error("MPS name mangling collision on '" + m + "' for '" + original + "'");
    return m;
  }

 private:
  int width_;
  std::string kind_;
  std::size_t capacity_ = 0;
  std::set<std::string> used_;
  std::map<std::string, std::size_t> counters_;
};

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

std::string rtrim(std::string s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// Fixed-format data line: fields at columns 2, 5, 15, 25, 40, 50.
std::string data_line(const std::string& f1, const std::string& f2, const std::string& f3, const std::string& f4,
                      const std::string& f5 = "", const std::string& f6 = "") {
  std::string l = " " + pad(f1, 2) + " " + pad(f2, 8) + "  " + pad(f3, 8) + "  " + pad(f4, 12);
  if (!f5.empty()) l += "   " + pad(f5, 8) + "  " + f6;
  return rtrim(l) + "\n";
}

const char* row_code(Sense s) {
  switch (s) {
    case Sense::le: return "L";
    case Sense::ge: return "G";
    case Sense::eq: return "E";
  }
  return "?";
}

}  // namespace

MpsExport export_mps(const MilpModel& model, const MpsOptions& opt) {
  model.check();
  MpsExport out;
  Mangler rows(opt.suffix_width, "row");
  Mangler cols(opt.suffix_width, "column");
  out.objective_row = "OBJ";
  rows.reserve(out.objective_row);
  for (const auto& r : model.constraints()) out.row_names.push_back(rows.map(r.name));
  for (const auto& v : model.variables()) out.column_names.push_back(cols.map(v.name));

  // Column-wise coefficients: objective first, then rows in declaration order.
  std::vector<std::vector<std::pair<std::string, double>>> entries(model.num_vars());
  for (const auto& t : model.objective().terms)
    if (t.coef != 0.0) entries[t.var.index].emplace_back(out.objective_row, t.coef);
  for (std::size_t i = 0; i < model.num_constraints(); ++i)
    for (const auto& t : model.constraints()[i].terms)
      if (t.coef != 0.0) entries[t.var.index].emplace_back(out.row_names[i], t.coef);

  std::ostringstream os;
  os << "* rvpp fixed-format MPS\n";
  os << "* rows " << model.num_constraints() << ", columns " << model.num_vars() << "\n";
  bool header = false;
  auto dict = [&](char kind, const std::string& mps, const std::string& original) {
    if (mps == original) return;
    if (!header) {
      os << "* name dictionary: <R|C> <mps name> <model name>\n";
      header = true;
    }
    os << "* " << kind << " " << mps << " " << original << "\n";
  };
  for (std::size_t i = 0; i < model.num_constraints(); ++i) dict('R', out.row_names[i], model.constraints()[i].name);
  for (std::size_t i = 0; i < model.num_vars(); ++i) dict('C', out.column_names[i], model.variables()[i].name);

  os << "NAME          " << opt.model_name << "\n";
  if (model.objective().sense == ObjSense::maximize) os << "OBJSENSE\n    MAX\n";
  os << "ROWS\n";
  os << data_line("N", out.objective_row, "", "");
  for (std::size_t i = 0; i < model.num_constraints(); ++i)
    os << data_line(row_code(model.constraints()[i].sense), out.row_names[i], "", "");

  os << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const bool is_int = model.variables()[j].kind == VarKind::binary;
    if (is_int != in_int) {
      const std::string mname = "MARKER" + std::to_string(marker / 2 % 100);
      os << "    " << pad(mname, 8) << "  'MARKER'                 " << (is_int ? "'INTORG'" : "'INTEND'") << "\n";
      ++marker;
      in_int = is_int;
    }
    const auto& e = entries[j];
    const std::string& c = out.column_names[j];
    if (e.empty()) {
      os << data_line("", c, out.objective_row, "0");
      continue;
    }
    for (std::size_t k = 0; k < e.size(); k += 2) {
      if (k + 1 < e.size())
        os << data_line("", c, e[k].first, mps_number(e[k].second), e[k + 1].first, mps_number(e[k + 1].second));
      else
        os << data_line("", c, e[k].first, mps_number(e[k].second));
    }
  }
  if (in_int) os << "    " << pad("MARKER" + std::to_string(marker / 2 % 100), 8) << "  'MARKER'                 'INTEND'\n";

  os << "RHS\n";
  if (model.objective().offset != 0.0) os << data_line("", "RHS", out.objective_row, mps_number(-model.objective().offset));
  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    const double rhs = model.constraints()[i].rhs;
    if (rhs != 0.0) os << data_line("", "RHS", out.row_names[i], mps_number(rhs));
  }

  os << "BOUNDS\n";
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.variables()[j];
    const std::string& c = out.column_names[j];
    const bool lo_inf = std::isinf(v.lower) && v.lower < 0;
    const bool up_inf = std::isinf(v.upper) && v.upper > 0;
    if (!lo_inf && !up_inf && v.lower == v.upper) {
      os << data_line("FX", "BND", c, mps_number(v.lower));
    } else if (lo_inf && up_inf) {
      os << data_line("FR", "BND", c, "");
    } else {
      if (lo_inf)
        os << data_line("MI", "BND", c, "");
      else if (v.lower != 0.0 || (!up_inf && v.upper < 0.0))
        os << data_line("LO", "BND", c, mps_number(v.lower));
      if (!up_inf) os << data_line("UP", "BND", c, mps_number(v.upper));
    }
  }
  os << "ENDATA\n";
  out.text = os.str();
  return out;
}

std::string export_lp(const MilpModel& model) {
  model.check();
  std::set<std::string> used;
  auto unique_name = [&](const std::string& n) {
    std::string s = sanitize(n);
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s = "n" + s;
    std::string cand = s;
    for (int k = 1; !used.insert(cand).second; ++k) cand = s + "_" + std::to_string(k);
    return cand;
  };
  std::vector<std::string> cn;
  for (const auto& v : model.variables()) cn.push_back(unique_name(v.name));
  used.clear();
  std::vector<std::string> rn;
  for (const auto& r : model.constraints()) rn.push_back(unique_name(r.name));

  auto expr = [&](const std::vector<Term>& terms) {
    std::ostringstream e;
    bool first = true;
    for (const auto& t : terms) {
      if (t.coef == 0.0) continue;
      e << (t.coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + ")) << mps_number(std::abs(t.coef)) << " "
        << cn[t.var.index];
      first = false;
    }
    if (first) e << "0 " << (cn.empty() ? std::string("x") : cn[0]);
    return e.str();
  };

  std::ostringstream os;
  os << "\\ rvpp LP export\n";
  os << (model.objective().sense == ObjSense::maximize ? "Maximize\n" : "Minimize\n");
  os << " obj: " << expr(model.objective().terms);
  if (model.objective().offset != 0.0) os << " + " << mps_number(model.objective().offset);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    const auto& r = model.constraints()[i];
    os << " " << rn[i] << ": " << expr(r.terms) << (r.sense == Sense::le ? " <= " : r.sense == Sense::ge ? " >= " : " = ")
       << mps_number(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.variables()[j];
    auto num = [](double x) { return std::isinf(x) ? std::string(x < 0 ? "-inf" : "+inf") : mps_number(x); };
    os << " " << num(v.lower) << " <= " << cn[j] << " <= " << num(v.upper) << "\n";
  }
  bool any = false;
  for (std::size_t j = 0; j < model.num_vars(); ++j)
    if (model.variables()[j].kind == VarKind::binary) {
      if (!any) os << "Binaries\n";
      any = true;
      os << " " << cn[j] << "\n";
    }
  os << "End\n";
  return os.str();
}

}  // namespace rvpp::milp
