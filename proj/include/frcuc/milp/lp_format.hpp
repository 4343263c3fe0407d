#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "frcuc/milp/problem.hpp"

namespace frcuc::milp {

namespace detail {

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

inline constexpr std::size_t kLpNameLimit = 64;

// Deterministic LP-safe names for every variable: invalid characters map to
// '_', names over the length limit are truncated and tagged with a hash of
// the original, and collisions get a further hash suffix.
inline std::vector<std::string> lp_variable_names(const MilpProblem& p) {
  std::vector<std::string> out;
  out.reserve(p.num_variables());
  std::unordered_set<std::string> used;
  for (const auto& v : p.variables()) {
    std::string s;
    s.reserve(v.name.size());
    for (char c : v.name)
      s.push_back((std::isalnum((unsigned char)c) || c == '_' || c == '.') ? c : '_');
    if (s.empty() || std::isdigit((unsigned char)s[0])) s.insert(s.begin(), 'v');
    {  // a name that reads entirely as a number (inf, nan, 1e5) would
       // confuse any tokenizer; shield it
      char* end = nullptr;
      std::strtod(s.c_str(), &end);
      if (end && *end == '\0') s.insert(s.begin(), 'v');
    }
    if (s.size() > kLpNameLimit) {
      char tag[20];
      std::snprintf(tag, sizeof(tag), "~%08llx",
                    (unsigned long long)(detail::fnv1a(v.name) & 0xffffffffull));
      s = s.substr(0, kLpNameLimit - 9) + tag;
    }
    while (!used.insert(s).second) {
      char tag[20];
      std::snprintf(tag, sizeof(tag), "~%08llx",
                    (unsigned long long)(detail::fnv1a(s) & 0xffffffffull));
      if (s.size() + 9 > kLpNameLimit) s = s.substr(0, kLpNameLimit - 9);
      s += tag;
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline void write_lp(const MilpProblem& p, std::ostream& os) {
  const auto names = lp_variable_names(p);
  os << "\\ LP export, canonical subset (minimize; explicit bounds)\n";
  os << "Minimize\n obj:";
  bool first = true;
  for (const auto& [j, c] : p.objective()) {
    if (c == 0.0) continue;
    os << (c < 0 ? " - " : (first ? " " : " + "))
       << detail::fmt_num(std::abs(c)) << ' ' << names[j];
    first = false;
  }
  if (p.objective_offset() != 0.0) {
    double c = p.objective_offset();
    os << (c < 0 ? " - " : (first ? " " : " + ")) << detail::fmt_num(std::abs(c));
    first = false;
  }
  if (first) os << " 0 " << (p.num_variables() ? names[0] : "x0");
  os << "\nSubject To\n";
  int anon = 0;
  for (const auto& con : p.constraints()) {
    std::string cn;
    for (char c : con.name)
      cn.push_back((std::isalnum((unsigned char)c) || c == '_' || c == '.') ? c : '_');
    if (cn.empty()) cn = "r" + std::to_string(anon++);
    os << ' ' << cn << ':';
    bool f2 = true;
    for (const auto& t : con.terms) {
      os << (t.coef < 0 ? " - " : (f2 ? " " : " + "))
         << detail::fmt_num(std::abs(t.coef)) << ' ' << names[t.var];
      f2 = false;
    }
    if (f2) os << " 0 " << (p.num_variables() ? names[0] : "x0");
    switch (con.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::GreaterEqual: os << " >= "; break;
      case Sense::Equal: os << " = "; break;
    }
    os << detail::fmt_num(con.rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    const auto& v = p.variables()[j];
    if (v.lower == -kInf && v.upper == kInf) {
      os << ' ' << names[j] << " free\n";
    } else {
      os << ' ' << (v.lower == -kInf ? "-inf" : detail::fmt_num(v.lower)) << " <= "
         << names[j] << " <= " << (v.upper == kInf ? "+inf" : detail::fmt_num(v.upper))
         << '\n';
    }
  }
  if (p.num_binaries() > 0) {
    os << "Binaries\n";
    for (std::size_t j = 0; j < p.num_variables(); ++j)
      if (p.variables()[j].kind == VarKind::Binary) os << ' ' << names[j] << '\n';
  }
  os << "End\n";
}

inline std::vector<std::string> export_lp_file(const MilpProblem& p,
                                               const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_lp(p, os);
  os.flush();
  if (!os) throw IoError("write failed for '" + path + "'");
  return lp_variable_names(p);
}

// Parses the canonical subset emitted by write_lp. Not a general LP-format
// reader: one row per line, explicit bounds, sections in fixed order.
inline MilpProblem parse_lp(std::istream& is) {
  enum Section { None, Objective, Rows, Bnds, Bins, Done };
  Section sec = None;

  struct RawRow {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<std::pair<std::string, double>> obj;
  double obj_offset = 0.0;
  std::vector<RawRow> rows;
  std::vector<std::string> var_order;
  std::unordered_map<std::string, int> var_id;
  std::unordered_map<std::string, std::pair<double, double>> bounds;
  std::unordered_set<std::string> binaries;

  auto intern = [&](const std::string& n) {
    auto it = var_id.find(n);
    if (it != var_id.end()) return it->second;
    int id = (int)var_order.size();
    var_id.emplace(n, id);
    var_order.push_back(n);
    return id;
  };

  auto parse_terms = [&](std::istringstream& ss,
                         std::vector<std::pair<std::string, double>>& out,
                         double& constant, std::string& tail) {
    double sign = 1.0;
    std::string tok;
    while (ss >> tok) {
      if (tok == "+") { sign = 1.0; continue; }
      if (tok == "-") { sign = -1.0; continue; }
      if (tok == "<=" || tok == ">=" || tok == "=") { tail = tok; return; }
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end && *end == '\0') {
        std::string name;
        if (ss >> name) {
          if (name == "+" || name == "-" || name == "<=" || name == ">=" || name == "=") {
            constant += sign * v;  // bare constant
            if (name == "+") sign = 1.0;
            else if (name == "-") sign = -1.0;
            else { tail = name; return; }
          } else {
            out.emplace_back(name, sign * v);
            sign = 1.0;
          }
        } else {
          constant += sign * v;
        }
      } else {
        // coefficient 1 implied
        out.emplace_back(tok, sign);
        sign = 1.0;
      }
    }
    tail.clear();
  };

  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '\\') continue;
    std::string trimmed = line;
    while (!trimmed.empty() && std::isspace((unsigned char)trimmed.front()))
      trimmed.erase(trimmed.begin());
    while (!trimmed.empty() && std::isspace((unsigned char)trimmed.back()))
      trimmed.pop_back();
    if (trimmed.empty()) continue;
    if (trimmed == "Minimize") { sec = Objective; continue; }
    if (trimmed == "Subject To") { sec = Rows; continue; }
    if (trimmed == "Bounds") { sec = Bnds; continue; }
    if (trimmed == "Binaries") { sec = Bins; continue; }
    if (trimmed == "End") { sec = Done; break; }

    std::istringstream ss(trimmed);
    switch (sec) {
      case Objective: {
        auto colon = trimmed.find(':');
        if (colon == std::string::npos)
          throw ParseError("lp line " + std::to_string(lineno) + ": missing ':'");
        std::istringstream body(trimmed.substr(colon + 1));
        std::string tail;
        parse_terms(body, obj, obj_offset, tail);
        break;
      }
      case Rows: {
        auto colon = trimmed.find(':');
        if (colon == std::string::npos)
          throw ParseError("lp line " + std::to_string(lineno) + ": missing ':'");
        RawRow r;
        r.name = trimmed.substr(0, colon);
        std::istringstream body(trimmed.substr(colon + 1));
        std::string tail;
        double cst = 0.0;
        parse_terms(body, r.terms, cst, tail);
        if (tail.empty())
          throw ParseError("lp line " + std::to_string(lineno) + ": missing sense");
        r.sense = tail == "<=" ? Sense::LessEqual
                               : (tail == ">=" ? Sense::GreaterEqual : Sense::Equal);
        if (!(body >> r.rhs))
          throw ParseError("lp line " + std::to_string(lineno) + ": missing rhs");
        r.rhs -= cst;
        rows.push_back(std::move(r));
        break;
      }
      case Bnds: {
        std::string a, b, c, d, e;
        ss >> a >> b;
        if (b == "free") {
          bounds[a] = {-kInf, kInf};
          intern(a);
        } else {
          ss >> c >> d >> e;  // "lo <= name <= up"
          if (b != "<=" || d != "<=")
            throw ParseError("lp line " + std::to_string(lineno) + ": bad bound line");
          double lo = a == "-inf" ? -kInf : std::strtod(a.c_str(), nullptr);
          double up = e == "+inf" ? kInf : std::strtod(e.c_str(), nullptr);
          bounds[c] = {lo, up};
          intern(c);
        }
        break;
      }
      case Bins: {
        std::string n;
        while (ss >> n) binaries.insert(n);
        break;
      }
      default:
        throw ParseError("lp line " + std::to_string(lineno) +
                         ": content outside any section");
    }
  }
  if (sec != Done) throw ParseError("lp file missing End marker");

  // variables appear in Bounds order (the writer emits every variable there)
  for (const auto& [n, _] : obj) intern(n);
  for (const auto& r : rows)
    for (const auto& [n, _] : r.terms) intern(n);

  MilpProblem p;
  for (const auto& n : var_order) {
    bool bin = binaries.count(n) > 0;
    auto it = bounds.find(n);
    double lo = 0.0, up = bin ? 1.0 : kInf;
    if (it != bounds.end()) { lo = it->second.first; up = it->second.second; }
    p.add_variable(n, lo, up, bin ? VarKind::Binary : VarKind::Continuous);
  }
  for (const auto& [n, c] : obj) p.set_objective_term(var_id[n], c);
  p.add_objective_offset(obj_offset);
  for (const auto& r : rows) {
    std::vector<LinearTerm> terms;
    terms.reserve(r.terms.size());
    std::unordered_map<int, double> acc;
    for (const auto& [n, c] : r.terms) acc[var_id[n]] += c;
    // keep first-appearance order for determinism
    std::unordered_set<int> seen;
    for (const auto& [n, c] : r.terms) {
      int j = var_id[n];
      if (seen.insert(j).second) terms.push_back({j, acc[j]});
    }
    p.add_constraint(r.name, std::move(terms), r.sense, r.rhs);
  }
  return p;
}

inline MilpProblem parse_lp_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return parse_lp(is);
}

}  // namespace frcuc::milp
