#pragma once

// Plain-text problem files.
//
//   kind = VVP                # SVP, VVP or VFP
//   [domain]
//   m = 2
//   bounds = 0 1, 0 1         # one interval per axis
//   grid = 21 21              # nodes per axis
//   [state]
//   n = 1
//   names = x                 # optional
//   [objectives]
//   f = x1_d1^2 + x1_d2^2     # repeated, in order
//   k = 1 + x1^2              # VFP only, one per f
//   [constraints]
//   g = x1 - 2                # pointwise, <= 0
//   h = x1 - t1               # pointwise, = 0
//   c = x1^2 - 1              # integral, <= 0
//   [boundary]
//   u = t1                    # one per state component; omit for free ends
//
// '#' starts a comment. Keys outside their section are errors.

#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mtvar/error.hpp"
#include "mtvar/expr.hpp"
#include "mtvar/grid.hpp"
#include "mtvar/problem.hpp"

namespace mtvar {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

inline int parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw InputError(what + ": expected an integer, got '" + s + "'");
  return v;
}

struct ProblemText {
  std::string kind;
  int m = 0;
  std::vector<Interval> bounds;
  std::vector<int> grid;
  int n = 0;
  std::vector<std::string> names;
  std::vector<std::string> f, k, g, h, c, u;
};

}  // namespace detail

inline ProblemSpec parse_problem(std::istream& in) {
  detail::ProblemText doc;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  bool have_m = false, have_n = false;
  auto fail = [&](const std::string& msg) -> void {
    throw InputError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "domain" && section != "state" && section != "objectives" && section != "constraints" &&
          section != "boundary")
        fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) fail("empty value for '" + key + "'");
    auto here = [&](const char* s) {
      if (section != s) fail("key '" + key + "' belongs in [" + s + "]");
    };
    try {
      if (key == "kind") {
        if (!section.empty()) fail("kind must precede all sections");
        doc.kind = value;
      } else if (key == "m") {
        here("domain");
        doc.m = detail::parse_int(value, "m");
        have_m = true;
      } else if (key == "bounds") {
        here("domain");
        doc.bounds.clear();
        for (const auto& part : detail::split(value, ',')) {
          const auto w = detail::words(part);
          if (w.size() != 2) fail("each interval in bounds needs two numbers");
          doc.bounds.push_back({detail::parse_double(w[0]), detail::parse_double(w[1])});
        }
      } else if (key == "grid") {
        here("domain");
        doc.grid.clear();
        for (const auto& w : detail::words(value)) doc.grid.push_back(detail::parse_int(w, "grid"));
      } else if (key == "n") {
        here("state");
        doc.n = detail::parse_int(value, "n");
        have_n = true;
      } else if (key == "names") {
        here("state");
        doc.names = detail::words(value);
      } else if (key == "f" || key == "k") {
        here("objectives");
        (key == "f" ? doc.f : doc.k).push_back(value);
      } else if (key == "g" || key == "h" || key == "c") {
        here("constraints");
        (key == "g" ? doc.g : key == "h" ? doc.h : doc.c).push_back(value);
      } else if (key == "u") {
        here("boundary");
        doc.u.push_back(value);
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const InputError& e) {
      if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
      fail(e.what());
    }
  }

  if (doc.kind.empty()) throw InputError("missing 'kind'");
  if (!have_m) throw InputError("missing [domain] m");
  if (!have_n) throw InputError("missing [state] n");
  if (doc.m < 1) throw InputError("m must be >= 1");
  if (static_cast<int>(doc.bounds.size()) != doc.m) throw InputError("bounds needs one interval per axis");
  if (doc.grid.size() == 1 && doc.m > 1) doc.grid.assign(doc.m, doc.grid.front());
  if (static_cast<int>(doc.grid.size()) != doc.m) throw InputError("grid needs one node count per axis");

  ProblemSpec ps;
  ps.domain = Domain(doc.bounds, doc.grid);
  ps.n = doc.n;
  if (doc.kind == "SVP") ps.kind = ProblemKind::svp;
  else if (doc.kind == "VVP") ps.kind = ProblemKind::vvp;
  else if (doc.kind == "VFP") ps.kind = ProblemKind::vfp;
  else throw InputError("unknown kind '" + doc.kind + "' (expected SVP, VVP or VFP)");
  ps.state_names = doc.names;
  const Dims dims{doc.m, doc.n};
  auto exprs = [&](const std::vector<std::string>& list, const char* what) {
    std::vector<Expr> out;
    for (std::size_t j = 0; j < list.size(); ++j) {
      try {
        out.push_back(parse(list[j], dims));
      } catch (const ParseError& e) {
        throw InputError(std::string(what) + std::to_string(j + 1) + ": " + e.what());
      }
    }
    return out;
  };
  ps.f = exprs(doc.f, "f");
  ps.k = exprs(doc.k, "k");
  ps.g = exprs(doc.g, "g");
  ps.h = exprs(doc.h, "h");
  ps.integral = exprs(doc.c, "c");
  ps.u = exprs(doc.u, "u");
  ps.validate();
  return ps;
}

inline ProblemSpec parse_problem(const std::string& text) {
  std::istringstream is(text);
  return parse_problem(is);
}

/// Normalized problem text; parse_problem(print_problem(ps)) reproduces ps.
inline std::string print_problem(const ProblemSpec& ps) {
  std::ostringstream os;
  const Domain& d = ps.domain;
  os << "kind = " << to_string(ps.kind) << "\n[domain]\nm = " << d.m() << "\nbounds = ";
  for (int v = 0; v < d.m(); ++v)
    os << (v ? ", " : "") << detail::format_17g(d.bounds(v).lo) << ' ' << detail::format_17g(d.bounds(v).hi);
  os << "\ngrid =";
  for (int v = 0; v < d.m(); ++v) os << ' ' << d.resolution(v);
  os << "\n[state]\nn = " << ps.n << '\n';
  if (!ps.state_names.empty()) {
    os << "names =";
    for (const auto& s : ps.state_names) os << ' ' << s;
    os << '\n';
  }
  os << "[objectives]\n";
  for (const auto& e : ps.f) os << "f = " << e << '\n';
  for (const auto& e : ps.k) os << "k = " << e << '\n';
  if (!ps.g.empty() || !ps.h.empty() || !ps.integral.empty()) {
    os << "[constraints]\n";
    for (const auto& e : ps.g) os << "g = " << e << '\n';
    for (const auto& e : ps.h) os << "h = " << e << '\n';
    for (const auto& e : ps.integral) os << "c = " << e << '\n';
  }
  if (!ps.u.empty()) {
    os << "[boundary]\n";
    for (const auto& e : ps.u) os << "u = " << e << '\n';
  }
  return os.str();
}

}  // namespace mtvar
