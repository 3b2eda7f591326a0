#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "mtvar/problem_file.hpp"

using namespace mtvar;

namespace {

const char* const kFull = R"(# two objectives, every section
kind = VVP
[domain]
m = 2
bounds = 0 1, -1 2   # second axis is longer
grid = 5 7
[state]
n = 2
names = p q
[objectives]
f = x1_d1^2 + x2_d2^2
f = x1*x2
[constraints]
g = x1 - 2
h = x2 - t1
c = x1^2 - 1
[boundary]
u = t1
u = t1
)";

std::string message(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("full problem file", "[problem_file]") {
  const ProblemSpec ps = parse_problem(std::string(kFull));
  CHECK(ps.kind == ProblemKind::vvp);
  CHECK(ps.domain.m() == 2);
  CHECK(ps.domain.bounds(1).lo == -1.0);
  CHECK(ps.domain.resolution(1) == 7);
  CHECK(ps.n == 2);
  CHECK(ps.state_names == std::vector<std::string>{"p", "q"});
  CHECK(ps.p() == 2);
  CHECK(ps.g.size() == 1);
  CHECK(ps.h.size() == 1);
  CHECK(ps.integral.size() == 1);
  CHECK(ps.u.size() == 2);
  CHECK(to_string(ps.f[1]) == "x1*x2");
}

TEST_CASE("printing round-trips", "[problem_file]") {
  const ProblemSpec ps = parse_problem(std::string(kFull));
  const std::string once = print_problem(ps);
  const ProblemSpec back = parse_problem(once);
  CHECK(print_problem(back) == once);
  CHECK(back.domain == ps.domain);
  for (std::size_t j = 0; j < ps.f.size(); ++j) CHECK(structurally_equal(back.f[j], ps.f[j]));
}

TEST_CASE("shipped problems parse and round-trip", "[problem_file]") {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(MTVAR_PROBLEMS_DIR)) {
    std::ifstream in(entry.path());
    const ProblemSpec ps = parse_problem(in);
    CHECK(print_problem(parse_problem(print_problem(ps))) == print_problem(ps));
    ++count;
  }
  CHECK(count >= 3);
}

TEST_CASE("grid broadcast", "[problem_file]") {
  const ProblemSpec ps = parse_problem(std::string(
      "kind = SVP\n[domain]\nm = 3\nbounds = 0 1, 0 1, 0 1\ngrid = 4\n[state]\nn = 1\n[objectives]\nf = x1^2\n"));
  CHECK(ps.domain.resolution() == std::vector<int>{4, 4, 4});
}

TEST_CASE("problem file errors", "[problem_file]") {
  const std::string head = "kind = SVP\n[domain]\nm = 1\nbounds = 0 1\ngrid = 5\n[state]\nn = 1\n";
  CHECK(message(head + "[objectives]\nf = x1^2\nwhat = 3\n") == "line 10: unknown key 'what'");
  CHECK(message(head + "f = x1^2\n") == "line 8: key 'f' belongs in [objectives]");
  CHECK(message(head + "[objectives\n") == "line 8: unterminated section header");
  CHECK(message(head + "[extras]\n") == "line 8: unknown section [extras]");
  CHECK(message("[domain]\nm = two\n") == "line 2: m: expected an integer, got 'two'");
  CHECK(message(head + "[objectives]\nf = x1^^2\n").rfind("f1: ", 0) == 0);
  CHECK(message(head + "[objectives]\nf = x2\n").rfind("f1: ", 0) == 0);
  CHECK(message(head) == "problem has no objective");
  CHECK(message("[domain]\nm = 1\n") == "missing 'kind'");
  CHECK(message("kind = XYZ\n[domain]\nm = 1\nbounds = 0 1\ngrid = 5\n[state]\nn = 1\n[objectives]\nf = x1\n") ==
        "unknown kind 'XYZ' (expected SVP, VVP or VFP)");
  CHECK_FALSE(message(head + "[objectives]\nf = x1\n[boundary]\nu = x1\n").empty());
  CHECK(message("kind = SVP\n[domain]\nm = 2\nbounds = 0 1\ngrid = 5\n[state]\nn = 1\n[objectives]\nf = x1\n") ==
        "bounds needs one interval per axis");
}
