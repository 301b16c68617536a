#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "smlat/verify.hpp"

using namespace smlat;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "smlat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cmd_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return (default_fixture_dir() / (name + ".txt")).string(); }

}  // namespace

TEST_CASE("check reports stability and blocking pairs") {
  const Run ok = run({"check", fixture("fix_a4"), "--matching", "M: 1 2 3 4"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("stable: yes") != std::string::npos);
  const Run bad = run({"check", fixture("fix_b4"), "--matching", "M: 1 2 4 3"});
  CHECK(bad.code == 0);
  CHECK(bad.out.find("stable: no") != std::string::npos);
  CHECK(bad.out.find("(4,a)") != std::string::npos);
}

TEST_CASE("enumerate and poset") {
  const Run e = run({"enumerate", fixture("fix_a6")});
  CHECK(e.code == 0);
  CHECK(e.out.find("count ") != std::string::npos);
  const Run p = run({"poset", fixture("fix_a6")});
  CHECK(p.code == 0);
  CHECK(p.out.find("class 1:") != std::string::npos);
  CHECK(run({"enumerate", "--poset", fixture("fix_a6")}).out == p.out);
}

TEST_CASE("intersect queries") {
  const Run w = run({"intersect", fixture("fix_a5a"), fixture("fix_b5a"), "--worker-opt"});
  CHECK(w.code == 0);
  CHECK(w.out.find("{1b,2a,3d,4c,5e}") != std::string::npos);
  const Run all = run({"intersect", fixture("fix_a5b"), fixture("fix_b5b"), "--enumerate"});
  CHECK(all.code == 0);
  CHECK(all.out.find("count ") != std::string::npos);
  const Run poset = run({"intersect", fixture("fix_a5a"), fixture("fix_b5a"), "--poset"});
  CHECK(poset.code == 0);
  CHECK(run({"intersect", fixture("fix_a4"), fixture("fix_b4"), "--worker-opt", "--firm-opt"}).code == 2);
  CHECK(run({"intersect", fixture("fix_a4"), fixture("fix_b4")}).code == 2);
}

TEST_CASE("research mode findings") {
  const Run r = run({"intersect", fixture("fix_a4"), fixture("fix_b4"), "--enumerate"});
  CHECK(r.code == 0);
  CHECK(r.out.find("finding:") != std::string::npos);
  CHECK(run({"intersect", fixture("fix_a4"), fixture("fix_b4"), "--poset"}).code == 2);
}

TEST_CASE("lp subcommand") {
  const Run r = run({"lp", fixture("fix_a5b"), fixture("fix_b5b"), "--round-theta", "1/3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("feasible") != std::string::npos);
  CHECK(run({"lp", fixture("fix_a4"), "--round-theta", "5/3"}).code == 2);
  CHECK(run({"lp", fixture("fix_a4"), "--round-theta", "abc"}).code == 2);
  CHECK(run({"lp", fixture("fix_a4"), "--export"}).out.find("stab ") != std::string::npos);
}

TEST_CASE("json output parses and omits timings by default") {
  const Run r = run({"--json", "check", fixture("fix_a4")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "check");
  CHECK_FALSE(j.contains("timings"));
  const auto t = nlohmann::json::parse(run({"--json", "--timings", "check", fixture("fix_a4")}).out);
  CHECK(t.contains("timings"));
}

TEST_CASE("fuzz is reproducible") {
  const std::vector<std::string> args{"--json", "fuzz", "--n", "4", "--trials", "15", "--pq", "1,1", "--seed", "3"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run({"fuzz", "--pq", "x"}).code == 2);
  CHECK(run({"fuzz", "--n", "20"}).code == 2);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"check", "/nonexistent.txt"}).code == 2);
  CHECK(run({"check", fixture("fix_a4"), "--matching", "M: 1 2 3"}).code == 2);
  CHECK(run({"paper-examples", "--fixtures", "/nonexistent"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("worked examples pass") {
  const Run r = run({"paper-examples"});
  CHECK(r.code == 0);
  CHECK(r.out.find("result: pass") != std::string::npos);
}
