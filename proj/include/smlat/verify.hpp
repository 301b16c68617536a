#pragma once

// Reports, fixtures, the worked-example suite, the randomized harness and
// the command-line front end.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct Report {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> output;
  std::vector<Verdict> verdicts;
  std::vector<std::string> witnesses;
  std::vector<std::string> findings;
  std::vector<std::pair<std::string, double>> timings;  // seconds

  bool passed() const;
  // Timings are omitted unless asked for, so fixed seeds give identical text.
  std::string to_json(bool include_timings = false) const;
  std::string to_text(bool include_timings = false) const;
};

struct Fixture {
  std::string name;
  Instance a;
  Instance b;
};

// SMLAT_FIXTURE_DIR if set, else the source tree's fixtures directory.
std::filesystem::path default_fixture_dir();

// tag is one of "4", "5a", "5b", "6". Throws FixtureMismatch when the files
// are missing or have the wrong size.
Fixture load_fixture(const std::filesystem::path& dir, std::string_view tag);

Report run_worked_examples(const std::filesystem::path& dir = default_fixture_dir());

struct FuzzConfig {
  int n = 5;
  int trials = 200;
  int p = 0;
  int q = 2;
  int instances = 2;
  std::uint64_t seed = 1;
};

// p <= 1 families are checked directly. For p >= 2 and q <= 1 the family is
// transposed first. With p, q >= 2 the engines run in research mode and
// closure failures are reported as findings, not violations.
Report run_fuzz(const FuzzConfig& config);

// Exit status: 0 success, 1 invariant violation, 2 usage or input error.
int cmd_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smlat
