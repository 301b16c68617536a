#include "smlat/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "smlat/compound.hpp"
#include "smlat/deferred_acceptance.hpp"
#include "smlat/error.hpp"
#include "smlat/lp.hpp"
#include "smlat/multiroom.hpp"
#include "smlat/oracle.hpp"
#include "smlat/random.hpp"
#include "smlat/rotations.hpp"
#include "smlat/sublattice.hpp"

namespace smlat {

bool Report::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string Report::to_json(bool include_timings) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["output"] = output;
  j["verdicts"] = nlohmann::ordered_json::array();
  for (const Verdict& v : verdicts) {
    j["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  }
  j["witnesses"] = witnesses;
  j["findings"] = findings;
  j["passed"] = passed();
  if (include_timings) {
    j["timings"] = nlohmann::ordered_json::object();
    for (const auto& [name, seconds] : timings) j["timings"][name] = seconds;
  }
  return j.dump(2) + "\n";
}

std::string Report::to_text(bool include_timings) const {
  std::ostringstream out;
  for (const auto& line : output) out << line << '\n';
  for (const Verdict& v : verdicts) {
    out << (v.pass ? "PASS " : "FAIL ") << v.name;
    if (!v.detail.empty()) out << " -- " << v.detail;
    out << '\n';
  }
  for (const auto& w : witnesses) out << "witness: " << w << '\n';
  for (const auto& f : findings) out << "finding: " << f << '\n';
  if (include_timings) {
    for (const auto& [name, seconds] : timings) out << "time " << name << ": " << seconds << " s\n";
  }
  if (!verdicts.empty()) {
    const auto passing = std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
    out << "result: " << (passed() ? "pass" : "FAIL") << " (" << passing << '/' << verdicts.size() << ")\n";
  }
  return out.str();
}

std::filesystem::path default_fixture_dir() {
  if (const char* env = std::getenv("SMLAT_FIXTURE_DIR")) return env;
#ifdef SMLAT_FIXTURE_DIR
  return SMLAT_FIXTURE_DIR;
#else
  return "fixtures";
#endif
}

Fixture load_fixture(const std::filesystem::path& dir, std::string_view tag) {
  static const std::map<std::string, int, std::less<>> sizes{{"4", 4}, {"5a", 5}, {"5b", 5}, {"6", 6}};
  const auto it = sizes.find(tag);
  if (it == sizes.end()) throw FixtureMismatch("unknown fixture " + std::string(tag));
  auto load = [&](char side) {
    const auto path = dir / ("fix_" + std::string(1, side) + std::string(tag) + ".txt");
    if (!std::filesystem::exists(path)) throw FixtureMismatch("missing fixture file " + path.string());
    Instance i = load_instance(path);
    if (i.size() != it->second) throw FixtureMismatch(path.string() + " has the wrong size");
    return i;
  };
  return Fixture{std::string(tag), load('a'), load('b')};
}

namespace {

// "1a,2b,3c" -> matching; firms are letters.
Matching letters(std::string_view text) {
  std::vector<std::pair<int, int>> pairs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view token = text.substr(pos, end - pos);
    pairs.emplace_back(std::stoi(std::string(token.substr(0, token.size() - 1))) - 1, token.back() - 'a');
    pos = end + 1;
  }
  std::vector<int> firm_of(pairs.size(), -1);
  for (const auto& [w, f] : pairs) firm_of.at(w) = f;
  return Matching(std::move(firm_of));
}

std::string show(const Matching& m) { return format_matching_letters(m); }

std::string show_pairs(const std::vector<Pair>& pairs) {
  std::string s;
  for (const Pair& p : pairs) {
    if (!s.empty()) s += ' ';
    s += '(' + std::to_string(p.worker + 1) + ',';
    s += p.firm < 26 ? std::string(1, static_cast<char>('a' + p.firm)) : std::to_string(p.firm + 1);
    s += ')';
  }
  return s.empty() ? "none" : s;
}

std::string show_witness(const LatticeWitness& w) {
  return show(w.first) + ' ' + to_string(w.op) + ' ' + show(w.second) + " = " + show(w.result);
}

std::vector<Matching> set_difference(const std::vector<Matching>& a, const std::vector<Matching>& b) {
  std::vector<Matching> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Matching> set_intersection(const std::vector<Matching>& a, const std::vector<Matching>& b) {
  std::vector<Matching> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Matching> sorted(std::vector<Matching> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool has_pair(const std::vector<Pair>& pairs, int w, int f) {
  return std::find(pairs.begin(), pairs.end(), Pair{w, f}) != pairs.end();
}

class Checker {
 public:
  explicit Checker(Report& report, std::string prefix) : report_(report), prefix_(std::move(prefix)) {}

  bool expect(const std::string& name, bool ok, std::string detail = {}) {
    report_.verdicts.push_back({prefix_ + name, ok, std::move(detail)});
    return ok;
  }

  // Runs a check that may throw; an exception is a failure.
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      expect(name, false, std::string("exception: ") + e.what());
    }
  }

 private:
  Report& report_;
  std::string prefix_;
};

MetaRotationPoset hybrid_compression(const RotationPoset& host, std::span<const Instance> family) {
  std::vector<MetaRotationPoset> parts;
  for (std::size_t j = 1; j < family.size(); ++j) {
    for (const Instance& h : hybrid_instances_one_side(family[0], family[j])) {
      parts.push_back(compression_from_membership(host, [&](const Matching& m) { return is_stable(h, m); }));
    }
  }
  return union_edge_sets(host, parts);
}

// One compression per member. Used when a worker list changes, where
// splitting into two-side hybrids can lose common stable matchings.
MetaRotationPoset member_compression(const RotationPoset& host, std::span<const Instance> family) {
  std::vector<MetaRotationPoset> parts;
  for (std::size_t j = 1; j < family.size(); ++j) {
    const Instance& b = family[j];
    parts.push_back(compression_from_membership(host, [&](const Matching& m) { return is_stable(b, m); }));
  }
  return union_edge_sets(host, parts);
}

MetaRotationPoset family_compression(const RotationPoset& host, std::span<const Instance> family, bool one_side) {
  return one_side ? hybrid_compression(host, family) : member_compression(host, family);
}

void example_fixture_4(const Fixture& fx, Report& report) {
  Checker c(report, "4: ");
  const Instance& a = fx.a;
  const Instance& b = fx.b;
  const Matching m1 = letters("1a,2b,3c,4d");
  const Matching m2 = letters("1b,2a,3d,4c");
  const PQDelta d = diff_pq(a, b);
  c.expect("A and B differ in two workers and two firms", d.p() == 2 && d.q() == 2,
           "p=" + std::to_string(d.p()) + " q=" + std::to_string(d.q()));
  c.expect("M1 and M2 stable under A and B",
           is_stable(a, m1) && is_stable(b, m1) && is_stable(a, m2) && is_stable(b, m2));
  const Matching combined = meet(a, m1, m2);
  c.expect("M1, M2 combine under A to {1a,2b,3d,4c}", combined == letters("1a,2b,3d,4c"), show(combined));
  const auto bps = blocking_pairs(b, combined);
  c.expect("(4,a) blocks {1a,2b,3d,4c} under B", has_pair(bps, 3, 0), show_pairs(bps));
  const auto both = stable_intersection_bruteforce(std::vector<Instance>{a, b});
  const auto witness = check_sublattice(a, both);
  c.expect("stable-under-both set is not a sublattice of A's lattice", witness.has_value(),
           witness ? show_witness(*witness) : "closed");
  if (witness) report.witnesses.push_back("4: " + show_witness(*witness));
  bool refused = false;
  try {
    compression_from_membership(build_rotation_poset(a), [&](const Matching& m) { return is_stable(b, m); });
  } catch (const NotASublattice&) {
    refused = true;
  }
  c.expect("compression of A's poset by B-stability is refused", refused);
}

void example_fixture_5a(const Fixture& fx, Report& report) {
  Checker c(report, "5a: ");
  const Instance& a = fx.a;
  const Instance& b = fx.b;
  c.expect("worker 5 ranks c e a b d", a.worker_list(4) == PreferenceList{2, 4, 0, 1, 3});
  const PQDelta d = diff_pq(a, b);
  c.expect("B permutes the lists of firms b and c only",
           d.p() == 0 && d.changed_firms == std::vector<int>{1, 2});
  const Matching m1 = letters("1b,2a,3c,4d,5e");
  const Matching m2 = letters("1a,2b,3d,4c,5e");
  const Matching m3 = letters("1b,2c,3d,4a,5e");
  const Matching m4 = letters("1d,2a,3b,4c,5e");
  const Matching target = letters("1b,2a,3d,4c,5e");
  for (const auto& [name, m] : {std::pair{"M1", m1}, {"M2", m2}, {"M3", m3}, {"M4", m4}}) {
    c.expect(std::string(name) + " stable under A, unstable under B", is_stable(a, m) && !is_stable(b, m),
             "blocking under B: " + show_pairs(blocking_pairs(b, m)));
  }
  c.expect("(5,c) blocks M1 under B", has_pair(blocking_pairs(b, m1), 4, 2));
  c.expect("(4,b) blocks M2 under B", has_pair(blocking_pairs(b, m2), 3, 1));
  const Matching j12 = join(a, m1, m2);
  c.expect("join of M1, M2 under A is {1b,2a,3d,4c,5e}", j12 == target, show(j12));
  const Matching m34 = meet(a, m3, m4);
  c.expect("meet of M3, M4 under A is {1b,2a,3d,4c,5e}", m34 == target, show(m34));
  c.expect("{1b,2a,3d,4c,5e} stable under A and B", is_stable(a, target) && is_stable(b, target));

  const auto sa = enumerate_stable_bruteforce(a);
  const auto sb = enumerate_stable_bruteforce(b);
  const auto only_a = set_difference(sa, sb);
  const auto jw = check_semisublattice(a, only_a, LatticeOp::join);
  const auto mw = check_semisublattice(a, only_a, LatticeOp::meet);
  c.expect("A-only stable set is not closed under join", jw.has_value(), jw ? show_witness(*jw) : "closed");
  c.expect("A-only stable set is not closed under meet", mw.has_value(), mw ? show_witness(*mw) : "closed");
  if (jw) report.witnesses.push_back("5a: " + show_witness(*jw));
  if (mw) report.witnesses.push_back("5a: " + show_witness(*mw));

  const std::vector<Instance> pair{a, b};
  const auto both = set_intersection(sa, sb);
  const auto sub = intersection_is_sublattice_check(pair);
  c.expect("stable-under-both set is a sublattice of both lattices", !sub.has_value(),
           sub ? show_witness(*sub) : std::to_string(both.size()) + " matchings");
  const CompoundInstance x = build_compound(pair);
  c.expect("compound firm b leaves workers 1 and 3 incomparable", x.firm_indifferent(1, 0, 2));
  c.expect("compound worker-optimal matches oracle", worker_optimal_compound(x) == worker_optimal_in(a, both));
  c.expect("compound firm-optimal matches oracle", firm_optimal_compound(x) == firm_optimal_in(a, both));
  const auto hybrids = hybrid_instances_one_side(a, b);
  std::vector<Matching> through = sa;
  for (const auto& h : hybrids) through = set_intersection(through, enumerate_stable_bruteforce(h));
  c.expect("two one-side hybrids", hybrids.size() == 2);
  c.expect("hybrid decomposition gives the same intersection", through == both);
  const auto generated = sorted(hybrid_compression(build_rotation_poset(a), pair).enumerate());
  c.expect("union of hybrid edge sets generates the intersection", generated == both,
           std::to_string(generated.size()) + " generated");
}

void example_fixture_5b(const Fixture& fx, Report& report) {
  Checker c(report, "5b: ");
  const Instance& a = fx.a;
  const Instance& b = fx.b;
  const PQDelta d = diff_pq(a, b);
  c.expect("B permutes worker 3 and firm c only",
           d.changed_workers == std::vector<int>{2} && d.changed_firms == std::vector<int>{2});
  const Matching m1 = letters("1b,2c,3a,4d,5e");
  const Matching m2 = letters("1a,2b,3c,4e,5d");
  const Matching m3 = letters("1c,2a,3b,4d,5e");
  const Matching m4 = letters("1b,2c,3a,4e,5d");
  const std::tuple<const char*, Matching, int, int> claims[] = {
      {"M1", m1, 2, 3}, {"M2", m2, 3, 2}, {"M3", m3, 2, 3}, {"M4", m4, 3, 2}};
  for (const auto& [name, m, w, f] : claims) {
    const auto bps = blocking_pairs(b, m);
    c.expect(std::string(name) + " stable under A, blocked under B by (" + std::to_string(w + 1) + ',' +
                 static_cast<char>('a' + f) + ')',
             is_stable(a, m) && has_pair(bps, w, f), show_pairs(bps));
  }
  const Matching lo = meet(a, m1, m2);
  const Matching hi = join(a, m3, m4);
  c.expect("M1, M2 combine under A to {1a,2b,3c,4d,5e}", lo == letters("1a,2b,3c,4d,5e"), show(lo));
  c.expect("M3, M4 combine under A to {1c,2a,3b,4e,5d}", hi == letters("1c,2a,3b,4e,5d"), show(hi));
  c.expect("both combinations stable under A and B",
           is_stable(a, lo) && is_stable(b, lo) && is_stable(a, hi) && is_stable(b, hi));
  const auto sa = enumerate_stable_bruteforce(a);
  const auto sb = enumerate_stable_bruteforce(b);
  const auto only_a = set_difference(sa, sb);
  const auto jw = check_semisublattice(a, only_a, LatticeOp::join);
  const auto mw = check_semisublattice(a, only_a, LatticeOp::meet);
  c.expect("A-only stable set is not closed under join", jw.has_value(), jw ? show_witness(*jw) : "closed");
  c.expect("A-only stable set is not closed under meet", mw.has_value(), mw ? show_witness(*mw) : "closed");
  if (jw) report.witnesses.push_back("5b: " + show_witness(*jw));
  if (mw) report.witnesses.push_back("5b: " + show_witness(*mw));

  const std::vector<Instance> pair{a, b};
  const auto both = set_intersection(sa, sb);
  const auto wo = worker_optimal_multiroom(pair);
  const auto fo = firm_optimal_multiroom(pair);
  c.expect("multiroom worker-optimal matches oracle",
           wo.is_matched() && std::optional<Matching>(wo.matching()) == worker_optimal_in(a, both));
  c.expect("multiroom firm-optimal matches oracle",
           fo.is_matched() && std::optional<Matching>(fo.matching()) == firm_optimal_in(a, both));
  bool agree = true;
  for (const auto& x : both) {
    for (const auto& y : both) agree = agree && verify_join_meet_agree(pair, x, y);
  }
  c.expect("meet and join agree across A and B on the intersection", agree);
  const auto hybrids = hybrid_instances_two_side(a, b);
  c.expect("single two-side hybrid equal to B", hybrids.size() == 1 && hybrids.front() == b);
  const auto lp = solve_feasible(build_lp(pair));
  c.expect("joint LP feasible", lp.has_value());
  if (lp) {
    const Rational thetas[] = {Rational(1, 3), Rational(1, 2), Rational(2, 3)};
    const auto r = rounding_agreement(*lp, a, b, thetas);
    c.expect("rounding under A and B agrees", !r.disagreement && r.checked > 0,
             std::to_string(r.checked) + " thetas checked");
  }
}

void example_fixture_6(const Fixture& fx, Report& report) {
  Checker c(report, "6: ");
  const Instance& a = fx.a;
  const Instance& b = fx.b;
  const Matching m1 = letters("1b,2a,3d,4c,5e,6f");
  const Matching m2 = letters("1a,2b,3c,4d,5f,6e");
  const Matching x1 = letters("1a,2b,3c,4d,5e,6f");
  const Matching x2 = letters("1b,2a,3d,4c,5f,6e");
  const Matching y1 = letters("1b,2a,3c,4d,5e,6f");
  const Matching y2 = letters("1a,2b,3d,4c,5f,6e");
  const auto both = stable_intersection_bruteforce(std::vector<Instance>{a, b});
  for (const auto& [name, m] :
       {std::pair{"M1", m1}, {"M2", m2}, {"X1", x1}, {"X2", x2}, {"Y1", y1}, {"Y2", y2}}) {
    c.expect(std::string(name) + " stable under A and B (oracle)", contains(both, m), show(m));
  }
  c.expect("X1 is the meet under A", meet(a, m1, m2) == x1, show(meet(a, m1, m2)));
  c.expect("X2 is the join under A", join(a, m1, m2) == x2, show(join(a, m1, m2)));
  c.expect("Y1 is the meet under B", meet(b, m1, m2) == y1, show(meet(b, m1, m2)));
  c.expect("Y2 is the join under B", join(b, m1, m2) == y2, show(join(b, m1, m2)));
  c.expect("X1 != Y1 and X2 != Y2", x1 != y1 && x2 != y2);
  c.expect("meet and join disagree across A and B", !verify_join_meet_agree(std::vector<Instance>{a, b}, m1, m2));
  bool refused = false;
  try {
    check_one_side_fixed(std::vector<Instance>{a, b});
  } catch (const NotOneN&) {
    refused = true;
  }
  c.expect("two changed workers refused by the multiroom gate", refused);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Report run_worked_examples(const std::filesystem::path& dir) {
  Report report;
  report.command = "paper-examples";
  report.inputs.push_back(dir.string());
  const std::pair<const char*, void (*)(const Fixture&, Report&)> suites[] = {
      {"4", example_fixture_4}, {"5a", example_fixture_5a}, {"5b", example_fixture_5b}, {"6", example_fixture_6}};
  // Missing or malformed fixtures are input errors, raised before any check.
  std::vector<Fixture> fixtures;
  for (const auto& suite : suites) fixtures.push_back(load_fixture(dir, suite.first));
  for (std::size_t k = 0; k < fixtures.size(); ++k) {
    const auto& [tag, run] = suites[k];
    const auto start = std::chrono::steady_clock::now();
    try {
      run(fixtures[k], report);
    } catch (const std::exception& e) {
      report.verdicts.push_back({std::string(tag) + ": fixture", false, e.what()});
    }
    report.timings.emplace_back(std::string("fixture ") + tag, seconds_since(start));
  }
  return report;
}

namespace {

// Per-check counters for the fuzz harness.
class Tally {
 public:
  void record(const std::string& name, bool ok, const std::function<std::string()>& detail) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == name; });
    if (it == entries_.end()) {
      it = entries_.emplace(entries_.end());
      it->name = name;
    }
    ++it->checked;
    if (!ok && it->failed++ == 0) it->first_failure = detail();
  }

  void emit(Report& report) const {
    for (const Entry& e : entries_) {
      std::string detail = std::to_string(e.checked) + " checked";
      if (e.failed) detail += ", " + std::to_string(e.failed) + " failed; first: " + e.first_failure;
      report.verdicts.push_back({e.name, e.failed == 0, detail});
    }
  }

 private:
  struct Entry {
    std::string name;
    int checked = 0;
    int failed = 0;
    std::string first_failure;
  };
  std::vector<Entry> entries_;
};

std::string describe(const std::optional<Matching>& m) { return m ? show(*m) : "none"; }

std::string describe(const MultiRoomOutcome& o) {
  std::string s = to_string(o.kind());
  if (o.is_matched()) s += ' ' + show(o.matching());
  return s;
}

bool rejections_sound(const std::vector<Pair>& rejections, std::span<const Matching> set) {
  return std::none_of(rejections.begin(), rejections.end(), [&](const Pair& p) {
    return std::any_of(set.begin(), set.end(), [&](const Matching& m) { return m.contains(p.worker, p.firm); });
  });
}

struct TrialContext {
  Tally& tally;
  Report& report;
  std::string label;  // reproduction info

  void check(const std::string& name, bool ok, const std::function<std::string()>& detail = {}) {
    tally.record(name, ok, [&] { return label + (detail ? ": " + detail() : std::string()); });
  }
};

void fuzz_research(std::span<const Instance> family, const std::vector<Matching>& both, TrialContext& t) {
  for (const auto& run : {worker_optimal_multiroom, firm_optimal_multiroom}) {
    const MultiRoomOutcome o = run(family, MultiRoomMode::research);
    const bool consistent = o.is_matched() ? contains(both, o.matching())
                                           : o.kind() == MultiRoomOutcome::Kind::no_match && both.empty();
    if (!consistent) {
      t.report.findings.push_back(t.label + ": multiroom research outcome " + describe(o) + " with " +
                                  std::to_string(both.size()) + " matchings stable under all");
    }
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (auto w = check_sublattice(family[i], both)) {
      t.report.findings.push_back(t.label + ": not a sublattice under instance " + std::to_string(i + 1) + ": " +
                                  show_witness(*w));
    }
  }
  if (const auto x = solve_feasible(build_lp(family))) {
    if (both.empty()) t.report.findings.push_back(t.label + ": joint LP feasible with empty intersection");
    if (!x->is_integral()) t.report.findings.push_back(t.label + ": fractional joint LP vertex");
  }
}

void fuzz_direct(std::span<const Instance> family, const PQDelta& delta, const std::vector<Matching>& both,
                 std::uint64_t seed, TrialContext& t) {
  const Instance& a = family.front();
  const int n = a.size();
  std::vector<std::vector<Matching>> stable;
  for (const auto& i : family) stable.push_back(enumerate_stable_bruteforce(i));
  const auto best = worker_optimal_in(a, both);
  const auto worst = firm_optimal_in(a, both);

  if (delta.p() == 0) {
    const CompoundInstance x = build_compound(family);
    const auto wo = worker_optimal_compound_traced(x);
    const auto fo = firm_optimal_compound_traced(x);
    t.check("compound worker-optimal equals oracle extreme", wo.matching == best,
            [&] { return describe(wo.matching) + " vs " + describe(best); });
    t.check("compound firm-optimal equals oracle extreme", fo.matching == worst,
            [&] { return describe(fo.matching) + " vs " + describe(worst); });
    t.check("compound rejections avoid the intersection",
            rejections_sound(wo.rejections, both) && rejections_sound(fo.rejections, both));
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    bool equivalent = true;
    do {
      const Matching m(perm);
      equivalent = equivalent && (strong_blocking_pairs(x, m).empty() == contains(both, m));
    } while (equivalent && std::next_permutation(perm.begin(), perm.end()));
    t.check("strongly stable iff stable under every source", equivalent);
  }

  const auto wm = worker_optimal_multiroom_traced(family);
  const auto fm = firm_optimal_multiroom_traced(family);
  auto agrees = [&](const MultiRoomOutcome& o, const std::optional<Matching>& expected) {
    return o.is_matched() ? expected == o.matching()
                          : o.kind() == MultiRoomOutcome::Kind::no_match && !expected;
  };
  t.check("multiroom worker-optimal equals oracle extreme", agrees(wm.outcome, best),
          [&] { return describe(wm.outcome) + " vs " + describe(best); });
  t.check("multiroom firm-optimal equals oracle extreme", agrees(fm.outcome, worst),
          [&] { return describe(fm.outcome) + " vs " + describe(worst); });
  t.check("multiroom rooms agree", wm.outcome.kind() != MultiRoomOutcome::Kind::no_idea &&
                                       fm.outcome.kind() != MultiRoomOutcome::Kind::no_idea);
  t.check("multiroom rejections avoid the intersection",
          rejections_sound(wm.rejections, both) && rejections_sound(fm.rejections, both));

  bool closed = true;
  std::string closure_detail;
  for (const auto& inst : family) {
    if (auto w = check_sublattice(inst, both); w && closed) {
      closed = false;
      closure_detail = show_witness(*w);
    }
  }
  t.check("intersection is a sublattice of every lattice", closed, [&] { return closure_detail; });
  bool agree = true;
  for (std::size_t i = 0; i < both.size() && agree; ++i) {
    for (std::size_t j = i + 1; j < both.size() && agree; ++j) agree = verify_join_meet_agree(family, both[i], both[j]);
  }
  t.check("meet and join agree across instances", agree);

  const bool one_side = delta.p() == 0;
  std::vector<Matching> through = stable[0];
  for (std::size_t j = 1; j < family.size(); ++j) {
    const auto hybrids = one_side ? hybrid_instances_one_side(a, family[j]) : hybrid_instances_two_side(a, family[j]);
    for (const auto& h : hybrids) through = set_intersection(through, enumerate_stable_bruteforce(h));
  }
  t.check(one_side ? "one-side hybrid identity" : "two-side hybrid identity", through == both,
          [&] { return std::to_string(through.size()) + " vs " + std::to_string(both.size()); });

  const RotationPoset poset = build_rotation_poset(a);
  const auto lattice = enumerate_lattice(poset);
  const auto lattice_sorted = sorted(lattice);
  t.check("rotation poset closed sets match oracle", lattice_sorted == stable[0] &&
                                                         std::adjacent_find(lattice_sorted.begin(), lattice_sorted.end()) ==
                                                             lattice_sorted.end());
  const auto generated = sorted(family_compression(poset, family, one_side).enumerate());
  t.check(one_side ? "union of hybrid edge sets generates the intersection"
                   : "union of member edge sets generates the intersection",
          generated == both,
          [&] { return std::to_string(generated.size()) + " vs " + std::to_string(both.size()); });

  const auto single = solve_feasible(build_lp(family.first(1)));
  t.check("single-instance LP vertex integral and stable",
          single && single->as_matching() && contains(stable[0], *single->as_matching()));
  const auto joint = solve_feasible(build_lp(family));
  t.check("joint LP feasible iff intersection nonempty", joint.has_value() == !both.empty());
  if (joint) {
    const auto thetas = theta_samples(24, seed);
    bool rounded_in = true;
    int boundary = 0;
    for (const auto& theta : thetas) {
      for (const auto& inst : family) {
        try {
          rounded_in = rounded_in && contains(both, theta_round(*joint, inst, theta));
        } catch (const BoundaryTheta&) {
          ++boundary;
        }
      }
    }
    t.check("theta rounding lands in the intersection", rounded_in);
    bool agree_all = true;
    for (std::size_t j = 1; j < family.size(); ++j) {
      const auto r = rounding_agreement(*joint, a, family[j], thetas);
      agree_all = agree_all && !r.disagreement && r.checked > 0;
    }
    t.check("theta rounding agrees across instances", agree_all);
  }
}

}  // namespace

Report run_fuzz(const FuzzConfig& config) {
  if (config.n < 1 || config.trials < 0 || config.instances < 2 || config.p < 0 || config.q < 0 ||
      config.p > config.n || config.q > config.n) {
    throw ValidationError("invalid fuzz configuration");
  }
  const int cap = oracle_cap();
  if (config.n > cap) throw CapExceeded("n exceeds the oracle cap of " + std::to_string(cap));
  Report report;
  report.command = "fuzz";
  report.inputs = {"n=" + std::to_string(config.n), "trials=" + std::to_string(config.trials),
                   "pq=" + std::to_string(config.p) + "," + std::to_string(config.q),
                   "instances=" + std::to_string(config.instances), "seed=" + std::to_string(config.seed)};
  const bool research = config.p >= 2 && config.q >= 2;
  const bool transpose = config.p >= 2 && !research;
  report.output.push_back(std::string("mode: ") + (research ? "research" : transpose ? "transposed" : "direct"));

  Tally tally;
  int empty = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t seed = trial_seed(config.seed, trial);
    std::mt19937_64 rng(seed);
    std::vector<Instance> family = random_family(config.n, config.p, config.q, config.instances, rng);
    if (transpose) {
      for (auto& i : family) i = i.transposed();
    }
    TrialContext t{tally, report, "trial " + std::to_string(trial) + " seed " + std::to_string(seed)};
    try {
      const auto both = stable_intersection_bruteforce(family);
      empty += both.empty();
      if (research) {
        fuzz_research(family, both, t);
      } else {
        fuzz_direct(family, diff_pq(family), both, seed, t);
      }
    } catch (const std::exception& e) {
      t.check("no exceptions", false, [&] { return std::string(e.what()); });
    }
  }
  tally.emit(report);
  report.output.push_back("trials with empty intersection: " + std::to_string(empty) + "/" +
                          std::to_string(config.trials));
  report.output.push_back("findings: " + std::to_string(report.findings.size()));
  report.timings.emplace_back("fuzz", seconds_since(start));
  return report;
}

namespace {

std::vector<Instance> load_all(const std::vector<std::string>& paths) {
  std::vector<Instance> out;
  for (const auto& p : paths) out.push_back(load_instance(p));
  return out;
}

std::string line_of(const Matching& m) { return format_matching(m) + "  " + show(m); }

Rational parse_theta(const std::string& text) {
  Rational theta;
  if (text.empty() || theta.set_str(text, 10) != 0) throw CLI::ValidationError("--round-theta", "not a rational: " + text);
  theta.canonicalize();
  if (theta < 0 || theta > 1) throw CLI::ValidationError("--round-theta", "must lie in [0,1]");
  return theta;
}

std::pair<int, int> parse_pq(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int p = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    const std::string rest = text.substr(comma + 1);
    const int q = std::stoi(rest, &used);
    if (used != rest.size() || p < 0 || q < 0) throw std::invalid_argument(text);
    return {p, q};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--pq", "expected <p>,<q>, got " + text);
  }
}

}  // namespace

int cmd_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matchings stable under several nearby instances", "smlat"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  bool timings = false;
  app.add_flag("--json", json, "Emit the report as JSON");
  app.add_flag("--timings", timings, "Include timings in the report");

  std::string instance;
  std::vector<std::string> instances;

  auto* check = app.add_subcommand("check", "Validate an instance; optionally test a matching");
  std::string matching_text;
  check->add_option("instance", instance, "Instance file")->required();
  check->add_option("--matching", matching_text, "Matching as \"M: f1 f2 ...\"");

  auto* enumerate = app.add_subcommand("enumerate", "List every stable matching of an instance");
  bool enumerate_poset = false;
  enumerate->add_option("instance", instance, "Instance file")->required();
  enumerate->add_flag("--poset", enumerate_poset, "Print the rotation poset instead");

  auto* poset_cmd = app.add_subcommand("poset", "Print the rotation poset of an instance");
  poset_cmd->add_option("instance", instance, "Instance file")->required();

  auto* intersect = app.add_subcommand("intersect", "Matchings stable under every instance");
  intersect->add_option("instances", instances, "Instance files")->required()->expected(1, -1);
  auto* what = intersect->add_option_group("query");
  bool want_worker = false, want_firm = false, want_all = false, want_poset = false;
  what->add_flag("--worker-opt", want_worker, "Worker-optimal common stable matching");
  what->add_flag("--firm-opt", want_firm, "Firm-optimal common stable matching");
  what->add_flag("--enumerate", want_all, "List all common stable matchings");
  what->add_flag("--poset", want_poset, "Print the compressed rotation poset");
  what->require_option(1);

  auto* lp_cmd = app.add_subcommand("lp", "Solve the joint stability LP exactly");
  std::string theta_text;
  bool export_model = false;
  lp_cmd->add_option("instances", instances, "Instance files")->required()->expected(1, -1);
  lp_cmd->add_option("--round-theta", theta_text, "Round the solution at theta = p/q");
  lp_cmd->add_flag("--export", export_model, "Print the model");

  auto* examples_cmd = app.add_subcommand("paper-examples", "Verify the worked examples");
  std::string fixture_dir = default_fixture_dir().string();
  examples_cmd->add_option("--fixtures", fixture_dir, "Fixture directory");

  auto* fuzz = app.add_subcommand("fuzz", "Randomized property checks against the oracle");
  FuzzConfig config;
  std::string pq = "0,2";
  fuzz->add_option("--n", config.n, "Agents per side")->check(CLI::Range(1, 12));
  fuzz->add_option("--trials", config.trials, "Number of random families")->check(CLI::NonNegativeNumber);
  fuzz->add_option("--pq", pq, "Changed workers and firms, p,q");
  fuzz->add_option("--instances", config.instances, "Instances per family")->check(CLI::Range(2, 16));
  fuzz->add_option("--seed", config.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  Report report;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (check->parsed()) {
      report.command = "check";
      report.inputs = {instance};
      const Instance inst = load_instance(instance);
      report.output.push_back("n " + std::to_string(inst.size()));
      report.output.push_back("worker-optimal " + line_of(worker_da(inst)));
      report.output.push_back("firm-optimal   " + line_of(firm_da(inst)));
      if (!matching_text.empty()) {
        const Matching m = parse_matching(matching_text);
        if (m.size() != inst.size()) throw SizeMismatch("matching size differs from instance");
        const auto bps = blocking_pairs(inst, m);
        report.output.push_back(std::string("stable: ") + (bps.empty() ? "yes" : "no"));
        report.output.push_back("blocking pairs: " + show_pairs(bps));
      }
    } else if (enumerate->parsed() || poset_cmd->parsed()) {
      report.command = enumerate->parsed() ? "enumerate" : "poset";
      report.inputs = {instance};
      const RotationPoset poset = build_rotation_poset(load_instance(instance));
      if (poset_cmd->parsed() || enumerate_poset) {
        std::istringstream lines(export_poset(poset));
        for (std::string line; std::getline(lines, line);) report.output.push_back(line);
      } else {
        LatticeEnumerator it(poset);
        int count = 0;
        while (auto m = it.next()) {
          report.output.push_back(line_of(*m));
          ++count;
        }
        report.output.push_back("count " + std::to_string(count));
      }
    } else if (intersect->parsed()) {
      report.command = "intersect";
      report.inputs = instances;
      const auto family = load_all(instances);
      const PQDelta delta = diff_pq(family);
      report.output.push_back("instances " + std::to_string(family.size()) + ", p=" + std::to_string(delta.p()) +
                              " q=" + std::to_string(delta.q()));
      const bool research = delta.p() >= 2;
      if (research) {
        report.findings.push_back("more than one worker list changes; results come from research mode or the oracle");
      }
      if (want_worker || want_firm) {
        std::string result;
        if (delta.p() == 0) {
          const CompoundInstance x = build_compound(family);
          const auto m = want_worker ? worker_optimal_compound(x) : firm_optimal_compound(x);
          result = m ? line_of(*m) : "no match";
        } else {
          const auto mode = research ? MultiRoomMode::research : MultiRoomMode::checked;
          const auto o = want_worker ? worker_optimal_multiroom(family, mode) : firm_optimal_multiroom(family, mode);
          result = o.is_matched() ? line_of(o.matching()) : to_string(o.kind());
        }
        report.output.push_back(result);
      } else if (want_all) {
        std::vector<Matching> all;
        if (research) {
          all = stable_intersection_bruteforce(family);
        } else {
          all = family_compression(build_rotation_poset(family.front()), family, delta.p() == 0).enumerate();
        }
        for (const auto& m : all) report.output.push_back(line_of(m));
        report.output.push_back("count " + std::to_string(all.size()));
      } else {
        if (research) throw ValidationError("no compressed poset: more than one worker list changes");
        const auto meta = family_compression(build_rotation_poset(family.front()), family, delta.p() == 0);
        std::istringstream lines(export_poset(meta));
        for (std::string line; std::getline(lines, line);) report.output.push_back(line);
      }
    } else if (lp_cmd->parsed()) {
      report.command = "lp";
      report.inputs = instances;
      const auto family = load_all(instances);
      std::optional<Rational> theta;
      if (!theta_text.empty()) theta = parse_theta(theta_text);
      const LPModel model = build_lp(family);
      report.output.push_back("rows: " + std::to_string(model.count(RowKind::worker_sum) + model.count(RowKind::firm_sum)) +
                              " equalities, " + std::to_string(model.count(RowKind::stability)) + " stability, " +
                              std::to_string(model.count(RowKind::nonnegativity)) + " nonnegativity");
      if (export_model) {
        std::istringstream lines(export_lp(model));
        for (std::string line; std::getline(lines, line);) report.output.push_back(line);
      }
      const auto x = solve_feasible(model);
      if (!x) {
        report.output.push_back("infeasible");
      } else {
        report.output.push_back(std::string("feasible, ") + (x->is_integral() ? "integral" : "fractional"));
        for (int w = 0; w < x->size(); ++w) {
          for (int f = 0; f < x->size(); ++f) {
            if (sgn(x->at(w, f)) != 0) {
              report.output.push_back("x" + std::to_string(w + 1) + "_" + std::to_string(f + 1) + " = " +
                                      x->at(w, f).get_str());
            }
          }
        }
        if (theta) {
          for (std::size_t i = 0; i < family.size(); ++i) {
            report.output.push_back("round " + std::to_string(i + 1) + " at " + theta->get_str() + ": " +
                                    line_of(theta_round(*x, family[i], *theta)));
          }
        }
      }
    } else if (examples_cmd->parsed()) {
      report = run_worked_examples(fixture_dir);
    } else if (fuzz->parsed()) {
      std::tie(config.p, config.q) = parse_pq(pq);
      report = run_fuzz(config);
    }
  } catch (const CLI::ValidationError& e) {
    err << "smlat: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    err << "smlat: invariant violation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "smlat: " << e.what() << '\n';
    return 2;
  }
  if (report.command != "paper-examples" && report.command != "fuzz") {
    report.timings.emplace_back(report.command, seconds_since(start));
  }
  out << (json ? report.to_json(timings) : report.to_text(timings));
  return report.passed() ? 0 : 1;
}

}  // namespace smlat
