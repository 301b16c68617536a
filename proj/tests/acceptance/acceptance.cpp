// Acceptance run: one PASS/FAIL line per criterion. Expected values come
// from the worked examples; derived values come from the reference oracle in
// tests/unit/naive.hpp.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "../unit/naive.hpp"
#include "smlat/compound.hpp"
#include "smlat/error.hpp"
#include "smlat/lp.hpp"
#include "smlat/multiroom.hpp"
#include "smlat/random.hpp"
#include "smlat/rotations.hpp"
#include "smlat/sublattice.hpp"
#include "smlat/verify.hpp"

using namespace smlat;

namespace {

using Set = std::set<std::vector<int>>;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures, keeps the first few messages.
class Expect {
 public:
  void operator()(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    std::string d = summary + ", " + std::to_string(checks_) + " checks";
    if (failures_) d += ", " + std::to_string(failures_) + " failed: " + notes_;
    return {failures_ == 0, d};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string notes_;
};

Matching letters(const std::string& text) {
  std::vector<int> firm_of;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t end = text.find(',', i);
    if (end == std::string::npos) end = text.size();
    const int w = std::stoi(text.substr(i, end - i - 1)) - 1;
    if (static_cast<int>(firm_of.size()) <= w) firm_of.resize(w + 1, -1);
    firm_of[w] = text[end - 1] - 'a';
    i = end + 1;
  }
  return Matching(firm_of);
}

// Worker-wise better (lo) or worse (hi) partner, computed from raw lists.
std::vector<int> combine(const Instance& i, const std::vector<int>& a, const std::vector<int>& b, bool better) {
  std::vector<int> out(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) {
    const bool a_first = naive::pos(i.worker_list(static_cast<int>(w)), a[w]) <=
                         naive::pos(i.worker_list(static_cast<int>(w)), b[w]);
    out[w] = a_first == better ? a[w] : b[w];
  }
  return out;
}

bool closed_under_both(const Instance& i, const Set& s) {
  for (const auto& a : s) {
    for (const auto& b : s) {
      if (!s.count(combine(i, a, b, true)) || !s.count(combine(i, a, b, false))) return false;
    }
  }
  return true;
}

std::vector<Instance> family(std::uint64_t seed, int n, int p, int q, int k) {
  std::mt19937_64 rng(seed);
  return random_family(n, p, q, k, rng);
}

std::optional<std::vector<int>> firms_of(const std::optional<Matching>& m) {
  return m ? std::optional(m->firms()) : std::nullopt;
}

std::optional<std::vector<int>> firms_of(const MultiRoomOutcome& o) {
  return o.is_matched() ? std::optional(o.matching().firms()) : std::nullopt;
}

Set generated(const MetaRotationPoset& meta) {
  Set out;
  for (const auto& m : meta.enumerate()) out.insert(m.firms());
  return out;
}

Set via_hybrids(const std::vector<Instance>& fam, bool one_side) {
  std::vector<Instance> all{fam[0]};
  for (std::size_t j = 1; j < fam.size(); ++j) {
    const auto h = one_side ? hybrid_instances_one_side(fam[0], fam[j]) : hybrid_instances_two_side(fam[0], fam[j]);
    all.insert(all.end(), h.begin(), h.end());
  }
  return naive::common_stable(all);
}

const std::uint64_t kSeed = 20240611;

Outcome counterexample() {
  Expect e;
  const Fixture fx = load_fixture(default_fixture_dir(), "4");
  const Matching m1 = letters("1a,2b,3c,4d"), m2 = letters("1b,2a,3d,4c");
  for (const auto& m : {m1, m2}) {
    e(naive::stable(fx.a, m) && naive::stable(fx.b, m), format_matching_letters(m) + " not stable under both");
  }
  const Matching combined = meet(fx.a, m1, m2);
  e(combined == letters("1a,2b,3d,4c"), "combination under A is " + format_matching_letters(combined));
  e(combined.firms() == combine(fx.a, m1.firms(), m2.firms(), true), "library and reference combinations differ");
  const auto bps = blocking_pairs(fx.b, combined);
  e(std::find(bps.begin(), bps.end(), Pair{3, 0}) != bps.end(), "(4,a) does not block under B");
  e(!naive::stable(fx.b, combined), "combination stable under B");
  return e.done("fixture 4");
}

Outcome twisted() {
  Expect e;
  const Fixture fx = load_fixture(default_fixture_dir(), "6");
  const Set both = naive::common_stable({fx.a, fx.b});
  const char* names[] = {"M1", "M2", "X1", "X2", "Y1", "Y2"};
  const char* text[] = {"1b,2a,3d,4c,5e,6f", "1a,2b,3c,4d,5f,6e", "1a,2b,3c,4d,5e,6f",
                        "1b,2a,3d,4c,5f,6e", "1b,2a,3c,4d,5e,6f", "1a,2b,3d,4c,5f,6e"};
  std::vector<Matching> m;
  for (int k = 0; k < 6; ++k) {
    m.push_back(letters(text[k]));
    e(both.count(m.back().firms()) == 1, std::string(names[k]) + " not stable under both");
  }
  e(m[2] != m[4] && m[3] != m[5], "X and Y coincide");
  e(meet(fx.a, m[0], m[1]) == m[2] && join(fx.a, m[0], m[1]) == m[3], "A combinations differ from X1, X2");
  e(meet(fx.b, m[0], m[1]) == m[4] && join(fx.b, m[0], m[1]) == m[5], "B combinations differ from Y1, Y2");
  e(!verify_join_meet_agree(std::vector<Instance>{fx.a, fx.b}, m[0], m[1]), "A and B combinations agree");
  return e.done("fixture 6, " + std::to_string(both.size()) + " common stable matchings");
}

Outcome semi_sublattice() {
  Expect e;
  {
    const Fixture fx = load_fixture(default_fixture_dir(), "5a");
    const Set sa = naive::stable_set(fx.a);
    const Set both = naive::common_stable({fx.a, fx.b});
    const Matching target = letters("1b,2a,3d,4c,5e");
    const char* only_a[] = {"1b,2a,3c,4d,5e", "1a,2b,3d,4c,5e", "1b,2c,3d,4a,5e", "1d,2a,3b,4c,5e"};
    for (const char* t : only_a) {
      const Matching m = letters(t);
      e(sa.count(m.firms()) && !both.count(m.firms()), std::string("5a: ") + t + " not in A only");
    }
    e(naive::stable(fx.a, letters(only_a[0])) && !naive::stable(fx.b, letters(only_a[0])), "5a: M1");
    e(join(fx.a, letters(only_a[0]), letters(only_a[1])) == target, "5a: join of M1, M2");
    e(meet(fx.a, letters(only_a[2]), letters(only_a[3])) == target, "5a: meet of M3, M4");
    e(both.count(target.firms()) == 1, "5a: target not stable under both");
    const auto bm1 = blocking_pairs(fx.b, letters(only_a[0]));
    const auto bm2 = blocking_pairs(fx.b, letters(only_a[1]));
    e(std::find(bm1.begin(), bm1.end(), Pair{4, 2}) != bm1.end(), "5a: (5,c) does not block M1");
    e(std::find(bm2.begin(), bm2.end(), Pair{3, 1}) != bm2.end(), "5a: (4,b) does not block M2");
  }
  {
    const Fixture fx = load_fixture(default_fixture_dir(), "5b");
    const Set both = naive::common_stable({fx.a, fx.b});
    const std::tuple<const char*, int, int> claims[] = {
        {"1b,2c,3a,4d,5e", 2, 3}, {"1a,2b,3c,4e,5d", 3, 2}, {"1c,2a,3b,4d,5e", 2, 3}, {"1b,2c,3a,4e,5d", 3, 2}};
    for (const auto& [t, w, f] : claims) {
      const Matching m = letters(t);
      const auto bps = blocking_pairs(fx.b, m);
      e(naive::stable(fx.a, m) && std::find(bps.begin(), bps.end(), Pair{w, f}) != bps.end(),
        std::string("5b: ") + t + " claim");
    }
    const Matching lo = meet(fx.a, letters("1b,2c,3a,4d,5e"), letters("1a,2b,3c,4e,5d"));
    const Matching hi = join(fx.a, letters("1c,2a,3b,4d,5e"), letters("1b,2c,3a,4e,5d"));
    e(lo == letters("1a,2b,3c,4d,5e"), "5b: combination of M1, M2 is " + format_matching_letters(lo));
    e(hi == letters("1c,2a,3b,4e,5d"), "5b: combination of M3, M4 is " + format_matching_letters(hi));
    e(both.count(lo.firms()) && both.count(hi.firms()), "5b: combinations not stable under both");
  }
  return e.done("fixtures 5a and 5b");
}

Outcome engines() {
  Expect e;
  int empty = 0;
  for (int t = 0; t < 200; ++t) {
    const auto seed = trial_seed(kSeed, t);
    const auto fam = family(seed, 5, 0, 2, 2);
    const Set both = naive::common_stable(fam);
    empty += both.empty();
    const auto best = naive::extreme(fam[0].worker_lists(), both, true);
    const auto worst = naive::extreme(fam[0].worker_lists(), both, false);
    const CompoundInstance x = build_compound(fam);
    const std::string tag = "(0,2) seed " + std::to_string(seed);
    e(firms_of(worker_optimal_compound(x)) == best, tag + " compound worker");
    e(firms_of(firm_optimal_compound(x)) == worst, tag + " compound firm");
    e(firms_of(worker_optimal_multiroom(fam)) == best, tag + " multiroom worker");
    e(firms_of(firm_optimal_multiroom(fam)) == worst, tag + " multiroom firm");
  }
  for (int t = 0; t < 200; ++t) {
    const auto seed = trial_seed(kSeed + 1, t);
    const auto fam = family(seed, 5, 1, 3, 2);
    const Set both = naive::common_stable(fam);
    empty += both.empty();
    const std::string tag = "(1,3) seed " + std::to_string(seed);
    e(firms_of(worker_optimal_multiroom(fam)) == naive::extreme(fam[0].worker_lists(), both, true),
      tag + " multiroom worker");
    e(firms_of(firm_optimal_multiroom(fam)) == naive::extreme(fam[0].worker_lists(), both, false),
      tag + " multiroom firm");
  }
  return e.done("200 (0,2) + 200 (1,3) families, " + std::to_string(empty) + " with empty intersection");
}

Outcome lattice() {
  Expect e;
  std::mt19937_64 rng(kSeed + 2);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 5;
    const Instance i = random_instance(n, rng);
    const RotationPoset poset = build_rotation_poset(i);
    const auto all = enumerate_lattice(poset);
    Set seen;
    for (const auto& m : all) seen.insert(m.firms());
    const std::string tag = "instance " + std::to_string(t);
    e(seen.size() == all.size(), tag + " repeats a matching");
    e(seen == naive::stable_set(i), tag + " closed sets differ from stable set");
    std::set<Pair> pairs;
    std::size_t total = 0;
    for (const auto& r : poset.rotations()) {
      total += r.pairs.size();
      pairs.insert(r.pairs.begin(), r.pairs.end());
    }
    e(pairs.size() == total, tag + " pair in two rotations");
  }
  return e.done("100 instances, n 3..7");
}

Outcome hybrids() {
  Expect one, two;
  {
    const Fixture fx = load_fixture(default_fixture_dir(), "5a");
    one(via_hybrids({fx.a, fx.b}, true) == naive::common_stable({fx.a, fx.b}), "fixture 5a");
    const Fixture gx = load_fixture(default_fixture_dir(), "5b");
    two(via_hybrids({gx.a, gx.b}, false) == naive::common_stable({gx.a, gx.b}), "fixture 5b");
  }
  for (int t = 0; t < 100; ++t) {
    const auto seed = trial_seed(kSeed + 3, t);
    const auto fam = family(seed, 5, 0, 3, 2);
    one(via_hybrids(fam, true) == naive::common_stable(fam), "seed " + std::to_string(seed));
  }
  for (int t = 0; t < 100; ++t) {
    const auto seed = trial_seed(kSeed + 4, t);
    const auto fam = family(seed, 5, 1, 3, 2);
    const Set through = via_hybrids(fam, false);
    const Set both = naive::common_stable(fam);
    two(through == both, "(1,3) seed " + std::to_string(seed) + ": " + std::to_string(through.size()) + " vs " +
                             std::to_string(both.size()));
  }
  const Outcome a = one.done("one-side: fixture + 100 (0,3)");
  const Outcome b = two.done("two-side: fixture + 100 (1,3)");
  return {a.pass && b.pass, a.detail + " | " + b.detail};
}

Outcome compression() {
  Expect e;
  auto run = [&](const std::vector<Instance>& fam, const std::string& tag) {
    const RotationPoset host = build_rotation_poset(fam[0]);
    std::vector<MetaRotationPoset> parts;
    for (std::size_t j = 1; j < fam.size(); ++j) {
      for (const Instance& h : hybrid_instances_one_side(fam[0], fam[j])) {
        parts.push_back(compression_from_membership(host, [&](const Matching& m) { return is_stable(h, m); }));
      }
    }
    e(generated(union_edge_sets(host, parts)) == naive::common_stable(fam), tag);
  };
  const Fixture fx = load_fixture(default_fixture_dir(), "5a");
  run({fx.a, fx.b}, "fixture 5a");
  for (int t = 0; t < 100; ++t) {
    const auto seed = trial_seed(kSeed + 5, t);
    run(family(seed, 5, 0, 1 + t % 3, 2 + t % 2), "seed " + std::to_string(seed));
  }
  return e.done("fixture 5a + 100 (0,k) families");
}

Outcome lp_suite() {
  Expect e;
  std::mt19937_64 rng(kSeed + 6);
  for (int t = 0; t < 100; ++t) {
    const Instance i = random_instance(1 + t % 6, rng);
    const auto x = solve_feasible(build_lp(std::vector<Instance>{i}));
    e(x && x->is_integral() && naive::stable(i, *x->as_matching()), "single instance " + std::to_string(t));
  }
  int feasible = 0, min_checked = 1 << 30;
  for (int t = 0; t < 100; ++t) {
    const auto seed = trial_seed(kSeed + 7, t);
    const auto fam = family(seed, 5, 1, 1 + t % 3, 2);
    const Set both = naive::common_stable(fam);
    const auto x = solve_feasible(build_lp(fam));
    const std::string tag = "seed " + std::to_string(seed);
    e(x.has_value() == !both.empty(), tag + " feasibility");
    if (!x) continue;
    ++feasible;
    int checked = 0;
    for (int batch = 0; checked < 20 && batch < 8; ++batch) {
      for (const Rational& theta : theta_samples(24, seed + batch)) {
        try {
          const Matching a = theta_round(*x, fam[0], theta);
          const Matching b = theta_round(*x, fam[1], theta);
          e(a == b, tag + " rounding disagrees at " + theta.get_str());
          e(both.count(a.firms()) == 1, tag + " rounding leaves the intersection");
          ++checked;
        } catch (const BoundaryTheta&) {
        }
      }
    }
    e(checked >= 20, tag + " fewer than 20 interior samples");
    min_checked = std::min(min_checked, checked);
  }
  return e.done("100 single, 100 joint (1,q), " + std::to_string(feasible) + " feasible, >= " +
                std::to_string(feasible ? min_checked : 0) + " interior thetas each");
}

Outcome structure() {
  Expect e;
  for (int t = 0; t < 200; ++t) {
    const int p = t % 2;
    const auto seed = trial_seed(kSeed + 8, t);
    const auto fam = family(seed, 5, p, 1 + t % 3, 2 + t % 2);
    const Set both = naive::common_stable(fam);
    const std::string tag = "(" + std::to_string(p) + ",k) seed " + std::to_string(seed);
    for (const auto& i : fam) e(closed_under_both(i, both), tag + " not closed");
    if (p == 1) {
      bool agree = true;
      for (const auto& a : both) {
        for (const auto& b : both) {
          for (const auto& i : fam) {
            agree = agree && combine(i, a, b, true) == combine(fam[0], a, b, true) &&
                    combine(i, a, b, false) == combine(fam[0], a, b, false);
          }
        }
      }
      e(agree, tag + " combinations differ across instances");
    }
  }
  return e.done("100 (0,k) + 100 (1,k) families");
}

struct Criterion {
  const char* name;
  double limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"counterexample reproduction", 1, counterexample},
      {"twisted lattices", 5, twisted},
      {"semi-sublattice failures", 4, semi_sublattice},
      {"engines equal oracle extremes", 120, engines},
      {"rotation lattice machinery", 180, lattice},
      {"hybrid identities", 0, hybrids},
      {"compression soundness", 0, compression},
      {"LP suite", 300, lp_suite},
      {"sublattice structure", 0, structure},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs > c.limit) {
      o.pass = false;
      o.detail += ", over the " + std::to_string(static_cast<int>(c.limit)) + " s limit";
    }
    failed += !o.pass;
    std::printf("criterion %d %s: %s (%.2f s) -- %s\n", index, o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
