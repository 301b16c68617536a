#include <random>
#include <set>

#include "doctest.h"
#include "naive.hpp"
#include "smlat/error.hpp"
#include "smlat/oracle.hpp"
#include "smlat/sublattice.hpp"
#include "smlat/verify.hpp"

using namespace smlat;

namespace {

std::vector<Matching> to_matchings(const std::set<std::vector<int>>& s) {
  std::vector<Matching> out;
  for (const auto& m : s) out.emplace_back(m);
  return out;
}

std::set<std::vector<int>> through_hybrids(const Instance& a, const std::vector<Instance>& hybrids) {
  std::vector<Instance> all{a};
  all.insert(all.end(), hybrids.begin(), hybrids.end());
  return naive::common_stable(all);
}

MetaRotationPoset compress_by(const RotationPoset& host, const std::vector<Instance>& members) {
  std::vector<MetaRotationPoset> parts;
  for (const auto& b : members) {
    parts.push_back(compression_from_membership(host, [&](const Matching& m) { return naive::stable(b, m); }));
  }
  return union_edge_sets(host, parts);
}

std::set<std::vector<int>> generated(const MetaRotationPoset& meta) {
  std::set<std::vector<int>> out;
  for (const auto& m : meta.enumerate()) out.insert(m.firms());
  return out;
}

}  // namespace

TEST_CASE("full stable set is a sublattice; a lone non-extreme pair is not") {
  std::mt19937 rng(41);
  int strict = 0;
  for (int t = 0; t < 80; ++t) {
    const Instance i = naive::random_instance(6, rng);
    const auto all = to_matchings(naive::stable_set(i));
    CHECK_FALSE(check_sublattice(i, all).has_value());
    if (all.size() < 3) continue;
    for (std::size_t x = 0; x < all.size(); ++x) {
      for (std::size_t y = x + 1; y < all.size(); ++y) {
        const std::vector<Matching> two{all[x], all[y]};
        const bool comparable = dominates(i, all[x], all[y]) || dominates(i, all[y], all[x]);
        const auto w = check_sublattice(i, two);
        CHECK(w.has_value() == !comparable);
        if (w) {
          ++strict;
          const Matching expect = w->op == LatticeOp::meet ? meet(i, w->first, w->second) : join(i, w->first, w->second);
          CHECK(w->result == expect);
        }
      }
    }
  }
  CHECK(strict > 0);
}

TEST_CASE("semi-sublattice checks one side only") {
  const Fixture fx = load_fixture(default_fixture_dir(), "4");
  const auto both = stable_intersection_bruteforce(std::vector<Instance>{fx.a, fx.b});
  const auto w = check_sublattice(fx.a, both);
  REQUIRE(w.has_value());
  const auto other = w->op == LatticeOp::meet ? LatticeOp::join : LatticeOp::meet;
  CHECK(check_semisublattice(fx.a, both, w->op).has_value());
  CHECK(std::string(to_string(other)) != to_string(w->op));
}

TEST_CASE("one-side hybrids reproduce the intersection") {
  std::mt19937 rng(42);
  for (int t = 0; t < 120; ++t) {
    const auto fam = naive::random_family(5, 0, 1 + t % 4, 2, rng);
    const auto hybrids = hybrid_instances_one_side(fam[0], fam[1]);
    CHECK(static_cast<int>(hybrids.size()) == diff_pq(fam[0], fam[1]).q());
    for (const auto& h : hybrids) CHECK(diff_pq(fam[0], h).q() == 1);
    CHECK(through_hybrids(fam[0], hybrids) == naive::common_stable(fam));
  }
  CHECK_THROWS_AS(hybrid_instances_one_side(naive::random_instance(3, rng).with_worker_list(0, {0, 1, 2}),
                                            naive::random_instance(3, rng).with_worker_list(0, {2, 1, 0})),
                  NotZeroN);
}

TEST_CASE("two-side hybrids with one changed firm") {
  std::mt19937 rng(43);
  for (int t = 0; t < 120; ++t) {
    const auto fam = naive::random_family(5, 1, t % 2, 2, rng);
    const auto hybrids = hybrid_instances_two_side(fam[0], fam[1]);
    CHECK(hybrids.size() == 1);
    CHECK(through_hybrids(fam[0], hybrids) == naive::common_stable(fam));
  }
}

TEST_CASE("two-side hybrids can lose common stable matchings when several firms change") {
  // A hybrid pairs the changed worker's new list with another changed firm's
  // old list; that combination can block a matching stable under A and B.
  std::mt19937 rng(44);
  int lost = 0;
  for (int t = 0; t < 400; ++t) {
    const auto fam = naive::random_family(5, 1, 3, 2, rng);
    const auto through = through_hybrids(fam[0], hybrid_instances_two_side(fam[0], fam[1]));
    const auto both = naive::common_stable(fam);
    for (const auto& m : through) CHECK(both.count(m) == 1);
    lost += through.size() < both.size();
  }
  CHECK(lost > 0);
}

TEST_CASE("two-side hybrids need a single changed worker") {
  std::mt19937 rng(45);
  const auto fam = naive::random_family(4, 4, 0, 2, rng);
  if (diff_pq(fam[0], fam[1]).p() > 1) {
    CHECK_THROWS_AS(hybrid_instances_two_side(fam[0], fam[1]), NotOneN);
  }
}

TEST_CASE("compressions generate exactly the intersection") {
  std::mt19937 rng(46);
  for (int t = 0; t < 120; ++t) {
    const int p = t % 2;
    const auto fam = naive::random_family(5, p, 1 + t % 3, 3, rng);
    const RotationPoset host = build_rotation_poset(fam[0]);
    std::vector<Instance> members;
    if (p == 0) {
      for (std::size_t j = 1; j < fam.size(); ++j) {
        for (auto& h : hybrid_instances_one_side(fam[0], fam[j])) members.push_back(h);
      }
    } else {
      members.assign(fam.begin() + 1, fam.end());
    }
    const MetaRotationPoset meta = compress_by(host, members);
    const auto want = naive::common_stable(fam);
    CHECK(meta.empty() == want.empty());
    CHECK(generated(meta) == want);
    CHECK(meta.enumerate().size() == want.size());
    for (const auto& e : meta.added_edges()) {
      const bool implied = e.before < host.rotation_count() && e.after < host.rotation_count() &&
                           host.order().precedes(e.before, e.after);
      CHECK_FALSE(implied);
    }
  }
}

TEST_CASE("compression of a non-sublattice is refused") {
  const Fixture fx = load_fixture(default_fixture_dir(), "4");
  CHECK_THROWS_AS(compression_from_membership(build_rotation_poset(fx.a),
                                              [&](const Matching& m) { return is_stable(fx.b, m); }),
                  NotASublattice);
}

TEST_CASE("union of compressions over different hosts is refused") {
  std::mt19937 rng(47);
  const RotationPoset h1 = build_rotation_poset(naive::random_instance(4, rng));
  const RotationPoset h2 = build_rotation_poset(naive::random_instance(4, rng));
  std::vector<MetaRotationPoset> parts{MetaRotationPoset(h1, {}), MetaRotationPoset(h2, {})};
  if (!(h1.instance() == h2.instance())) CHECK_THROWS(union_edge_sets(h1, parts));
}

TEST_CASE("poset export") {
  std::mt19937 rng(48);
  for (int t = 0; t < 100; ++t) {
    const Instance i = naive::random_instance(6, rng);
    const RotationPoset host = build_rotation_poset(i);
    if (host.rotation_count() < 2) continue;
    const std::string text = export_poset(host);
    CHECK(text.rfind("class 1: (", 0) == 0);
    const MetaRotationPoset whole(host, {});
    CHECK(export_poset(whole).find("always:") != std::string::npos);
    CHECK(whole.classes().size() == static_cast<std::size_t>(host.rotation_count()));
    const MetaRotationPoset none(host, {{whole.sink(), whole.source()}});
    CHECK(none.empty());
    CHECK(none.enumerate().empty());
    CHECK(export_poset(none).find("empty") != std::string::npos);
    return;
  }
  FAIL("no instance with two rotations");
}
