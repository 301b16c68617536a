#include <numeric>
#include <random>

#include "doctest.h"
#include "naive.hpp"
#include "smlat/compound.hpp"
#include "smlat/error.hpp"
#include "smlat/multiroom.hpp"

using namespace smlat;

namespace {

std::optional<std::vector<int>> firms_of(const std::optional<Matching>& m) {
  if (!m) return std::nullopt;
  return m->firms();
}

std::optional<std::vector<int>> firms_of(const MultiRoomOutcome& o) {
  REQUIRE(o.kind() != MultiRoomOutcome::Kind::no_idea);
  if (!o.is_matched()) return std::nullopt;
  return o.matching().firms();
}

}  // namespace

TEST_CASE("compound engines return the dominance extremes") {
  std::mt19937 rng(51);
  for (int t = 0; t < 300; ++t) {
    const auto fam = naive::random_family(5, 0, 1 + t % 5, 2 + t % 3, rng);
    const auto both = naive::common_stable(fam);
    const CompoundInstance x = build_compound(fam);
    CHECK(firms_of(worker_optimal_compound(x)) == naive::extreme(fam[0].worker_lists(), both, true));
    CHECK(firms_of(firm_optimal_compound(x)) == naive::extreme(fam[0].worker_lists(), both, false));
  }
}

TEST_CASE("strong stability in the compound instance equals common stability") {
  std::mt19937 rng(52);
  for (int t = 0; t < 40; ++t) {
    const auto fam = naive::random_family(5, 0, 2, 2, rng);
    const auto both = naive::common_stable(fam);
    const CompoundInstance x = build_compound(fam);
    std::vector<int> p(5);
    std::iota(p.begin(), p.end(), 0);
    do {
      CHECK(strong_blocking_pairs(x, Matching(p)).empty() == (both.count(p) == 1));
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST_CASE("compound instance of one source is total") {
  std::mt19937 rng(53);
  const Instance i = naive::random_instance(4, rng);
  const std::vector<Instance> one{i};
  const CompoundInstance x = build_compound(one);
  CHECK(x.is_total());
  for (int f = 0; f < 4; ++f) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) CHECK(x.firm_prefers(f, a, b) == (a != b && i.firm_prefers(f, a, b)));
    }
  }
}

TEST_CASE("compound input validation") {
  std::mt19937 rng(54);
  const auto fam = naive::random_family(4, 1, 0, 2, rng);
  if (!(fam[0] == fam[1])) CHECK_THROWS_AS(build_compound(fam), WorkerListsDiffer);
  const std::vector<Instance> mixed{naive::random_instance(3, rng), naive::random_instance(4, rng)};
  CHECK_THROWS_AS(build_compound(mixed), SizeMismatch);
  CHECK_THROWS_AS(build_compound(std::vector<Instance>{}), ValidationError);
}

TEST_CASE("compound rejections never remove a common stable pair") {
  std::mt19937 rng(55);
  for (int t = 0; t < 150; ++t) {
    const auto fam = naive::random_family(5, 0, 3, 2, rng);
    const auto both = naive::common_stable(fam);
    const CompoundInstance x = build_compound(fam);
    for (const auto& trace : {worker_optimal_compound_traced(x), firm_optimal_compound_traced(x)}) {
      for (const Pair& p : trace.rejections) {
        for (const auto& m : both) CHECK(m[p.worker] != p.firm);
      }
    }
  }
}

TEST_CASE("multiroom engines return the dominance extremes") {
  std::mt19937 rng(56);
  for (int t = 0; t < 400; ++t) {
    const int p = t % 3 == 0 ? 0 : 1;
    const auto fam = naive::random_family(5, p, t % 4, 2 + t % 2, rng);
    const auto both = naive::common_stable(fam);
    CHECK(firms_of(worker_optimal_multiroom(fam)) == naive::extreme(fam[0].worker_lists(), both, true));
    CHECK(firms_of(firm_optimal_multiroom(fam)) == naive::extreme(fam[0].worker_lists(), both, false));
  }
}

TEST_CASE("multiroom rejections never remove a common stable pair") {
  std::mt19937 rng(57);
  for (int t = 0; t < 200; ++t) {
    const auto fam = naive::random_family(5, 1, 3, 2, rng);
    const auto both = naive::common_stable(fam);
    for (const auto& trace : {worker_optimal_multiroom_traced(fam), firm_optimal_multiroom_traced(fam)}) {
      for (const Pair& p : trace.rejections) {
        for (const auto& m : both) CHECK(m[p.worker] != p.firm);
      }
    }
  }
}

TEST_CASE("single-room multiroom is deferred acceptance") {
  std::mt19937 rng(58);
  for (int t = 0; t < 50; ++t) {
    const std::vector<Instance> one{naive::random_instance(6, rng)};
    const auto s = naive::stable_set(one[0]);
    CHECK(worker_optimal_multiroom(one).matching().firms() == *naive::extreme(one[0].worker_lists(), s, true));
    CHECK(firm_optimal_multiroom(one).matching().firms() == *naive::extreme(one[0].worker_lists(), s, false));
  }
}

TEST_CASE("multiroom modes") {
  std::mt19937 rng(59);
  const auto fam = naive::random_family(5, 3, 3, 2, rng);
  if (diff_pq(fam).p() > 1) {
    CHECK_THROWS_AS(worker_optimal_multiroom(fam), NotOneN);
    CHECK_THROWS_AS(check_one_side_fixed(fam), NotOneN);
  }
  // Research mode never returns a matching outside the intersection.
  for (int t = 0; t < 200; ++t) {
    const auto wide = naive::random_family(5, 2, 2, 2, rng);
    const auto both = naive::common_stable(wide);
    for (const auto& o : {worker_optimal_multiroom(wide, MultiRoomMode::research),
                          firm_optimal_multiroom(wide, MultiRoomMode::research)}) {
      if (o.is_matched()) CHECK(both.count(o.matching().firms()) == 1);
      if (o.kind() == MultiRoomOutcome::Kind::no_match) CHECK(both.empty());
      if (o.kind() == MultiRoomOutcome::Kind::no_idea) CHECK(o.rooms().size() == 2);
    }
  }
  CHECK(std::string(to_string(MultiRoomOutcome::Kind::no_idea)) == "no-idea");
  CHECK_THROWS(MultiRoomOutcome::no_match().matching());
}

TEST_CASE("meet and join agree across a (1,k) family on common stable matchings") {
  std::mt19937 rng(60);
  for (int t = 0; t < 150; ++t) {
    const auto fam = naive::random_family(5, 1, 2, 3, rng);
    const auto both = naive::common_stable(fam);
    for (const auto& a : both) {
      for (const auto& b : both) CHECK(verify_join_meet_agree(fam, Matching(a), Matching(b)));
    }
  }
}
