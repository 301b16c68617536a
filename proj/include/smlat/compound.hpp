#pragma once

// One-sided changes, (0,k): instances that share every worker list but may
// differ in any firm lists. Matchings stable under all of them are exactly
// the strongly stable matchings of the compound instance, where each firm's
// order is the intersection of its orders across the family.

#include <optional>
#include <span>
#include <vector>

#include "smlat/instance.hpp"
#include "smlat/sublattice.hpp"

namespace smlat {

class CompoundInstance {
 public:
  CompoundInstance(std::vector<PreferenceList> worker_prefs, std::vector<std::vector<char>> firm_better);

  int size() const noexcept { return n_; }
  const PreferenceList& worker_list(int w) const { return worker_prefs_[w]; }
  int worker_rank(int w, int f) const { return worker_rank_[w * n_ + f]; }

  // a is strictly preferred to b by f in every source instance.
  bool firm_prefers(int f, int a, int b) const { return firm_better_[f][a * n_ + b] != 0; }
  // Distinct workers that f does not rank consistently.
  bool firm_indifferent(int f, int a, int b) const {
    return a != b && !firm_prefers(f, a, b) && !firm_prefers(f, b, a);
  }
  bool is_total() const;

 private:
  int n_;
  std::vector<PreferenceList> worker_prefs_;
  std::vector<int> worker_rank_;
  std::vector<std::vector<char>> firm_better_;  // per firm, n*n dominance table
};

// Throws WorkerListsDiffer unless the family is (0,k); SizeMismatch on
// differing n; ValidationError on an empty family.
CompoundInstance build_compound(std::span<const Instance> instances);

// (w,f) not in M with f above M(w) for w, and f not strictly preferring M(f)
// to w.
std::vector<Pair> strong_blocking_pairs(const CompoundInstance& x, const Matching& m);

struct CompoundTrace {
  std::optional<Matching> matching;  // nullopt: no strongly stable matching
  std::vector<Pair> rejections;
  int rounds = 0;
};

// Workers propose; a firm tentatively accepts only a proposer it strictly
// prefers to every proposal it has ever received, otherwise it holds no one.
CompoundTrace worker_optimal_compound_traced(const CompoundInstance& x);
std::optional<Matching> worker_optimal_compound(const CompoundInstance& x);

// Firms propose to all maximal uncrossed workers of their partial order;
// workers keep their best offer. Ends after a round with no rejections in
// which every firm is held.
CompoundTrace firm_optimal_compound_traced(const CompoundInstance& x);
std::optional<Matching> firm_optimal_compound(const CompoundInstance& x);

// Brute-force closure check of the stable intersection under each member's
// meet and join. Returns the first violation, if any.
std::optional<LatticeWitness> intersection_is_sublattice_check(std::span<const Instance> instances);

}  // namespace smlat
