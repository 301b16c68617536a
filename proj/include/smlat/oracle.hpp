#pragma once

// Brute-force verification oracle: enumerates all n! perfect matchings.
// Independent of every engine in the library; used by tests, the fuzz
// harness and the compression construction.

#include <optional>
#include <span>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

inline constexpr int kDefaultOracleCap = 8;

// Reads SMLAT_ORACLE_CAP, falling back to kDefaultOracleCap.
int oracle_cap();

// All matchings stable under `instance`, sorted. Throws CapExceeded when
// n exceeds `cap`.
std::vector<Matching> enumerate_stable_bruteforce(const Instance& instance, int cap = oracle_cap());

// Matchings stable under every member of the family, sorted.
std::vector<Matching> stable_intersection_bruteforce(std::span<const Instance> family,
                                                     int cap = oracle_cap());

// Element of `set` that every worker weakly prefers (under `instance`) to all
// others, if one exists.
std::optional<Matching> worker_optimal_in(const Instance& instance, std::span<const Matching> set);
std::optional<Matching> firm_optimal_in(const Instance& instance, std::span<const Matching> set);

bool contains(std::span<const Matching> sorted_set, const Matching& m);

}  // namespace smlat
