#include "smlat/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "smlat/error.hpp"

namespace smlat {

int oracle_cap() {
  if (const char* env = std::getenv("SMLAT_ORACLE_CAP")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return kDefaultOracleCap;
}

namespace {

template <typename Keep>
std::vector<Matching> scan_permutations(int n, int cap, Keep keep) {
  if (n > cap) {
    throw CapExceeded("brute force limited to n <= " + std::to_string(cap) + ", got n = " +
                      std::to_string(n));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matching> out;
  do {
    Matching m(perm);
    if (keep(m)) out.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));
  // next_permutation visits in lexicographic order, so `out` is sorted.
  return out;
}

}  // namespace

std::vector<Matching> enumerate_stable_bruteforce(const Instance& instance, int cap) {
  return scan_permutations(instance.size(), cap,
                           [&](const Matching& m) { return is_stable(instance, m); });
}

std::vector<Matching> stable_intersection_bruteforce(std::span<const Instance> family, int cap) {
  if (family.empty()) return {};
  const int n = family.front().size();
  for (const auto& i : family) {
    if (i.size() != n) throw SizeMismatch("family members differ in size");
  }
  return scan_permutations(n, cap, [&](const Matching& m) {
    return std::all_of(family.begin(), family.end(),
                       [&](const Instance& i) { return is_stable(i, m); });
  });
}

std::optional<Matching> worker_optimal_in(const Instance& instance, std::span<const Matching> set) {
  for (const auto& candidate : set) {
    if (std::all_of(set.begin(), set.end(),
                    [&](const Matching& m) { return dominates(instance, candidate, m); })) {
      return candidate;
    }
  }
  return std::nullopt;
}

std::optional<Matching> firm_optimal_in(const Instance& instance, std::span<const Matching> set) {
  for (const auto& candidate : set) {
    if (std::all_of(set.begin(), set.end(),
                    [&](const Matching& m) { return dominates(instance, m, candidate); })) {
      return candidate;
    }
  }
  return std::nullopt;
}

bool contains(std::span<const Matching> sorted_set, const Matching& m) {
  return std::binary_search(sorted_set.begin(), sorted_set.end(), m);
}

}  // namespace smlat
