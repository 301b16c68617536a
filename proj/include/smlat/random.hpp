#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

// Independent uniform permutations for every agent.
Instance random_instance(int n, std::mt19937_64& rng);

// A random base instance followed by k-1 variants in which the same p workers
// and q firms (chosen once per family) receive fresh random lists. A fresh
// list may coincide with the old one, so p and q are upper bounds.
std::vector<Instance> random_family(int n, int p, int q, int k, std::mt19937_64& rng);

// Seed for trial `index` of a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, int index);

}  // namespace smlat
