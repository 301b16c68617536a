#include "smlat/random.hpp"

#include <algorithm>
#include <numeric>

#include "smlat/error.hpp"

namespace smlat {

namespace {

PreferenceList random_list(int n, std::mt19937_64& rng) {
  PreferenceList list(n);
  std::iota(list.begin(), list.end(), 0);
  std::shuffle(list.begin(), list.end(), rng);
  return list;
}

std::vector<int> random_subset(int n, int size, std::mt19937_64& rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

Instance random_instance(int n, std::mt19937_64& rng) {
  std::vector<PreferenceList> workers, firms;
  for (int i = 0; i < n; ++i) workers.push_back(random_list(n, rng));
  for (int i = 0; i < n; ++i) firms.push_back(random_list(n, rng));
  return Instance(std::move(workers), std::move(firms));
}

std::vector<Instance> random_family(int n, int p, int q, int k, std::mt19937_64& rng) {
  if (p < 0 || q < 0 || p > n || q > n || k < 1) throw ValidationError("bad family shape");
  std::vector<Instance> family{random_instance(n, rng)};
  const auto workers = random_subset(n, p, rng);
  const auto firms = random_subset(n, q, rng);
  for (int i = 1; i < k; ++i) {
    Instance next = family.front();
    for (int w : workers) next = next.with_worker_list(w, random_list(n, rng));
    for (int f : firms) next = next.with_firm_list(f, random_list(n, rng));
    family.push_back(std::move(next));
  }
  for (int i = 0; i < k; ++i) family[i].set_name(i == 0 ? "A" : "B" + std::to_string(i));
  return family;
}

std::uint64_t trial_seed(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace smlat
