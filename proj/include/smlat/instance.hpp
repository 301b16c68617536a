#pragma once

// Instances, matchings and the lattice operations on stable matchings.
//
// Agents are identified by dense 0-based indices internally; the text format
// and all human-readable output use 1-based ids. Workers and firms live in
// separate index spaces.

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smlat {

// Most preferred first; always a permutation of 0..n-1.
using PreferenceList = std::vector<int>;

struct Pair {
  int worker = 0;
  int firm = 0;
  auto operator<=>(const Pair&) const = default;
};

class Instance {
 public:
  // Throws ValidationError unless n >= 1 and all 2n lists are permutations.
  Instance(std::vector<PreferenceList> worker_prefs,
           std::vector<PreferenceList> firm_prefs, std::string name = {});

  int size() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const PreferenceList& worker_list(int w) const { return worker_prefs_[w]; }
  const PreferenceList& firm_list(int f) const { return firm_prefs_[f]; }
  const std::vector<PreferenceList>& worker_lists() const { return worker_prefs_; }
  const std::vector<PreferenceList>& firm_lists() const { return firm_prefs_; }

  // Position in the agent's list; 0 is the favourite.
  int worker_rank(int w, int f) const { return worker_rank_[w * n_ + f]; }
  int firm_rank(int f, int w) const { return firm_rank_[f * n_ + w]; }

  bool worker_prefers(int w, int a, int b) const {
    return worker_rank(w, a) < worker_rank(w, b);
  }
  bool firm_prefers(int f, int a, int b) const {
    return firm_rank(f, a) < firm_rank(f, b);
  }

  Instance with_worker_list(int w, PreferenceList list) const;
  Instance with_firm_list(int f, PreferenceList list) const;

  // Swaps the roles of workers and firms.
  Instance transposed() const;

  // Compares preferences only; names are labels.
  bool operator==(const Instance& other) const {
    return worker_prefs_ == other.worker_prefs_ && firm_prefs_ == other.firm_prefs_;
  }

 private:
  int n_;
  std::vector<PreferenceList> worker_prefs_;
  std::vector<PreferenceList> firm_prefs_;
  std::vector<int> worker_rank_;
  std::vector<int> firm_rank_;
  std::string name_;
};

// A perfect worker/firm bijection.
class Matching {
 public:
  Matching() = default;
  // firm_of_worker[w] is w's firm. Throws NotAMatching unless a bijection.
  explicit Matching(std::vector<int> firm_of_worker);

  static Matching identity(int n);

  int size() const noexcept { return static_cast<int>(firm_of_.size()); }
  int firm_of(int w) const { return firm_of_[w]; }
  int worker_of(int f) const { return worker_of_[f]; }
  const std::vector<int>& firms() const noexcept { return firm_of_; }
  bool contains(int w, int f) const { return firm_of_[w] == f; }
  std::vector<Pair> pairs() const;

  // The same matching seen from the firms' side (for transposed instances).
  Matching inverse() const { return Matching(worker_of_); }

  bool operator==(const Matching& other) const { return firm_of_ == other.firm_of_; }
  auto operator<=>(const Matching& other) const { return firm_of_ <=> other.firm_of_; }

 private:
  std::vector<int> firm_of_;
  std::vector<int> worker_of_;
};

struct PQDelta {
  std::vector<int> changed_workers;
  std::vector<int> changed_firms;
  int p() const noexcept { return static_cast<int>(changed_workers.size()); }
  int q() const noexcept { return static_cast<int>(changed_firms.size()); }
};

// Text format:
//   n <N>
//   w <i>: <f1> ... <fN>     (N lines, most preferred first)
//   f <j>: <w1> ... <wN>     (N lines)
// '#' starts a comment, blank lines are ignored, ids are 1-based.
Instance parse_instance(std::istream& in, std::string name = {});
Instance parse_instance_text(std::string_view text, std::string name = {});
Instance load_instance(const std::filesystem::path& path);
std::string serialize(const Instance& instance);

// "M: <f for w1> <f for w2> ..." with 1-based ids.
Matching parse_matching(std::string_view line);
std::string format_matching(const Matching& m);
// Letter style, e.g. "{1a,2b,3d,4c}". Firms beyond 'z' fall back to numbers.
std::string format_matching_letters(const Matching& m);

std::vector<Pair> blocking_pairs(const Instance& instance, const Matching& m);
bool is_stable(const Instance& instance, const Matching& m);

// Worker-wise better (meet) or worse (join) partner. Throws NotAMatching when
// the result is not a bijection, which happens only for unstable inputs.
Matching meet(const Instance& instance, const Matching& a, const Matching& b);
Matching join(const Instance& instance, const Matching& a, const Matching& b);

// Every worker weakly prefers its partner in `a` to its partner in `b`.
bool dominates(const Instance& instance, const Matching& a, const Matching& b);

// Agents whose lists differ as sequences. Throws SizeMismatch.
PQDelta diff_pq(const Instance& a, const Instance& b);
// Agents whose list differs between any member of the family and the first.
PQDelta diff_pq(std::span<const Instance> family);

}  // namespace smlat
