#include "smlat/compound.hpp"

#include <algorithm>

#include "smlat/error.hpp"
#include "smlat/oracle.hpp"

namespace smlat {

CompoundInstance::CompoundInstance(std::vector<PreferenceList> worker_prefs,
                                   std::vector<std::vector<char>> firm_better)
    : n_(static_cast<int>(worker_prefs.size())),
      worker_prefs_(std::move(worker_prefs)),
      worker_rank_(static_cast<std::size_t>(n_) * n_),
      firm_better_(std::move(firm_better)) {
  for (int w = 0; w < n_; ++w) {
    for (int pos = 0; pos < n_; ++pos) worker_rank_[w * n_ + worker_prefs_[w][pos]] = pos;
  }
}

bool CompoundInstance::is_total() const {
  for (int f = 0; f < n_; ++f) {
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        if (firm_indifferent(f, a, b)) return false;
      }
    }
  }
  return true;
}

CompoundInstance build_compound(std::span<const Instance> instances) {
  if (instances.empty()) throw ValidationError("compound instance needs at least one source");
  const Instance& first = instances.front();
  const int n = first.size();
  for (const auto& i : instances) {
    if (i.size() != n) throw SizeMismatch("source instances differ in size");
    for (int w = 0; w < n; ++w) {
      if (i.worker_list(w) != first.worker_list(w)) {
        throw WorkerListsDiffer("worker " + std::to_string(w + 1) +
                                " has different lists across sources");
      }
    }
  }
  std::vector<std::vector<char>> better(n, std::vector<char>(static_cast<std::size_t>(n) * n, 0));
  for (int f = 0; f < n; ++f) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        better[f][a * n + b] = std::all_of(instances.begin(), instances.end(), [&](const Instance& i) {
          return i.firm_prefers(f, a, b);
        });
      }
    }
  }
  return CompoundInstance(first.worker_lists(), std::move(better));
}

std::vector<Pair> strong_blocking_pairs(const CompoundInstance& x, const Matching& m) {
  if (m.size() != x.size()) throw SizeMismatch("matching size differs from instance");
  std::vector<Pair> out;
  for (int w = 0; w < x.size(); ++w) {
    for (int f : x.worker_list(w)) {
      if (f == m.firm_of(w)) break;
      if (!x.firm_prefers(f, m.worker_of(f), w)) out.push_back({w, f});
    }
  }
  return out;
}

CompoundTrace worker_optimal_compound_traced(const CompoundInstance& x) {
  const int n = x.size();
  CompoundTrace trace;
  std::vector<int> next(n, 0);
  std::vector<std::vector<int>> ever(n);

  for (;;) {
    ++trace.rounds;
    std::vector<std::vector<int>> offers(n);
    for (int w = 0; w < n; ++w) offers[x.worker_list(w)[next[w]]].push_back(w);

    std::vector<int> accepted_firm(n, -1);
    bool exhausted = false;
    for (int f = 0; f < n; ++f) {
      if (offers[f].empty()) continue;
      for (int w : offers[f]) {
        if (std::find(ever[f].begin(), ever[f].end(), w) == ever[f].end()) ever[f].push_back(w);
      }
      int keep = -1;
      for (int w : offers[f]) {
        const bool best_ever = std::all_of(ever[f].begin(), ever[f].end(), [&](int other) {
          return other == w || x.firm_prefers(f, w, other);
        });
        if (best_ever) {
          keep = w;
          break;
        }
      }
      for (int w : offers[f]) {
        if (w == keep) {
          accepted_firm[w] = f;
          continue;
        }
        trace.rejections.push_back({w, f});
        if (++next[w] == n) exhausted = true;
      }
    }
    if (exhausted) return trace;
    if (std::none_of(accepted_firm.begin(), accepted_firm.end(), [](int f) { return f == -1; })) {
      trace.matching = Matching(std::move(accepted_firm));
      return trace;
    }
  }
}

std::optional<Matching> worker_optimal_compound(const CompoundInstance& x) {
  return worker_optimal_compound_traced(x).matching;
}

CompoundTrace firm_optimal_compound_traced(const CompoundInstance& x) {
  const int n = x.size();
  CompoundTrace trace;
  // crossed[f][w]: f has crossed w off its DAG.
  std::vector<std::vector<char>> crossed(n, std::vector<char>(n, 0));

  for (;;) {
    ++trace.rounds;
    std::vector<std::vector<int>> offers(n);  // worker -> proposing firms
    for (int f = 0; f < n; ++f) {
      bool any = false;
      for (int w = 0; w < n; ++w) {
        if (crossed[f][w]) continue;
        any = true;
        bool maximal = true;
        for (int v = 0; v < n && maximal; ++v) {
          if (!crossed[f][v] && x.firm_prefers(f, v, w)) maximal = false;
        }
        if (maximal) offers[w].push_back(f);
      }
      if (!any) return trace;  // f was rejected by every worker
    }

    std::vector<int> accepted_by(n, -1);  // firm -> accepting worker
    std::vector<int> acceptances(n, 0);
    bool rejected = false;
    for (int w = 0; w < n; ++w) {
      if (offers[w].empty()) continue;
      const int keep = *std::min_element(offers[w].begin(), offers[w].end(), [&](int a, int b) {
        return x.worker_rank(w, a) < x.worker_rank(w, b);
      });
      for (int f : offers[w]) {
        if (f == keep) continue;
        crossed[f][w] = 1;
        trace.rejections.push_back({w, f});
        rejected = true;
      }
      accepted_by[keep] = w;
      ++acceptances[keep];
    }

    // Stop only on a quiet round. A rejection can expose a new maximal worker
    // that its firm has not proposed to yet.
    if (!rejected && std::all_of(acceptances.begin(), acceptances.end(), [](int c) { return c >= 1; })) {
      // n acceptances spread over n firms: each firm holds exactly one worker.
      std::vector<int> firm_of(n, -1);
      for (int f = 0; f < n; ++f) firm_of[accepted_by[f]] = f;
      trace.matching = Matching(std::move(firm_of));
      return trace;
    }
    if (!rejected) {
      throw InvariantViolation("firm-proposing compound round made no progress");
    }
  }
}

std::optional<Matching> firm_optimal_compound(const CompoundInstance& x) {
  return firm_optimal_compound_traced(x).matching;
}

std::optional<LatticeWitness> intersection_is_sublattice_check(std::span<const Instance> instances) {
  const auto common = stable_intersection_bruteforce(instances);
  for (const auto& i : instances) {
    if (auto witness = check_sublattice(i, common)) return witness;
  }
  return std::nullopt;
}

}  // namespace smlat
