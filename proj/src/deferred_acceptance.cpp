#include "smlat/deferred_acceptance.hpp"

#include <cassert>

namespace smlat {

namespace {

// Generic proposer-side DA. `proposer_list(p)` gives p's ranking of
// receivers; `receiver_rank(r, p)` ranks proposers for receiver r. Produces
// receiver_of[p].
template <typename ProposerList, typename ReceiverRank, typename OnReject>
std::vector<int> run_da(int n, ProposerList proposer_list, ReceiverRank receiver_rank,
                        OnReject on_reject, int& rounds) {
  std::vector<int> next(n, 0);      // index into proposer's list
  std::vector<int> held(n, -1);     // receiver -> proposer currently held
  std::vector<int> partner(n, -1);  // proposer -> receiver
  rounds = 0;
  bool rejected = true;
  while (rejected) {
    rejected = false;
    ++rounds;
    std::vector<int> best(n, -1);
    std::vector<std::vector<int>> offers(n);
    for (int p = 0; p < n; ++p) {
      if (partner[p] != -1) continue;
      assert(next[p] < n);  // complete lists: a proposer is never exhausted
      offers[proposer_list(p)[next[p]]].push_back(p);
    }
    for (int r = 0; r < n; ++r) {
      if (offers[r].empty()) continue;
      int keep = held[r];
      for (int p : offers[r]) {
        if (keep == -1 || receiver_rank(r, p) < receiver_rank(r, keep)) keep = p;
      }
      auto reject = [&](int p) {
        on_reject(p, r);
        partner[p] = -1;
        ++next[p];
        rejected = true;
      };
      if (held[r] != -1 && held[r] != keep) reject(held[r]);
      for (int p : offers[r]) {
        if (p != keep) reject(p);
      }
      held[r] = keep;
      partner[keep] = r;
    }
  }
  return partner;
}

}  // namespace

DaTrace worker_da_traced(const Instance& instance) {
  DaTrace trace;
  auto partner = run_da(
      instance.size(), [&](int w) -> const PreferenceList& { return instance.worker_list(w); },
      [&](int f, int w) { return instance.firm_rank(f, w); },
      [&](int w, int f) { trace.rejections.push_back({w, f}); }, trace.rounds);
  trace.matching = Matching(std::move(partner));
  return trace;
}

DaTrace firm_da_traced(const Instance& instance) {
  DaTrace trace;
  auto partner = run_da(
      instance.size(), [&](int f) -> const PreferenceList& { return instance.firm_list(f); },
      [&](int w, int f) { return instance.worker_rank(w, f); },
      [&](int f, int w) { trace.rejections.push_back({w, f}); }, trace.rounds);
  trace.matching = Matching(std::move(partner)).inverse();
  return trace;
}

Matching worker_da(const Instance& instance) { return worker_da_traced(instance).matching; }

Matching firm_da(const Instance& instance) { return firm_da_traced(instance).matching; }

}  // namespace smlat
