#include "smlat/multiroom.hpp"

#include <algorithm>

#include "smlat/error.hpp"

namespace smlat {

MultiRoomOutcome MultiRoomOutcome::matched(Matching m) {
  MultiRoomOutcome out;
  out.kind_ = Kind::matched;
  out.rooms_.push_back(std::move(m));
  return out;
}

MultiRoomOutcome MultiRoomOutcome::no_match() { return MultiRoomOutcome{}; }

MultiRoomOutcome MultiRoomOutcome::no_idea(std::vector<Matching> rooms) {
  MultiRoomOutcome out;
  out.kind_ = Kind::no_idea;
  out.rooms_ = std::move(rooms);
  return out;
}

const Matching& MultiRoomOutcome::matching() const {
  if (kind_ != Kind::matched) throw Error("multiroom outcome carries no matching");
  return rooms_.front();
}

const char* to_string(MultiRoomOutcome::Kind kind) {
  switch (kind) {
    case MultiRoomOutcome::Kind::matched:
      return "matched";
    case MultiRoomOutcome::Kind::no_match:
      return "no-match";
    case MultiRoomOutcome::Kind::no_idea:
      return "no-idea";
  }
  return "?";
}

PQDelta check_one_side_fixed(std::span<const Instance> instances) {
  if (instances.size() < 2) throw ValidationError("need at least two instances");
  PQDelta delta = diff_pq(instances);
  if (delta.p() > 1) {
    throw NotOneN(std::to_string(delta.p()) + " workers change their lists; at most one may");
  }
  return delta;
}

namespace {

void validate_family(std::span<const Instance> instances, MultiRoomMode mode) {
  if (instances.empty()) throw ValidationError("need at least one instance");
  if (mode == MultiRoomMode::checked && instances.size() >= 2) {
    check_one_side_fixed(instances);
  } else {
    diff_pq(instances);  // size check only
  }
}

bool all_equal(const std::vector<Matching>& rooms) {
  return std::all_of(rooms.begin(), rooms.end(), [&](const Matching& m) { return m == rooms.front(); });
}

}  // namespace

MultiRoomTrace worker_optimal_multiroom_traced(std::span<const Instance> instances, MultiRoomMode mode) {
  validate_family(instances, mode);
  const int n = instances.front().size();
  const int k = static_cast<int>(instances.size());
  MultiRoomTrace trace;
  // Crossed-off sets are shared across rooms.
  std::vector<std::vector<char>> crossed(n, std::vector<char>(n, 0));
  std::vector<int> remaining(n, n);
  // held[room][f] = worker accepted by f in that room after the last round.
  std::vector<std::vector<int>> held(k, std::vector<int>(n, -1));

  for (;;) {
    ++trace.rounds;
    std::vector<Pair> fresh;
    for (int r = 0; r < k; ++r) {
      const Instance& inst = instances[r];
      std::vector<std::vector<int>> offers(n);
      for (int w = 0; w < n; ++w) {
        for (int f : inst.worker_list(w)) {
          if (!crossed[w][f]) {
            offers[f].push_back(w);
            break;
          }
        }
      }
      for (int f = 0; f < n; ++f) {
        held[r][f] = -1;
        if (offers[f].empty()) continue;
        const int keep = *std::min_element(offers[f].begin(), offers[f].end(), [&](int a, int b) {
          return inst.firm_rank(f, a) < inst.firm_rank(f, b);
        });
        held[r][f] = keep;
        for (int w : offers[f]) {
          if (w != keep) fresh.push_back({w, f});
        }
      }
    }
    // Synchronise: a rejection in any room crosses the firm off everywhere.
    for (const Pair& p : fresh) {
      if (crossed[p.worker][p.firm]) continue;
      crossed[p.worker][p.firm] = 1;
      --remaining[p.worker];
      trace.rejections.push_back(p);
    }
    if (std::any_of(remaining.begin(), remaining.end(), [](int c) { return c == 0; })) {
      trace.outcome = MultiRoomOutcome::no_match();
      return trace;
    }
    if (!fresh.empty()) continue;

    std::vector<Matching> rooms;
    for (int r = 0; r < k; ++r) {
      std::vector<int> firm_of(n, -1);
      for (int f = 0; f < n; ++f) firm_of[held[r][f]] = f;
      rooms.emplace_back(std::move(firm_of));
    }
    if (!all_equal(rooms)) {
      trace.outcome = MultiRoomOutcome::no_idea(std::move(rooms));
      return trace;
    }
    // Certificate. If (w,f) blocks the common matching under some member,
    // f's current partner cannot be its partner in any common stable matching.
    const Matching& mu = rooms.front();
    bool repaired = false;
    for (const Instance& inst : instances) {
      for (const Pair& p : blocking_pairs(inst, mu)) {
        const int holder = mu.worker_of(p.firm);
        if (crossed[holder][p.firm]) continue;
        crossed[holder][p.firm] = 1;
        --remaining[holder];
        trace.rejections.push_back({holder, p.firm});
        repaired = true;
      }
    }
    if (!repaired) {
      trace.outcome = MultiRoomOutcome::matched(mu);
      return trace;
    }
    if (std::any_of(remaining.begin(), remaining.end(), [](int c) { return c == 0; })) {
      trace.outcome = MultiRoomOutcome::no_match();
      return trace;
    }
  }
}

MultiRoomOutcome worker_optimal_multiroom(std::span<const Instance> instances, MultiRoomMode mode) {
  return worker_optimal_multiroom_traced(instances, mode).outcome;
}

MultiRoomTrace firm_optimal_multiroom_traced(std::span<const Instance> instances, MultiRoomMode mode) {
  validate_family(instances, mode);
  const int n = instances.front().size();
  const int k = static_cast<int>(instances.size());
  MultiRoomTrace trace;
  // crossed[f][w]: w has rejected f in some room (shared by all rooms).
  std::vector<std::vector<char>> crossed(n, std::vector<char>(n, 0));
  std::vector<int> remaining(n, n);
  std::vector<std::vector<int>> held(k, std::vector<int>(n, -1));  // room, worker -> firm

  for (;;) {
    ++trace.rounds;
    std::vector<Pair> fresh;
    for (int r = 0; r < k; ++r) {
      const Instance& inst = instances[r];
      std::vector<std::vector<int>> offers(n);
      for (int f = 0; f < n; ++f) {
        for (int w : inst.firm_list(f)) {
          if (!crossed[f][w]) {
            offers[w].push_back(f);
            break;
          }
        }
      }
      for (int w = 0; w < n; ++w) {
        held[r][w] = -1;
        if (offers[w].empty()) continue;
        const int keep = *std::min_element(offers[w].begin(), offers[w].end(), [&](int a, int b) {
          return inst.worker_rank(w, a) < inst.worker_rank(w, b);
        });
        held[r][w] = keep;
        for (int f : offers[w]) {
          if (f != keep) fresh.push_back({w, f});
        }
        // Preemptive rejections: every firm strictly below the current offer.
        const auto& list = inst.worker_list(w);
        for (int pos = inst.worker_rank(w, keep) + 1; pos < n; ++pos) {
          if (!crossed[list[pos]][w]) fresh.push_back({w, list[pos]});
        }
      }
    }
    bool progress = false;
    for (const Pair& p : fresh) {
      if (crossed[p.firm][p.worker]) continue;
      crossed[p.firm][p.worker] = 1;
      --remaining[p.firm];
      trace.rejections.push_back(p);
      progress = true;
    }
    if (std::any_of(remaining.begin(), remaining.end(), [](int c) { return c == 0; })) {
      trace.outcome = MultiRoomOutcome::no_match();
      return trace;
    }
    if (progress) continue;

    std::vector<Matching> rooms;
    for (int r = 0; r < k; ++r) rooms.emplace_back(held[r]);
    if (!all_equal(rooms)) {
      trace.outcome = MultiRoomOutcome::no_idea(std::move(rooms));
      return trace;
    }
    // Mirror of the worker-side certificate: a blocking worker cannot keep
    // its current firm in any common stable matching.
    const Matching& mu = rooms.front();
    bool repaired = false;
    for (const Instance& inst : instances) {
      for (const Pair& p : blocking_pairs(inst, mu)) {
        const int holder = mu.firm_of(p.worker);
        if (crossed[holder][p.worker]) continue;
        crossed[holder][p.worker] = 1;
        --remaining[holder];
        trace.rejections.push_back({p.worker, holder});
        repaired = true;
      }
    }
    if (!repaired) {
      trace.outcome = MultiRoomOutcome::matched(mu);
      return trace;
    }
    if (std::any_of(remaining.begin(), remaining.end(), [](int c) { return c == 0; })) {
      trace.outcome = MultiRoomOutcome::no_match();
      return trace;
    }
  }
}

MultiRoomOutcome firm_optimal_multiroom(std::span<const Instance> instances, MultiRoomMode mode) {
  return firm_optimal_multiroom_traced(instances, mode).outcome;
}

bool verify_join_meet_agree(std::span<const Instance> instances, const Matching& m1, const Matching& m2) {
  if (instances.empty()) return true;
  const Matching base_meet = meet(instances.front(), m1, m2);
  const Matching base_join = join(instances.front(), m1, m2);
  return std::all_of(instances.begin(), instances.end(), [&](const Instance& i) {
    return meet(i, m1, m2) == base_meet && join(i, m1, m2) == base_join;
  });
}

}  // namespace smlat
