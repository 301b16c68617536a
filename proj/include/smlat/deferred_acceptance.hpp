#pragma once

#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

// Outcome of a deferred-acceptance run together with every rejection issued,
// as (worker, firm) pairs regardless of which side proposed.
struct DaTrace {
  Matching matching;
  std::vector<Pair> rejections;
  int rounds = 0;
};

// Synchronous rounds: every unmatched proposer proposes to its best uncrossed
// option, each receiver keeps its best offer and rejects the rest. Proposers
// are scanned in ascending id order so traces are reproducible.
DaTrace worker_da_traced(const Instance& instance);
DaTrace firm_da_traced(const Instance& instance);

// Worker-optimal stable matching (M-top).
Matching worker_da(const Instance& instance);
// Firm-optimal stable matching (M-bottom).
Matching firm_da(const Instance& instance);

}  // namespace smlat
