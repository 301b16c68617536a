#pragma once

// Two-sided changes, (1,k): at most one worker's list varies across the
// family. Deferred acceptance runs in one "room" per instance; rejections in
// any room are shared by every room.

#include <optional>
#include <span>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

enum class MultiRoomMode {
  checked,   // requires a (1,k) family, throws NotOneN otherwise
  research,  // accepts any same-size family; NoIdea may genuinely occur
};

class MultiRoomOutcome {
 public:
  enum class Kind { matched, no_match, no_idea };

  static MultiRoomOutcome matched(Matching m);
  static MultiRoomOutcome no_match();
  static MultiRoomOutcome no_idea(std::vector<Matching> rooms);

  Kind kind() const noexcept { return kind_; }
  bool is_matched() const noexcept { return kind_ == Kind::matched; }
  // Valid only when matched.
  const Matching& matching() const;
  // Final per-room matchings; filled for matched and no_idea outcomes.
  const std::vector<Matching>& rooms() const noexcept { return rooms_; }

 private:
  Kind kind_ = Kind::no_match;
  std::vector<Matching> rooms_;
};

const char* to_string(MultiRoomOutcome::Kind kind);

struct MultiRoomTrace {
  MultiRoomOutcome outcome = MultiRoomOutcome::no_match();
  std::vector<Pair> rejections;  // (worker, firm), deduplicated, in issue order
  int rounds = 0;
};

// Requires >= 2 instances. Throws NotOneN when more than one worker list
// varies.
PQDelta check_one_side_fixed(std::span<const Instance> instances);

// When a round produces no rejections and all rooms agree, the common
// matching is checked for blocking pairs under every member. Each blocking
// pair yields one more sound rejection and the rounds resume. Disagreeing
// rooms give NoIdea.
MultiRoomTrace worker_optimal_multiroom_traced(std::span<const Instance> instances,
                                               MultiRoomMode mode = MultiRoomMode::checked);
MultiRoomOutcome worker_optimal_multiroom(std::span<const Instance> instances,
                                          MultiRoomMode mode = MultiRoomMode::checked);

// Firms propose. After accepting its best offer in a room, a worker also
// rejects, in that room, every firm it ranks strictly below that offer,
// including firms that have not proposed yet.
MultiRoomTrace firm_optimal_multiroom_traced(std::span<const Instance> instances,
                                             MultiRoomMode mode = MultiRoomMode::checked);
MultiRoomOutcome firm_optimal_multiroom(std::span<const Instance> instances,
                                        MultiRoomMode mode = MultiRoomMode::checked);

// True iff meet and join of m1, m2 coincide under every member.
bool verify_join_meet_agree(std::span<const Instance> instances, const Matching& m1,
                            const Matching& m2);

}  // namespace smlat
