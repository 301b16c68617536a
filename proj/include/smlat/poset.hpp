#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace smlat {

// Finite strict partial order on 0..size-1, stored as its transitive closure.
class Poset {
 public:
  Poset() = default;
  // relations are (before, after) pairs; the closure must be acyclic or
  // std::invalid_argument is thrown.
  Poset(int size, std::span<const std::pair<int, int>> relations);

  int size() const noexcept { return size_; }
  bool precedes(int a, int b) const { return less_[a * size_ + b] != 0; }
  const std::vector<int>& predecessors(int x) const { return preds_[x]; }
  const std::vector<int>& successors(int x) const { return succs_[x]; }
  // Covering pairs (before, after) of the order.
  std::vector<std::pair<int, int>> hasse_edges() const;
  bool is_closed(const std::vector<bool>& members) const;

 private:
  int size_ = 0;
  std::vector<char> less_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
};

// Streams every closed (predecessor-closed) set exactly once. Branches on a
// minimal undecided element, excluding it (with all its successors) first and
// then including it; every branch ends in an output, so the work between two
// outputs is polynomial in the poset size. The first set is the empty one.
class ClosedSetEnumerator {
 public:
  explicit ClosedSetEnumerator(const Poset& poset);

  std::optional<std::vector<bool>> next();

 private:
  enum State : char { undecided, in, out };
  struct Frame {
    int element;
    bool including;
    std::vector<int> excluded;
  };

  void descend();
  std::vector<bool> snapshot() const;

  const Poset* poset_;
  std::vector<State> state_;
  std::vector<Frame> stack_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<std::vector<bool>> all_closed_sets(const Poset& poset);

}  // namespace smlat
