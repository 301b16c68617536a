#include "smlat/poset.hpp"

#include <stdexcept>

namespace smlat {

Poset::Poset(int size, std::span<const std::pair<int, int>> relations)
    : size_(size), less_(static_cast<std::size_t>(size) * size, 0), preds_(size), succs_(size) {
  for (const auto& [before, after] : relations) {
    if (before < 0 || before >= size || after < 0 || after >= size) {
      throw std::invalid_argument("poset relation out of range");
    }
    less_[before * size + after] = 1;
  }
  for (int k = 0; k < size; ++k) {
    for (int i = 0; i < size; ++i) {
      if (!less_[i * size + k]) continue;
      for (int j = 0; j < size; ++j) {
        if (less_[k * size + j]) less_[i * size + j] = 1;
      }
    }
  }
  for (int i = 0; i < size; ++i) {
    if (less_[i * size + i]) throw std::invalid_argument("poset relations contain a cycle");
    for (int j = 0; j < size; ++j) {
      if (less_[i * size + j]) {
        preds_[j].push_back(i);
        succs_[i].push_back(j);
      }
    }
  }
}

std::vector<std::pair<int, int>> Poset::hasse_edges() const {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < size_; ++a) {
    for (int b : succs_[a]) {
      bool covered = true;
      for (int c : succs_[a]) {
        if (c != b && precedes(c, b)) {
          covered = false;
          break;
        }
      }
      if (covered) edges.emplace_back(a, b);
    }
  }
  return edges;
}

bool Poset::is_closed(const std::vector<bool>& members) const {
  for (int x = 0; x < size_; ++x) {
    if (!members[x]) continue;
    for (int p : preds_[x]) {
      if (!members[p]) return false;
    }
  }
  return true;
}

ClosedSetEnumerator::ClosedSetEnumerator(const Poset& poset)
    : poset_(&poset), state_(poset.size(), undecided) {}

void ClosedSetEnumerator::descend() {
  for (;;) {
    int pick = -1;
    for (int x = 0; x < poset_->size() && pick == -1; ++x) {
      if (state_[x] != undecided) continue;
      bool minimal = true;
      for (int p : poset_->predecessors(x)) {
        if (state_[p] != in) {
          minimal = false;
          break;
        }
      }
      if (minimal) pick = x;
    }
    // Exclusion propagates upward, so with no minimal undecided element
    // nothing is undecided at all.
    if (pick == -1) return;
    Frame frame{pick, false, {pick}};
    state_[pick] = out;
    for (int s : poset_->successors(pick)) {
      if (state_[s] == undecided) {
        state_[s] = out;
        frame.excluded.push_back(s);
      }
    }
    stack_.push_back(std::move(frame));
  }
}

std::vector<bool> ClosedSetEnumerator::snapshot() const {
  std::vector<bool> set(state_.size());
  for (std::size_t i = 0; i < state_.size(); ++i) set[i] = state_[i] == in;
  return set;
}

std::optional<std::vector<bool>> ClosedSetEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    descend();
    return snapshot();
  }
  while (!stack_.empty()) {
    Frame& top = stack_.back();
    if (!top.including) {
      for (int x : top.excluded) state_[x] = undecided;
      top.excluded.clear();
      state_[top.element] = in;
      top.including = true;
      descend();
      return snapshot();
    }
    state_[top.element] = undecided;
    stack_.pop_back();
  }
  done_ = true;
  return std::nullopt;
}

std::vector<std::vector<bool>> all_closed_sets(const Poset& poset) {
  std::vector<std::vector<bool>> out;
  ClosedSetEnumerator it(poset);
  while (auto set = it.next()) out.push_back(std::move(*set));
  return out;
}

}  // namespace smlat
