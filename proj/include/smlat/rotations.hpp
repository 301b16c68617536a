#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smlat/instance.hpp"
#include "smlat/poset.hpp"

namespace smlat {

// Cyclic sequence (w_0, f_0), ..., (w_{r-1}, f_{r-1}) of matched pairs.
// Eliminating it moves each w_i to f_{i+1} (indices mod r).
struct Rotation {
  std::vector<Pair> pairs;

  int size() const noexcept { return static_cast<int>(pairs.size()); }
  int firm_after(int i) const { return pairs[(i + 1) % size()].firm; }
  bool operator==(const Rotation&) const = default;
};

// "(1 a, 2 b)" style, 1-based, with firms as numbers.
std::string format_rotation(const Rotation& rotation);

// First firm below M(w) in w's list that prefers w to its partner, if any.
std::optional<int> s_of(const Instance& instance, const Matching& m, int worker);

// Rotations exposed in a stable matching, each starting at its smallest
// worker, ordered by that worker.
std::vector<Rotation> exposed_rotations(const Instance& instance, const Matching& m);

// Throws NotExposed if rotation is not exposed in m.
Matching eliminate(const Instance& instance, const Matching& m, const Rotation& rotation);

class RotationPoset {
 public:
  RotationPoset(Instance instance, Matching top, Matching bottom, std::vector<Rotation> rotations,
                Poset order);

  const Instance& instance() const noexcept { return instance_; }
  const Matching& top() const noexcept { return top_; }
  const Matching& bottom() const noexcept { return bottom_; }
  // Indexed along one maximal elimination chain from top, which is a linear
  // extension of the order.
  const std::vector<Rotation>& rotations() const noexcept { return rotations_; }
  int rotation_count() const noexcept { return static_cast<int>(rotations_.size()); }
  const Poset& order() const noexcept { return order_; }

  // Stable matching reached by eliminating a closed set of rotations.
  // Throws ValidationError if the set is not closed.
  Matching matching_of(const std::vector<bool>& closed) const;

 private:
  Instance instance_;
  Matching top_;
  Matching bottom_;
  std::vector<Rotation> rotations_;
  Poset order_;
};

RotationPoset build_rotation_poset(const Instance& instance);

// Streams all stable matchings of the poset's instance, one per closed set,
// starting with the worker-optimal one.
class LatticeEnumerator {
 public:
  explicit LatticeEnumerator(const RotationPoset& poset);
  std::optional<Matching> next();

 private:
  const RotationPoset* poset_;
  ClosedSetEnumerator sets_;
};

std::vector<Matching> enumerate_lattice(const RotationPoset& poset);

}  // namespace smlat
