#pragma once

// Sublattice checks, hybrid decompositions of nearby pairs, and compressions
// of a rotation poset that generate a chosen sublattice.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smlat/instance.hpp"
#include "smlat/poset.hpp"
#include "smlat/rotations.hpp"

namespace smlat {

enum class LatticeOp { meet, join };

const char* to_string(LatticeOp op);

// first op second = result, and result is missing from the tested set.
struct LatticeWitness {
  Matching first;
  Matching second;
  Matching result;
  LatticeOp op;
};

// S must consist of matchings stable under `instance`.
std::optional<LatticeWitness> check_sublattice(const Instance& instance, std::span<const Matching> s);
std::optional<LatticeWitness> check_semisublattice(const Instance& instance,
                                                   std::span<const Matching> s, LatticeOp side);

// B_i: A with firm f_i's list taken from B, one per changed firm, in firm
// order. Throws NotZeroN unless no worker list changed.
std::vector<Instance> hybrid_instances_one_side(const Instance& a, const Instance& b);

// B_{w,f_i}: A with the changed worker's list and firm f_i's list taken from
// B. With no changed firm the single hybrid is B itself. Throws NotOneN when
// more than one worker list changed.
std::vector<Instance> hybrid_instances_two_side(const Instance& a, const Instance& b);

// Requirement between nodes of the extended rotation set: `before` must be
// eliminated whenever `after` is. Rotations are 0..R-1, the virtual source is
// R (always eliminated) and the sink is R+1 (never eliminated).
struct Precedence {
  int before;
  int after;
  auto operator<=>(const Precedence&) const = default;
};

class MetaRotationPoset {
 public:
  // Compression of `host` by the extra requirements `added`.
  MetaRotationPoset(const RotationPoset& host, std::vector<Precedence> added);

  const RotationPoset& host() const noexcept { return host_; }
  int source() const noexcept { return host_.rotation_count(); }
  int sink() const noexcept { return host_.rotation_count() + 1; }
  // The generated set is empty (the source is forced below the sink).
  bool empty() const noexcept { return empty_; }
  const std::vector<std::vector<int>>& classes() const noexcept { return classes_; }
  const std::vector<int>& always_in() const noexcept { return always_in_; }
  const std::vector<int>& never_in() const noexcept { return never_in_; }
  const Poset& order() const noexcept { return order_; }
  const std::vector<Precedence>& added_edges() const noexcept { return added_; }

  // Matching for a closed set of classes.
  Matching matching_of(const std::vector<bool>& class_set) const;
  // Every generated matching, one per closed set of classes; empty when
  // empty() holds.
  std::vector<Matching> enumerate() const;

 private:
  RotationPoset host_;
  std::vector<Precedence> added_;
  bool empty_ = false;
  std::vector<std::vector<int>> classes_;
  std::vector<int> always_in_;
  std::vector<int> never_in_;
  Poset order_;
};

// Enumerates the host lattice, collects the member closed sets and groups
// rotations by their membership pattern. Throws NotASublattice when the
// member closed sets are not closed under union and intersection.
MetaRotationPoset compression_from_membership(const RotationPoset& host,
                                              const std::function<bool(const Matching&)>& member);

// Compression by the union of the added edge sets; generates the intersection
// of the sublattices.
MetaRotationPoset union_edge_sets(const RotationPoset& host,
                                  std::span<const MetaRotationPoset> compressions);

// `class <k>: <cycles>` lines then `edge <k1> <k2>` Hasse lines, 1-based.
std::string export_poset(const RotationPoset& poset);
// As above, followed by `always: ...`, `never: ...` and `empty` lines.
std::string export_poset(const MetaRotationPoset& poset);

}  // namespace smlat
