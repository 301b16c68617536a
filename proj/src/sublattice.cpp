#include "smlat/sublattice.hpp"

#include <algorithm>
#include <sstream>

#include "smlat/error.hpp"

namespace smlat {

const char* to_string(LatticeOp op) { return op == LatticeOp::meet ? "meet" : "join"; }

namespace {

std::optional<LatticeWitness> closure_violation(const Instance& instance, std::span<const Matching> s,
                                                bool check_meet, bool check_join) {
  std::vector<Matching> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (check_join) {
        Matching r = join(instance, s[i], s[j]);
        if (!std::binary_search(sorted.begin(), sorted.end(), r)) {
          return LatticeWitness{s[i], s[j], std::move(r), LatticeOp::join};
        }
      }
      if (check_meet) {
        Matching r = meet(instance, s[i], s[j]);
        if (!std::binary_search(sorted.begin(), sorted.end(), r)) {
          return LatticeWitness{s[i], s[j], std::move(r), LatticeOp::meet};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<LatticeWitness> check_sublattice(const Instance& instance, std::span<const Matching> s) {
  return closure_violation(instance, s, true, true);
}

std::optional<LatticeWitness> check_semisublattice(const Instance& instance,
                                                   std::span<const Matching> s, LatticeOp side) {
  return closure_violation(instance, s, side == LatticeOp::meet, side == LatticeOp::join);
}

std::vector<Instance> hybrid_instances_one_side(const Instance& a, const Instance& b) {
  const PQDelta delta = diff_pq(a, b);
  if (delta.p() != 0) {
    throw NotZeroN(std::to_string(delta.p()) + " workers change their lists; none may");
  }
  std::vector<Instance> out;
  for (int f : delta.changed_firms) {
    out.push_back(a.with_firm_list(f, b.firm_list(f)));
    out.back().set_name("hybrid_f" + std::to_string(f + 1));
  }
  return out;
}

std::vector<Instance> hybrid_instances_two_side(const Instance& a, const Instance& b) {
  const PQDelta delta = diff_pq(a, b);
  if (delta.p() > 1) {
    throw NotOneN(std::to_string(delta.p()) + " workers change their lists; at most one may");
  }
  if (delta.changed_firms.empty()) return {b};
  Instance base = a;
  std::string prefix = "hybrid";
  if (delta.p() == 1) {
    const int w = delta.changed_workers.front();
    base = a.with_worker_list(w, b.worker_list(w));
    prefix += "_w" + std::to_string(w + 1);
  }
  std::vector<Instance> out;
  for (int f : delta.changed_firms) {
    out.push_back(base.with_firm_list(f, b.firm_list(f)));
    out.back().set_name(prefix + "_f" + std::to_string(f + 1));
  }
  return out;
}

MetaRotationPoset::MetaRotationPoset(const RotationPoset& host, std::vector<Precedence> added)
    : host_(host), added_(std::move(added)) {
  std::sort(added_.begin(), added_.end());
  added_.erase(std::unique(added_.begin(), added_.end()), added_.end());

  const int r = host_.rotation_count();
  const int nodes = r + 2;
  const int src = source();
  const int snk = sink();
  // reach[a][b]: a must be eliminated whenever b is (reflexive).
  std::vector<std::vector<char>> reach(nodes, std::vector<char>(nodes, 0));
  for (int x = 0; x < nodes; ++x) reach[x][x] = 1;
  for (int a = 0; a < r; ++a) {
    for (int b : host_.order().successors(a)) reach[a][b] = 1;
  }
  for (const Precedence& e : added_) {
    if (e.before < 0 || e.before >= nodes || e.after < 0 || e.after >= nodes) {
      throw ValidationError("added edge refers to an unknown node");
    }
    reach[e.before][e.after] = 1;
  }
  for (int k = 0; k < nodes; ++k) {
    for (int i = 0; i < nodes; ++i) {
      if (!reach[i][k]) continue;
      for (int j = 0; j < nodes; ++j) {
        if (reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  if (reach[snk][src]) {
    empty_ = true;
    order_ = Poset(0, {});
    return;
  }

  std::vector<int> class_of(r, -1);
  for (int x = 0; x < r; ++x) {
    if (reach[x][src]) {
      always_in_.push_back(x);
    } else if (reach[snk][x]) {
      never_in_.push_back(x);
    } else if (class_of[x] == -1) {
      class_of[x] = static_cast<int>(classes_.size());
      classes_.push_back({x});
      for (int y = x + 1; y < r; ++y) {
        if (reach[x][y] && reach[y][x]) {
          class_of[y] = class_of[x];
          classes_.back().push_back(y);
        }
      }
    }
  }
  std::vector<std::pair<int, int>> relations;
  const int c = static_cast<int>(classes_.size());
  for (int a = 0; a < c; ++a) {
    for (int b = 0; b < c; ++b) {
      if (a != b && reach[classes_[a].front()][classes_[b].front()]) relations.emplace_back(a, b);
    }
  }
  order_ = Poset(c, relations);
}

Matching MetaRotationPoset::matching_of(const std::vector<bool>& class_set) const {
  if (empty_) throw ValidationError("compression generates no matchings");
  if (class_set.size() != classes_.size() || !order_.is_closed(class_set)) {
    throw ValidationError("class set is not closed");
  }
  std::vector<bool> rotations(host_.rotation_count(), false);
  for (int x : always_in_) rotations[x] = true;
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    if (!class_set[k]) continue;
    for (int x : classes_[k]) rotations[x] = true;
  }
  return host_.matching_of(rotations);
}

std::vector<Matching> MetaRotationPoset::enumerate() const {
  std::vector<Matching> out;
  if (empty_) return out;
  ClosedSetEnumerator it(order_);
  while (auto set = it.next()) out.push_back(matching_of(*set));
  return out;
}

MetaRotationPoset compression_from_membership(const RotationPoset& host,
                                              const std::function<bool(const Matching&)>& member) {
  const int r = host.rotation_count();
  std::vector<std::vector<bool>> members;
  ClosedSetEnumerator it(host.order());
  while (auto set = it.next()) {
    if (member(host.matching_of(*set))) members.push_back(std::move(*set));
  }

  std::vector<std::vector<bool>> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      std::vector<bool> u(r), v(r);
      for (int x = 0; x < r; ++x) {
        u[x] = members[i][x] || members[j][x];
        v[x] = members[i][x] && members[j][x];
      }
      for (const auto* combined : {&u, &v}) {
        if (!std::binary_search(sorted.begin(), sorted.end(), *combined)) {
          throw NotASublattice(format_matching_letters(host.matching_of(members[i])) + " and " +
                               format_matching_letters(host.matching_of(members[j])) +
                               " are members but their " + (combined == &u ? "join " : "meet ") +
                               format_matching_letters(host.matching_of(*combined)) + " is not");
        }
      }
    }
  }

  // occ[x][i]: node x is eliminated in member i.
  const int nodes = r + 2;
  const int src = r;
  const int snk = r + 1;
  std::vector<std::vector<bool>> occ(nodes, std::vector<bool>(members.size(), false));
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (int x = 0; x < r; ++x) occ[x][i] = members[i][x];
    occ[src][i] = true;
  }
  auto subset = [&](int a, int b) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (occ[a][i] && !occ[b][i]) return false;
    }
    return true;
  };
  std::vector<Precedence> added;
  for (int a = 0; a < nodes; ++a) {
    if (a == src) continue;  // the source is always present
    for (int b = 0; b < nodes; ++b) {
      if (b == a || b == snk) continue;  // the sink is never present
      if (a < r && b < r && host.order().precedes(a, b)) continue;
      if (subset(b, a)) added.push_back({a, b});
    }
  }
  return MetaRotationPoset(host, std::move(added));
}

MetaRotationPoset union_edge_sets(const RotationPoset& host,
                                  std::span<const MetaRotationPoset> compressions) {
  std::vector<Precedence> added;
  for (const auto& c : compressions) {
    if (c.host().rotation_count() != host.rotation_count() || c.host().top() != host.top()) {
      throw ValidationError("compression belongs to a different rotation poset");
    }
    added.insert(added.end(), c.added_edges().begin(), c.added_edges().end());
  }
  return MetaRotationPoset(host, std::move(added));
}

namespace {

void write_rotations(std::ostream& out, const RotationPoset& host, const std::vector<int>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ' ';
    out << format_rotation(host.rotations()[ids[i]]);
  }
}

}  // namespace

std::string export_poset(const RotationPoset& poset) {
  std::ostringstream out;
  for (int k = 0; k < poset.rotation_count(); ++k) {
    out << "class " << k + 1 << ": " << format_rotation(poset.rotations()[k]) << '\n';
  }
  for (const auto& [a, b] : poset.order().hasse_edges()) out << "edge " << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

std::string export_poset(const MetaRotationPoset& poset) {
  std::ostringstream out;
  if (poset.empty()) {
    out << "empty\n";
    return out.str();
  }
  for (std::size_t k = 0; k < poset.classes().size(); ++k) {
    out << "class " << k + 1 << ": ";
    write_rotations(out, poset.host(), poset.classes()[k]);
    out << '\n';
  }
  for (const auto& [a, b] : poset.order().hasse_edges()) out << "edge " << a + 1 << ' ' << b + 1 << '\n';
  out << "always:";
  if (!poset.always_in().empty()) out << ' ';
  write_rotations(out, poset.host(), poset.always_in());
  out << "\nnever:";
  if (!poset.never_in().empty()) out << ' ';
  write_rotations(out, poset.host(), poset.never_in());
  out << '\n';
  return out.str();
}

}  // namespace smlat
