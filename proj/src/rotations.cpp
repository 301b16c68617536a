#include "smlat/rotations.hpp"

#include <algorithm>
#include <sstream>

#include "smlat/deferred_acceptance.hpp"
#include "smlat/error.hpp"

namespace smlat {

std::string format_rotation(const Rotation& rotation) {
  std::ostringstream out;
  out << '(';
  for (int i = 0; i < rotation.size(); ++i) {
    if (i) out << ", ";
    out << rotation.pairs[i].worker + 1 << ' ' << rotation.pairs[i].firm + 1;
  }
  out << ')';
  return out.str();
}

std::optional<int> s_of(const Instance& instance, const Matching& m, int worker) {
  const auto& list = instance.worker_list(worker);
  for (int pos = instance.worker_rank(worker, m.firm_of(worker)) + 1; pos < instance.size(); ++pos) {
    const int f = list[pos];
    if (instance.firm_prefers(f, worker, m.worker_of(f))) return f;
  }
  return std::nullopt;
}

std::vector<Rotation> exposed_rotations(const Instance& instance, const Matching& m) {
  if (m.size() != instance.size()) throw SizeMismatch("matching size differs from instance");
  const int n = instance.size();
  // next[w] = M-partner of s(w); the functional graph's cycles are the rotations.
  std::vector<int> next(n, -1);
  for (int w = 0; w < n; ++w) {
    if (auto s = s_of(instance, m, w)) next[w] = m.worker_of(*s);
  }
  std::vector<int> color(n, 0);  // 0 unseen, 1 on current path, 2 finished
  std::vector<Rotation> out;
  for (int start = 0; start < n; ++start) {
    if (color[start]) continue;
    std::vector<int> path;
    int w = start;
    while (w != -1 && color[w] == 0) {
      color[w] = 1;
      path.push_back(w);
      w = next[w];
    }
    if (w != -1 && color[w] == 1) {
      auto it = std::find(path.begin(), path.end(), w);
      std::vector<int> cycle(it, path.end());
      std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
      Rotation rot;
      for (int v : cycle) rot.pairs.push_back({v, m.firm_of(v)});
      out.push_back(std::move(rot));
    }
    for (int v : path) color[v] = 2;
  }
  std::sort(out.begin(), out.end(),
            [](const Rotation& a, const Rotation& b) { return a.pairs[0].worker < b.pairs[0].worker; });
  return out;
}

Matching eliminate(const Instance& instance, const Matching& m, const Rotation& rotation) {
  const auto exposed = exposed_rotations(instance, m);
  const bool found = std::any_of(exposed.begin(), exposed.end(), [&](const Rotation& r) {
    if (r.size() != rotation.size()) return false;
    // Compare as cycles.
    auto it = std::find(rotation.pairs.begin(), rotation.pairs.end(), r.pairs[0]);
    if (it == rotation.pairs.end()) return false;
    const auto offset = it - rotation.pairs.begin();
    for (int i = 0; i < r.size(); ++i) {
      if (!(r.pairs[i] == rotation.pairs[(i + offset) % rotation.size()])) return false;
    }
    return true;
  });
  if (!found) throw NotExposed(format_rotation(rotation) + " is not exposed");
  std::vector<int> firm_of = m.firms();
  for (int i = 0; i < rotation.size(); ++i) firm_of[rotation.pairs[i].worker] = rotation.firm_after(i);
  return Matching(std::move(firm_of));
}

RotationPoset::RotationPoset(Instance instance, Matching top, Matching bottom,
                             std::vector<Rotation> rotations, Poset order)
    : instance_(std::move(instance)),
      top_(std::move(top)),
      bottom_(std::move(bottom)),
      rotations_(std::move(rotations)),
      order_(std::move(order)) {}

Matching RotationPoset::matching_of(const std::vector<bool>& closed) const {
  if (static_cast<int>(closed.size()) != rotation_count() || !order_.is_closed(closed)) {
    throw ValidationError("rotation set is not closed");
  }
  // Ascending index restricted to a closed set is a valid elimination order.
  std::vector<int> firm_of = top_.firms();
  for (int r = 0; r < rotation_count(); ++r) {
    if (!closed[r]) continue;
    const Rotation& rot = rotations_[r];
    for (int i = 0; i < rot.size(); ++i) firm_of[rot.pairs[i].worker] = rot.firm_after(i);
  }
  return Matching(std::move(firm_of));
}

RotationPoset build_rotation_poset(const Instance& instance) {
  const int n = instance.size();
  Matching top = worker_da(instance);
  Matching bottom = firm_da(instance);

  std::vector<Rotation> chain;
  Matching current = top;
  while (current != bottom) {
    auto exposed = exposed_rotations(instance, current);
    if (exposed.empty()) throw InvariantViolation("no exposed rotation above the firm-optimal matching");
    current = eliminate(instance, current, exposed.front());
    chain.push_back(std::move(exposed.front()));
  }

  // moves_to[w][f]: rotation that moves w to f.
  // moves_above[f][w]: rotation that moves f from a partner no better than w
  // to one better than w. Each label is unique when it exists.
  std::vector<std::vector<int>> moves_to(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> moves_above(n, std::vector<int>(n, -1));
  for (int r = 0; r < static_cast<int>(chain.size()); ++r) {
    const Rotation& rot = chain[r];
    const int len = rot.size();
    for (int i = 0; i < len; ++i) {
      const auto [w, f] = rot.pairs[i];
      moves_to[w][rot.firm_after(i)] = r;
      const int new_partner = rot.pairs[(i + len - 1) % len].worker;
      const auto& list = instance.firm_list(f);
      for (int pos = instance.firm_rank(f, new_partner) + 1; pos <= instance.firm_rank(f, w); ++pos) {
        int& label = moves_above[f][list[pos]];
        if (label != -1) throw InvariantViolation("two rotations move a firm above the same worker");
        label = r;
      }
    }
  }

  std::vector<std::pair<int, int>> relations;
  for (int r = 0; r < static_cast<int>(chain.size()); ++r) {
    const Rotation& rot = chain[r];
    for (int i = 0; i < rot.size(); ++i) {
      const auto [w, f] = rot.pairs[i];
      const int target = rot.firm_after(i);
      if (moves_to[w][f] != -1) relations.emplace_back(moves_to[w][f], r);
      const auto& list = instance.worker_list(w);
      for (int pos = instance.worker_rank(w, f) + 1; pos < instance.worker_rank(w, target); ++pos) {
        const int label = moves_above[list[pos]][w];
        if (label != -1 && label != r) relations.emplace_back(label, r);
      }
    }
  }
  Poset order(static_cast<int>(chain.size()), relations);
  return RotationPoset(instance, std::move(top), std::move(bottom), std::move(chain), std::move(order));
}

LatticeEnumerator::LatticeEnumerator(const RotationPoset& poset)
    : poset_(&poset), sets_(poset.order()) {}

std::optional<Matching> LatticeEnumerator::next() {
  auto set = sets_.next();
  if (!set) return std::nullopt;
  return poset_->matching_of(*set);
}

std::vector<Matching> enumerate_lattice(const RotationPoset& poset) {
  std::vector<Matching> out;
  LatticeEnumerator it(poset);
  while (auto m = it.next()) out.push_back(std::move(*m));
  return out;
}

}  // namespace smlat
