#include "smlat/instance.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

#include "smlat/error.hpp"

namespace smlat {

namespace {

std::vector<int> invert_lists(const std::vector<PreferenceList>& lists, int n,
                              const char* side) {
  std::vector<int> rank(static_cast<std::size_t>(n) * n, -1);
  for (int a = 0; a < n; ++a) {
    const auto& list = lists[a];
    if (static_cast<int>(list.size()) != n) {
      throw ValidationError(std::string(side) + " " + std::to_string(a + 1) + ": list has " +
                            std::to_string(list.size()) + " entries, expected " +
                            std::to_string(n));
    }
    for (int pos = 0; pos < n; ++pos) {
      const int b = list[pos];
      if (b < 0 || b >= n) {
        throw ValidationError(std::string(side) + " " + std::to_string(a + 1) +
                              ": id " + std::to_string(b + 1) + " out of range");
      }
      int& slot = rank[static_cast<std::size_t>(a) * n + b];
      if (slot != -1) {
        throw ValidationError(std::string(side) + " " + std::to_string(a + 1) +
                              ": id " + std::to_string(b + 1) + " listed twice");
      }
      slot = pos;
    }
  }
  return rank;
}

}  // namespace

Instance::Instance(std::vector<PreferenceList> worker_prefs,
                   std::vector<PreferenceList> firm_prefs, std::string name)
    : n_(static_cast<int>(worker_prefs.size())),
      worker_prefs_(std::move(worker_prefs)),
      firm_prefs_(std::move(firm_prefs)),
      name_(std::move(name)) {
  if (n_ < 1) throw ValidationError("instance needs at least one agent per side");
  if (static_cast<int>(firm_prefs_.size()) != n_) {
    throw ValidationError("instance has " + std::to_string(n_) + " workers but " +
                          std::to_string(firm_prefs_.size()) + " firms");
  }
  worker_rank_ = invert_lists(worker_prefs_, n_, "worker");
  firm_rank_ = invert_lists(firm_prefs_, n_, "firm");
}

Instance Instance::with_worker_list(int w, PreferenceList list) const {
  auto workers = worker_prefs_;
  workers.at(w) = std::move(list);
  return Instance(std::move(workers), firm_prefs_, name_);
}

Instance Instance::with_firm_list(int f, PreferenceList list) const {
  auto firms = firm_prefs_;
  firms.at(f) = std::move(list);
  return Instance(worker_prefs_, std::move(firms), name_);
}

Instance Instance::transposed() const {
  return Instance(firm_prefs_, worker_prefs_, name_.empty() ? name_ : name_ + "^T");
}

Matching::Matching(std::vector<int> firm_of_worker) : firm_of_(std::move(firm_of_worker)) {
  const int n = static_cast<int>(firm_of_.size());
  worker_of_.assign(n, -1);
  for (int w = 0; w < n; ++w) {
    const int f = firm_of_[w];
    if (f < 0 || f >= n) {
      throw NotAMatching("worker " + std::to_string(w + 1) + " assigned out-of-range firm");
    }
    if (worker_of_[f] != -1) {
      throw NotAMatching("firm " + std::to_string(f + 1) + " assigned to workers " +
                         std::to_string(worker_of_[f] + 1) + " and " + std::to_string(w + 1));
    }
    worker_of_[f] = w;
  }
}

Matching Matching::identity(int n) {
  std::vector<int> firms(n);
  for (int i = 0; i < n; ++i) firms[i] = i;
  return Matching(std::move(firms));
}

std::vector<Pair> Matching::pairs() const {
  std::vector<Pair> out;
  out.reserve(firm_of_.size());
  for (int w = 0; w < size(); ++w) out.push_back({w, firm_of_[w]});
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_ids(std::istringstream& in, int line_no) {
  std::vector<int> ids;
  std::string token;
  while (in >> token) {
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParseError(line_no, "expected an integer id, got '" + token + "'");
    }
    ids.push_back(value - 1);
  }
  return ids;
}

}  // namespace

Instance parse_instance(std::istream& in, std::string name) {
  std::string raw;
  int line_no = 0;
  std::optional<int> n;
  std::vector<std::optional<PreferenceList>> workers;
  std::vector<std::optional<PreferenceList>> firms;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) continue;

    std::istringstream tokens(line);
    std::string head;
    tokens >> head;

    if (!n) {
      int value = 0;
      if (head != "n" || !(tokens >> value)) {
        throw ParseError(line_no, "expected 'n <N>' header");
      }
      std::string extra;
      if (tokens >> extra) throw ParseError(line_no, "trailing text after 'n <N>'");
      if (value < 1) throw ParseError(line_no, "n must be positive");
      n = value;
      workers.assign(value, std::nullopt);
      firms.assign(value, std::nullopt);
      continue;
    }

    if (head != "w" && head != "f") {
      throw ParseError(line_no, "expected a 'w <i>:' or 'f <j>:' line");
    }
    std::string id_token;
    tokens >> id_token;
    if (id_token.empty() || id_token.back() != ':') {
      // Accept "w 1 :" as well as "w 1:".
      std::string colon;
      if (!(tokens >> colon) || colon != ":") {
        throw ParseError(line_no, "expected ':' after agent id");
      }
    } else {
      id_token.pop_back();
    }
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(id_token, &used);
      if (used != id_token.size()) throw std::invalid_argument(id_token);
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad agent id '" + id_token + "'");
    }
    auto& slots = head == "w" ? workers : firms;
    if (id < 1 || id > *n) {
      throw ParseError(line_no, "agent id " + std::to_string(id) + " out of range 1.." +
                                    std::to_string(*n));
    }
    if (slots[id - 1]) {
      throw ParseError(line_no, std::string(head == "w" ? "worker " : "firm ") +
                                    std::to_string(id) + " listed twice");
    }
    slots[id - 1] = parse_ids(tokens, line_no);
  }

  if (!n) throw ParseError(line_no, "missing 'n <N>' header");
  std::vector<PreferenceList> worker_lists;
  std::vector<PreferenceList> firm_lists;
  for (int i = 0; i < *n; ++i) {
    if (!workers[i]) throw ParseError(line_no, "missing list for worker " + std::to_string(i + 1));
    if (!firms[i]) throw ParseError(line_no, "missing list for firm " + std::to_string(i + 1));
    worker_lists.push_back(std::move(*workers[i]));
    firm_lists.push_back(std::move(*firms[i]));
  }
  return Instance(std::move(worker_lists), std::move(firm_lists), std::move(name));
}

Instance parse_instance_text(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  return parse_instance(in, std::move(name));
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_instance(in, path.stem().string());
}

std::string serialize(const Instance& instance) {
  std::ostringstream out;
  const int n = instance.size();
  if (!instance.name().empty()) out << "# " << instance.name() << '\n';
  out << "n " << n << '\n';
  for (int w = 0; w < n; ++w) {
    out << "w " << w + 1 << ':';
    for (int f : instance.worker_list(w)) out << ' ' << f + 1;
    out << '\n';
  }
  for (int f = 0; f < n; ++f) {
    out << "f " << f + 1 << ':';
    for (int w : instance.firm_list(f)) out << ' ' << w + 1;
    out << '\n';
  }
  return out.str();
}

Matching parse_matching(std::string_view line) {
  std::istringstream in{strip_comment(std::string(line))};
  std::string head;
  in >> head;
  if (head != "M:") throw ParseError(1, "matching must start with 'M:'");
  auto ids = parse_ids(in, 1);
  if (ids.empty()) throw ParseError(1, "empty matching");
  return Matching(std::move(ids));
}

std::string format_matching(const Matching& m) {
  std::string out = "M:";
  for (int f : m.firms()) out += ' ' + std::to_string(f + 1);
  return out;
}

std::string format_matching_letters(const Matching& m) {
  std::string out = "{";
  for (int w = 0; w < m.size(); ++w) {
    if (w) out += ',';
    out += std::to_string(w + 1);
    const int f = m.firm_of(w);
    if (m.size() <= 26) {
      out += static_cast<char>('a' + f);
    } else {
      out += ':' + std::to_string(f + 1);
    }
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Stability and lattice operations

std::vector<Pair> blocking_pairs(const Instance& instance, const Matching& m) {
  if (m.size() != instance.size()) throw SizeMismatch("matching size differs from instance");
  std::vector<Pair> out;
  for (int w = 0; w < instance.size(); ++w) {
    // Only firms strictly above M(w) in w's list can block.
    for (int f : instance.worker_list(w)) {
      if (f == m.firm_of(w)) break;
      if (instance.firm_prefers(f, w, m.worker_of(f))) out.push_back({w, f});
    }
  }
  return out;
}

bool is_stable(const Instance& instance, const Matching& m) {
  if (m.size() != instance.size()) throw SizeMismatch("matching size differs from instance");
  for (int w = 0; w < instance.size(); ++w) {
    for (int f : instance.worker_list(w)) {
      if (f == m.firm_of(w)) break;
      if (instance.firm_prefers(f, w, m.worker_of(f))) return false;
    }
  }
  return true;
}

namespace {

Matching combine(const Instance& instance, const Matching& a, const Matching& b, bool better) {
  if (a.size() != instance.size() || b.size() != instance.size()) {
    throw SizeMismatch("matching size differs from instance");
  }
  std::vector<int> firms(instance.size());
  for (int w = 0; w < instance.size(); ++w) {
    const bool a_better = instance.worker_rank(w, a.firm_of(w)) <= instance.worker_rank(w, b.firm_of(w));
    firms[w] = (a_better == better) ? a.firm_of(w) : b.firm_of(w);
  }
  return Matching(std::move(firms));
}

}  // namespace

Matching meet(const Instance& instance, const Matching& a, const Matching& b) {
  return combine(instance, a, b, true);
}

Matching join(const Instance& instance, const Matching& a, const Matching& b) {
  return combine(instance, a, b, false);
}

bool dominates(const Instance& instance, const Matching& a, const Matching& b) {
  for (int w = 0; w < instance.size(); ++w) {
    if (instance.worker_rank(w, a.firm_of(w)) > instance.worker_rank(w, b.firm_of(w))) return false;
  }
  return true;
}

PQDelta diff_pq(const Instance& a, const Instance& b) {
  const Instance pair[] = {a, b};
  return diff_pq(pair);
}

PQDelta diff_pq(std::span<const Instance> family) {
  PQDelta delta;
  if (family.empty()) return delta;
  const Instance& base = family.front();
  const int n = base.size();
  for (const auto& other : family) {
    if (other.size() != n) {
      throw SizeMismatch("instances have " + std::to_string(n) + " and " +
                         std::to_string(other.size()) + " agents per side");
    }
  }
  for (int w = 0; w < n; ++w) {
    const bool changed = std::any_of(family.begin(), family.end(), [&](const Instance& i) {
      return i.worker_list(w) != base.worker_list(w);
    });
    if (changed) delta.changed_workers.push_back(w);
  }
  for (int f = 0; f < n; ++f) {
    const bool changed = std::any_of(family.begin(), family.end(), [&](const Instance& i) {
      return i.firm_list(f) != base.firm_list(f);
    });
    if (changed) delta.changed_firms.push_back(f);
  }
  return delta;
}

}  // namespace smlat
