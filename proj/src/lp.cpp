#include "smlat/lp.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "smlat/error.hpp"

namespace smlat {

int LPModel::count(RowKind kind) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const Constraint& c) { return c.kind == kind; }));
}

LPModel build_lp(std::span<const Instance> instances) {
  if (instances.empty()) throw ValidationError("LP needs at least one instance");
  const int n = instances.front().size();
  for (const auto& i : instances) {
    if (i.size() != n) throw SizeMismatch("instances differ in size");
  }
  LPModel model;
  model.n = n;
  model.instances = static_cast<int>(instances.size());
  for (int w = 0; w < n; ++w) {
    Constraint c{RowKind::worker_sum, -1, w, -1, {}, Sense::eq, 1};
    for (int f = 0; f < n; ++f) c.terms.push_back({model.variable(w, f), 1});
    model.rows.push_back(std::move(c));
  }
  for (int f = 0; f < n; ++f) {
    Constraint c{RowKind::firm_sum, -1, -1, f, {}, Sense::eq, 1};
    for (int w = 0; w < n; ++w) c.terms.push_back({model.variable(w, f), 1});
    model.rows.push_back(std::move(c));
  }
  for (int k = 0; k < model.instances; ++k) {
    const Instance& inst = instances[k];
    for (int w = 0; w < n; ++w) {
      for (int f = 0; f < n; ++f) {
        Constraint c{RowKind::stability, k, w, f, {}, Sense::le, 0};
        const auto& wl = inst.worker_list(w);
        for (int pos = inst.worker_rank(w, f) + 1; pos < n; ++pos) {
          c.terms.push_back({model.variable(w, wl[pos]), 1});
        }
        const auto& fl = inst.firm_list(f);
        for (int pos = 0; pos < inst.firm_rank(f, w); ++pos) {
          c.terms.push_back({model.variable(fl[pos], f), -1});
        }
        model.rows.push_back(std::move(c));
      }
    }
  }
  for (int w = 0; w < n; ++w) {
    for (int f = 0; f < n; ++f) {
      model.rows.push_back({RowKind::nonnegativity, -1, w, f, {{model.variable(w, f), 1}}, Sense::ge, 0});
    }
  }
  return model;
}

FractionalMatching::FractionalMatching(int n, std::vector<Rational> values) : n_(n), x_(std::move(values)) {
  if (static_cast<int>(x_.size()) != n * n) throw SizeMismatch("fractional matching needs n*n values");
}

FractionalMatching FractionalMatching::from(const Matching& m) {
  const int n = m.size();
  std::vector<Rational> x(static_cast<std::size_t>(n) * n, 0);
  for (int w = 0; w < n; ++w) x[w * n + m.firm_of(w)] = 1;
  return FractionalMatching(n, std::move(x));
}

bool FractionalMatching::is_integral() const {
  return std::all_of(x_.begin(), x_.end(), [](const Rational& v) { return v == 0 || v == 1; });
}

std::optional<Matching> FractionalMatching::as_matching() const {
  if (!is_integral()) return std::nullopt;
  std::vector<int> firm_of(n_, -1);
  for (int w = 0; w < n_; ++w) {
    for (int f = 0; f < n_; ++f) {
      if (at(w, f) == 1) {
        if (firm_of[w] != -1) return std::nullopt;
        firm_of[w] = f;
      }
    }
    if (firm_of[w] == -1) return std::nullopt;
  }
  try {
    return Matching(std::move(firm_of));
  } catch (const NotAMatching&) {
    return std::nullopt;
  }
}

bool satisfies(const LPModel& model, const FractionalMatching& x) {
  if (x.size() != model.n) return false;
  for (const Constraint& c : model.rows) {
    Rational lhs = 0;
    for (const LinearTerm& t : c.terms) lhs += t.coefficient * x.at(t.variable / model.n, t.variable % model.n);
    const bool ok = c.sense == Sense::eq ? lhs == c.rhs : c.sense == Sense::le ? lhs <= c.rhs : lhs >= c.rhs;
    if (!ok) return false;
  }
  return true;
}

namespace {

// Dense tableau; the last column holds the right-hand side and the last row
// the phase-one reduced costs.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), cells_(rows + 1, std::vector<Rational>(cols + 1, 0)) {}

  Rational& at(int r, int c) { return cells_[r][c]; }
  Rational& rhs(int r) { return cells_[r][cols_]; }
  Rational& cost(int c) { return cells_[rows_][c]; }

  void pivot(int row, int col) {
    std::vector<Rational>& p = cells_[row];
    const Rational scale = p[col];
    std::vector<int> support;
    for (int c = 0; c <= cols_; ++c) {
      if (sgn(p[c]) != 0) {
        p[c] /= scale;
        support.push_back(c);
      }
    }
    for (int r = 0; r <= rows_; ++r) {
      if (r == row || sgn(cells_[r][col]) == 0) continue;
      const Rational factor = cells_[r][col];
      for (int c : support) cells_[r][c] -= factor * p[c];
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<std::vector<Rational>> cells_;
};

}  // namespace

std::optional<FractionalMatching> solve_feasible(const LPModel& model) {
  const int n = model.n;
  const int vars = n * n;
  std::vector<const Constraint*> rows;
  for (const Constraint& c : model.rows) {
    // Single-variable nonnegativity rows are the simplex's own bounds.
    if (c.kind == RowKind::nonnegativity && c.sense == Sense::ge && c.rhs == 0 && c.terms.size() == 1 &&
        c.terms[0].coefficient > 0) {
      continue;
    }
    rows.push_back(&c);
  }
  const int m = static_cast<int>(rows.size());
  int slacks = 0;
  for (const Constraint* c : rows) slacks += c->sense != Sense::eq;
  const int cols = vars + slacks + m;  // at most one artificial per row
  Tableau t(m, cols);
  std::vector<int> basis(m, -1);
  std::vector<bool> artificial(cols, false);
  int next_slack = vars;
  int next_artificial = vars + slacks;

  for (int r = 0; r < m; ++r) {
    const Constraint& c = *rows[r];
    const bool flip = c.rhs < 0;
    const int sign = flip ? -1 : 1;
    for (const LinearTerm& term : c.terms) t.at(r, term.variable) += sign * term.coefficient;
    t.rhs(r) = sign * c.rhs;
    if (c.sense != Sense::eq) {
      const int slack_sign = (c.sense == Sense::le ? 1 : -1) * sign;
      t.at(r, next_slack) = slack_sign;
      if (slack_sign > 0) basis[r] = next_slack;
      ++next_slack;
    }
    if (basis[r] == -1) {
      t.at(r, next_artificial) = 1;
      artificial[next_artificial] = true;
      basis[r] = next_artificial++;
    }
  }
  // Phase-one objective: minimise the sum of artificials, priced out.
  for (int r = 0; r < m; ++r) {
    if (!artificial[basis[r]]) continue;
    for (int c = 0; c < cols; ++c) {
      if (!artificial[c]) t.cost(c) -= t.at(r, c);
    }
    t.cost(cols) -= t.rhs(r);
  }

  for (;;) {
    int enter = -1;
    for (int c = 0; c < cols && enter == -1; ++c) {
      if (!artificial[c] && sgn(t.cost(c)) < 0) enter = c;
    }
    if (enter == -1) break;
    int leave = -1;
    Rational best;
    for (int r = 0; r < m; ++r) {
      if (sgn(t.at(r, enter)) <= 0) continue;
      Rational ratio = t.rhs(r) / t.at(r, enter);
      if (leave == -1 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = std::move(ratio);
      }
    }
    // Phase one is bounded below by zero, so a column with negative cost
    // always has a positive entry.
    if (leave == -1) throw InvariantViolation("unbounded phase-one simplex");
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  if (sgn(t.cost(cols)) != 0) return std::nullopt;

  std::vector<Rational> x(vars, 0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] < vars) x[basis[r]] = t.rhs(r);
  }
  return FractionalMatching(n, std::move(x));
}

namespace {

// Index into `order` of the piece containing theta.
int locate(const FractionalMatching& x, const std::vector<int>& order, bool worker_side, int agent,
           const Rational& theta) {
  Rational start = 0;
  int last = -1;
  for (int other : order) {
    const Rational& len = worker_side ? x.at(agent, other) : x.at(other, agent);
    if (sgn(len) == 0) continue;
    Rational end = start + len;
    if (theta == end && end < 1) {
      throw BoundaryTheta("theta " + theta.get_str() + " is a breakpoint for " +
                          (worker_side ? "worker " : "firm ") + std::to_string(agent + 1));
    }
    if (theta < end) return other;
    last = other;
    start = std::move(end);
  }
  return last;
}

}  // namespace

Matching theta_round(const FractionalMatching& x, const Instance& instance, const Rational& theta) {
  if (theta < 0 || theta > 1) throw ValidationError("theta must lie in [0,1]");
  const int n = instance.size();
  if (x.size() != n) throw SizeMismatch("fractional matching size differs from instance");
  std::vector<int> firm_of(n);
  for (int w = 0; w < n; ++w) firm_of[w] = locate(x, instance.worker_list(w), true, w, theta);
  for (int f = 0; f < n; ++f) {
    std::vector<int> order(instance.firm_list(f).rbegin(), instance.firm_list(f).rend());
    const int w = locate(x, order, false, f, theta);
    if (w == -1 || firm_of[w] != f) {
      throw InvariantViolation("worker and firm roundings disagree at theta " + theta.get_str());
    }
  }
  return Matching(std::move(firm_of));
}

RoundingReport rounding_agreement(const FractionalMatching& x, const Instance& a, const Instance& b,
                                  std::span<const Rational> thetas) {
  RoundingReport report;
  for (const Rational& theta : thetas) {
    try {
      Matching ma = theta_round(x, a, theta);
      Matching mb = theta_round(x, b, theta);
      ++report.checked;
      if (ma != mb && !report.disagreement) {
        report.disagreement = RoundingDisagreement{theta, std::move(ma), std::move(mb)};
      }
    } catch (const BoundaryTheta&) {
      ++report.boundary;
    }
  }
  return report;
}

std::vector<Rational> theta_samples(int count, std::uint64_t seed) {
  static const int kGrid[][2] = {{1, 3}, {1, 2}, {2, 3}, {1, 7}, {5, 11}, {97, 101}, {3, 13}, {16, 17}};
  constexpr long kDenominator = 1000003;  // prime
  std::vector<Rational> out;
  for (const auto& [p, q] : kGrid) {
    if (static_cast<int>(out.size()) == count) return out;
    out.emplace_back(p, q);
    out.back().canonicalize();
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> numerator(1, kDenominator - 1);
  while (static_cast<int>(out.size()) < count) {
    out.emplace_back(numerator(rng), kDenominator);
    out.back().canonicalize();
  }
  return out;
}

std::string export_lp(const LPModel& model) {
  std::ostringstream out;
  out << "variables x<w>_<f>, n = " << model.n << '\n';
  for (const Constraint& c : model.rows) {
    switch (c.kind) {
      case RowKind::worker_sum:
        out << "sum w" << c.worker + 1 << ": ";
        break;
      case RowKind::firm_sum:
        out << "sum f" << c.firm + 1 << ": ";
        break;
      case RowKind::stability:
        out << "stab I" << c.instance + 1 << " w" << c.worker + 1 << " f" << c.firm + 1 << ": ";
        break;
      case RowKind::nonnegativity:
        out << "bound: ";
        break;
    }
    bool first = true;
    for (const LinearTerm& t : c.terms) {
      const int w = t.variable / model.n + 1;
      const int f = t.variable % model.n + 1;
      if (first) {
        if (t.coefficient < 0) out << "- ";
      } else {
        out << (t.coefficient < 0 ? " - " : " + ");
      }
      Rational magnitude = abs(t.coefficient);
      if (magnitude != 1) out << magnitude.get_str() << ' ';
      out << 'x' << w << '_' << f;
      first = false;
    }
    if (first) out << '0';
    out << (c.sense == Sense::eq ? " = " : c.sense == Sense::le ? " <= " : " >= ") << c.rhs.get_str() << '\n';
  }
  return out.str();
}

}  // namespace smlat
