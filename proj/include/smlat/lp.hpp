#pragma once

// Feasibility LP for matchings that are fractionally stable under every
// member of a family, an exact phase-one simplex, and theta-rounding.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smlat/instance.hpp"

namespace smlat {

using Rational = mpq_class;

enum class RowKind { worker_sum, firm_sum, stability, nonnegativity };
enum class Sense { le, eq, ge };

struct LinearTerm {
  int variable;  // w * n + f
  Rational coefficient;
};

struct Constraint {
  RowKind kind;
  int instance = -1;  // stability rows only
  int worker = -1;
  int firm = -1;
  std::vector<LinearTerm> terms;
  Sense sense;
  Rational rhs;
};

struct LPModel {
  int n = 0;
  int instances = 0;
  std::vector<Constraint> rows;

  int variable(int w, int f) const { return w * n + f; }
  int count(RowKind kind) const;
};

// Row sums and column sums equal one, one stability row per (instance, w, f):
//   sum over f' below f for w of x[w][f'] - sum over w' above w for f of x[w'][f] <= 0
// and x >= 0. Throws SizeMismatch, or ValidationError on an empty family.
LPModel build_lp(std::span<const Instance> instances);

class FractionalMatching {
 public:
  FractionalMatching(int n, std::vector<Rational> values);
  static FractionalMatching from(const Matching& m);

  int size() const noexcept { return n_; }
  const Rational& at(int w, int f) const { return x_[w * n_ + f]; }
  bool is_integral() const;
  // The 0/1 matrix as a matching, if integral.
  std::optional<Matching> as_matching() const;

 private:
  int n_;
  std::vector<Rational> x_;
};

// Every row of the model holds exactly.
bool satisfies(const LPModel& model, const FractionalMatching& x);

// Exact phase-one simplex with Bland's rule. Returns a basic feasible
// solution, or nullopt when the model is infeasible.
std::optional<FractionalMatching> solve_feasible(const LPModel& model);

// Worker intervals run from most to least preferred firm, firm intervals from
// least to most preferred worker; zero-length pieces are skipped and theta = 1
// falls in the last piece. Throws BoundaryTheta when theta is an interior
// breakpoint of some agent, ValidationError when theta is outside [0,1].
Matching theta_round(const FractionalMatching& x, const Instance& instance, const Rational& theta);

struct RoundingDisagreement {
  Rational theta;
  Matching under_a;
  Matching under_b;
};

struct RoundingReport {
  int checked = 0;
  int boundary = 0;  // samples skipped as breakpoints
  std::optional<RoundingDisagreement> disagreement;
};

RoundingReport rounding_agreement(const FractionalMatching& x, const Instance& a, const Instance& b,
                                  std::span<const Rational> thetas);

// A fixed grid of interior rationals followed by seeded random ones with a
// large prime denominator; `count` values in total.
std::vector<Rational> theta_samples(int count, std::uint64_t seed);

// One constraint per line, e.g. "stab A2 w1 f3: x1_4 - x2_3 <= 0".
std::string export_lp(const LPModel& model);

}  // namespace smlat
