// Buchberger's algorithm in grevlex over a finite field, tuned for the one
// question this project keeps asking: is an ideal the unit ideal? The pair
// queue uses the normal selection strategy (smallest lcm degree first) with
// the coprime-leading-term and chain criteria, reductions are full normal
// forms, and the returned basis is the unique reduced Groebner basis.
//
// Work is metered in S-pair reductions: exceeding the configured budget
// raises BudgetExhausted so callers can classify the computation as
// undecided instead of looping for unbounded time.
#pragma once

#include <stdexcept>
#include <vector>

#include "bertini/mpoly.hpp"

namespace bertini {

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(uint64_t budget)
      : std::runtime_error("pair reduction budget of " +
                           std::to_string(budget) + " exhausted"),
        budget(budget) {}
  uint64_t budget;
};

struct GroebnerOptions {
  uint64_t pair_budget = 200000;
  // Return as soon as a unit is found; basis is then {1} and no further
  // pairs are processed.
  bool stop_on_unit = false;
};

struct GroebnerResult {
  std::vector<Polynomial> basis;  // reduced, monic, leading terms descending
  bool unit = false;
  uint64_t pairs_reduced = 0;
};

// Full normal form of f modulo basis: no term of the remainder is divisible
// by any basis leading term. Reduction always picks the first basis element
// (in stored order) whose leading term divides, so the result is a function
// of (f, basis order) alone.
Polynomial reduce(const Polynomial& f, const std::vector<Polynomial>& basis);

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g);

GroebnerResult buchberger(std::vector<Polynomial> gens,
                          const GroebnerOptions& opts = {});

// True iff 1 lies in the ideal generated by gens (equivalently the
// generators have no common zero over the algebraic closure).
bool ideal_is_trivial(const std::vector<Polynomial>& gens,
                      uint64_t pair_budget = GroebnerOptions{}.pair_budget);

}  // namespace bertini
