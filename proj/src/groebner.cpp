#include "bertini/groebner.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

namespace bertini {

Polynomial reduce(const Polynomial& f, const std::vector<Polynomial>& basis) {
  Polynomial rem = f;
  std::vector<Term> out;
  // Invariant: out holds the already-irreducible head, rem the unprocessed
  // tail, and every monomial of rem is strictly below the last of out.
  while (!rem.is_zero()) {
    const Term lead = rem.leading();
    const Polynomial* divisor = nullptr;
    for (const Polynomial& b : basis) {
      if (!b.is_zero() && b.leading().mono.divides(lead.mono)) {
        divisor = &b;
        break;
      }
    }
    if (!divisor) {
      out.push_back(lead);
      // Drop the leading term only; cheaper than rebuilding.
      rem = rem.axpy(rem.field()->neg(lead.coeff), lead.mono,
                     Polynomial::constant(rem.field(), rem.nvars(), 1));
      continue;
    }
    const Monomial shift = lead.mono / divisor->leading().mono;
    const uint32_t c =
        rem.field()->neg(rem.field()->mul(lead.coeff,
                                          rem.field()->inv(divisor->leading().coeff)));
    rem = rem.axpy(c, shift, *divisor);
  }
  return Polynomial::from_terms(f.field(), f.nvars(), std::move(out));
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero())
    throw std::domain_error("s_polynomial: zero input");
  const Monomial l = Monomial::lcm(f.leading().mono, g.leading().mono);
  const Field& F = *f.field();
  Polynomial a = f.times_term(l / f.leading().mono, F.inv(f.leading().coeff));
  return a.axpy(F.neg(F.inv(g.leading().coeff)), l / g.leading().mono, g);
}

namespace {

struct Pair {
  Monomial lcm;
  int degree;
  uint32_t i, j;  // i < j
};

struct PairOrder {
  // Min-heap on (degree, lcm grevlex ascending, i, j).
  bool operator()(const Pair& a, const Pair& b) const {
    if (a.degree != b.degree) return a.degree > b.degree;
    const int c = grevlex_compare(a.lcm, b.lcm);
    if (c != 0) return c > 0;
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

uint64_t pair_key(uint32_t i, uint32_t j) { return (uint64_t(i) << 32) | j; }

}  // namespace

GroebnerResult buchberger(std::vector<Polynomial> gens,
                          const GroebnerOptions& opts) {
  GroebnerResult res;
  if (gens.empty()) return res;
  const FieldPtr field = gens.front().field();
  const int nvars = gens.front().nvars();

  std::vector<Polynomial> basis;
  std::priority_queue<Pair, std::vector<Pair>, PairOrder> queue;
  // Pairs whose S-polynomial is known to reduce to zero (processed or
  // eliminated); the chain criterion is only applied against these.
  std::unordered_set<uint64_t> settled;

  auto finish_unit = [&]() {
    res.unit = true;
    res.basis = {Polynomial::constant(field, nvars, 1)};
    return res;
  };

  auto add_poly = [&](const Polynomial& p) {
    const uint32_t idx = uint32_t(basis.size());
    for (uint32_t i = 0; i < idx; ++i) {
      if (Monomial::coprime(basis[i].leading().mono, p.leading().mono)) {
        // Coprime leading terms: S-pair reduces to zero, skip it outright.
        settled.insert(pair_key(i, idx));
        continue;
      }
      const Monomial l = Monomial::lcm(basis[i].leading().mono, p.leading().mono);
      queue.push({l, l.degree(), i, idx});
    }
    basis.push_back(p.monic());
  };

  for (Polynomial& g : gens) {
    if (g.is_zero()) continue;
    if (g.is_constant()) return finish_unit();
    add_poly(g);
  }

  while (!queue.empty()) {
    const Pair pr = queue.top();
    queue.pop();
    // Chain criterion: if some other basis element divides the lcm and both
    // flanking pairs are settled, this pair is redundant.
    bool redundant = false;
    for (uint32_t k = 0; k < basis.size() && !redundant; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (!basis[k].leading().mono.divides(pr.lcm)) continue;
      const uint64_t a = pair_key(std::min(pr.i, k), std::max(pr.i, k));
      const uint64_t b = pair_key(std::min(pr.j, k), std::max(pr.j, k));
      if (settled.count(a) && settled.count(b)) redundant = true;
    }
    settled.insert(pair_key(pr.i, pr.j));
    if (redundant) continue;

    if (res.pairs_reduced >= opts.pair_budget)
      throw BudgetExhausted(opts.pair_budget);
    ++res.pairs_reduced;

    const Polynomial s = s_polynomial(basis[pr.i], basis[pr.j]);
    const Polynomial r = reduce(s, basis);
    if (r.is_zero()) continue;
    if (r.is_constant()) {
      if (opts.stop_on_unit) return finish_unit();
      res.unit = true;
    }
    add_poly(r);
  }

  // Minimal basis: drop elements whose leading term another one divides.
  std::vector<Polynomial> minimal;
  for (size_t i = 0; i < basis.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < basis.size() && !drop; ++j) {
      if (i == j) continue;
      const bool divides =
          basis[j].leading().mono.divides(basis[i].leading().mono);
      // On equal leading monomials keep the later element (the earlier one
      // reduced to it during the run or is interchangeable; pick one side
      // deterministically).
      if (divides && (basis[j].leading().mono != basis[i].leading().mono || j > i))
        drop = true;
    }
    if (!drop) minimal.push_back(basis[i]);
  }
  // Reduced basis: replace each element by its normal form against the
  // others. Leading terms are pairwise indivisible, so they survive.
  std::vector<Polynomial> reduced;
  for (size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Polynomial r = reduce(minimal[i], others);
    if (!r.is_zero()) reduced.push_back(r.monic());
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const Polynomial& a, const Polynomial& b) {
              return grevlex_compare(a.leading().mono, b.leading().mono) > 0;
            });
  res.unit = res.unit || (reduced.size() == 1 && reduced.front().is_constant());
  res.basis = std::move(reduced);
  return res;
}

bool ideal_is_trivial(const std::vector<Polynomial>& gens, uint64_t pair_budget) {
  GroebnerOptions opts;
  opts.pair_budget = pair_budget;
  opts.stop_on_unit = true;
  std::vector<Polynomial> nonzero;
  for (const Polynomial& g : gens)
    if (!g.is_zero()) nonzero.push_back(g);
  if (nonzero.empty()) return false;
  return buchberger(std::move(nonzero), opts).unit;
}

}  // namespace bertini
