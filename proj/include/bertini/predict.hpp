// Exact rational evaluation of the closed-form predictions for smoothness
// densities of random complete intersections over finite fields: linear
// independence probabilities, per-closed-point local factors, truncated
// Euler products with rigorous tails, zeta of projective space, the
// Bernoulli/Binomial point-count model, conditional densities, limiting
// averages, and the fully explicit error bound.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bertini/rational.hpp"
#include "bertini/smoothness.hpp"

namespace bertini {

// Probability that k uniformly random vectors in F_q^m are linearly
// independent: L(q,m,k) = prod_{j=0}^{k-1} (1 - q^{-(m-j)}). Zero when
// k = m+1 (the j=m factor vanishes), 1 for k = 0.
Rational lin_indep_prob(uint64_t q, int m, int k);

// Per-closed-point smoothness factor at a point of degree e:
// 1 - q^{-ke} + q^{-ke} * L(q^e, m, k).
Rational local_factor(uint64_t q, int m, int k, int e);

// Moebius / necklace inversion: a_e = (1/e) sum_{d|e} mu(e/d) N_d.
// Throws std::invalid_argument when some a_e is negative or non-integral.
std::vector<BigInt> closed_point_counts(const std::vector<BigInt>& rational_counts);

int moebius(int n);

// #P^m(F_{q^e}) as an exact integer.
BigInt projective_rational_count(uint64_t q, int m, int e);

// N_e = #X(F_{q^e}) for e = 1..r. Projective space uses the closed form;
// a hypersurface is counted by bounded point enumeration.
std::vector<BigInt> variety_rational_counts(const Variety& X, int r,
                                            uint64_t max_points = uint64_t{1} << 26);

// A truncated Euler product kept in factored form: the exact value is
// prod_e factor_e^{a_e} over the stored (factor, multiplicity) pairs. The
// multiplicities are closed-point counts and grow like q^{me}/e, so the
// reduced numerator and denominator of the product routinely run to millions
// of bits; materializing them is therefore deferred and size-capped, while
// the factored form always supports exact factor-level identities and
// accurate floating-point evaluation.
struct TruncatedDensity {
  uint64_t q = 0;
  int m = 0, k = 0, r = 1;
  // (local_factor(q, m, k, e), a_e) for e = 1..r-1, in order.
  std::vector<std::pair<Rational, BigInt>> factors;

  // Product evaluated in extended precision; relative error well below 1e-15.
  double to_double() const;
  // Exact reduced numerator/denominator, or std::nullopt when the result
  // would exceed max_bits. Each factor's denominator is a power of the field
  // characteristic and its numerator is coprime to it, so the raw product is
  // already in lowest terms and no normalization pass is needed.
  std::optional<std::pair<BigInt, BigInt>> exact(
      size_t max_bits = size_t{1} << 26) const;
  // Exact test |value - center| <= radius, by cross-multiplication on the
  // materialized product. Throws std::length_error when the product exceeds
  // max_bits bits.
  bool within(const Rational& center, const Rational& radius,
              size_t max_bits = size_t{1} << 26) const;
  // Factorwise exact equality of the represented values.
  bool same_factors(const TruncatedDensity& o) const;
  // Every factor lies in (0, 1], hence so does the product (exact check).
  bool in_unit_interval() const;
};

// prod_{e<r} local_factor(q, m, k, e)^{a_e} for the closed-point counts of X.
TruncatedDensity truncated_density(const Variety& X, int k, int r,
                                   uint64_t max_points = uint64_t{1} << 26);
TruncatedDensity truncated_density_from_counts(
    uint64_t q, int m, int k, const std::vector<BigInt>& closed_counts);

// 2^{m+1} * degX * k * q^{-r(2k-1)}: the truncated product is within this
// of its limit whenever the bound is < 1.
Rational truncation_tail_bound(uint64_t q, int m, int k, int degX, int r);

// zeta_{P^m}(s) = prod_{i=0}^{m} (1 - q^{i-s})^{-1}; throws std::domain_error
// for s <= m (outside the convergence region).
Rational zeta_projective(uint64_t q, int m, int s);

// Success probability of the Bernoulli point-count model, 1 <= k <= m:
// pi = q^{-k} L / (1 - q^{-k} + q^{-k} L) with L = L(q,m,k).
Rational bernoulli_p(uint64_t q, int m, int k);

// Probability, given smooth, of containing g fixed points and avoiding h
// others: pi^g (1-pi)^h.
Rational conditional_density(uint64_t q, int m, int k, int g, int h);

// P(S = j) for S ~ Binomial(N, pi), exact. Requires 0 <= j <= N.
Rational binomial_pmf(const BigInt& N, const Rational& pi, const BigInt& j);

// Raw moments E[S^j], j = 0..r, of S ~ Binomial(N, pi), exact.
std::vector<Rational> binomial_raw_moments(const BigInt& N, const Rational& pi,
                                           int r);
// Central moments E[(S - N pi)^j], j = 0..r, exact.
std::vector<Rational> binomial_central_moments(const BigInt& N,
                                               const Rational& pi, int r);
// Moments of (S - N pi)/sqrt(N pi (1-pi)), j = 0..r. Odd entries are
// irrational (e.g. the third is (1-2pi)/sqrt(N pi(1-pi))), so these are
// reported as doubles; the exact central moments above carry the rational
// content.
std::vector<double> binomial_standardized_moments(const BigInt& N,
                                                  const Rational& pi, int r);

// Limiting average number of rational points of a random smooth curve cut
// by n-1 hypersurface sections in P^n: #P^n(F_q) * pi(q, n, n-1).
// For n = 2 this is exactly q+1.
Rational average_curve_points(uint64_t q, int n);
// The same quantity for n = 3 in the simplified closed form
// q + 1 - q^{-2}(1 + q^{-1}) / (1 + q^{-2} - q^{-5}).
Rational average_curve_points_p3_closed_form(uint64_t q);
// Partial product toward the n -> infinity limit:
// (q+1) * prod_{j=3}^{J} (1 - q^{-j}).
Rational eta_partial_average(uint64_t q, int J);

// 2^m * degX * q^{me}, an upper bound for #X(F_{q^e}).
BigInt lang_weil_bound(int m, int degX, uint64_t q, int e);

struct ErrorBoundInputs {
  uint64_t q = 2;
  int n = 0, m = 0, k = 0;
  int degX = 1;
  int z = 0;                 // number of conditioning points
  std::vector<int> degrees;  // ascending
};

struct ErrorBoundResult {
  int64_t r = 0;             // truncation chosen by the proof; >= 1
  Rational medium_term;      // 2^{m+2} degX k q^{-r(2k-1)}
  Rational high_term;        // (n+1) k n^m degX (m+1) d_k^m q^{-floor(d_1/max(m+1,p))}
  Rational value;            // min(medium + high, 1)
  bool vacuous = false;      // true when the raw r came out < 1
};

// Fully explicit error bound from the density theorem's proof, as an exact
// rational. The fractional exponent q^{-d_1/max(m+1,p)} is rounded up to
// q^{-floor(...)} so the result stays a valid upper bound, and the whole
// expression is clamped at 1 (a difference of probabilities never exceeds 1).
ErrorBoundResult error_bound(const ErrorBoundInputs& in);

// Everything the CLI reports for one parameter set.
struct PredictionReport {
  uint64_t q = 0;
  int m = 0, k = 0, degX = 1, r = 0;
  TruncatedDensity truncated_density;
  Rational tail_bound;
  std::optional<Rational> pi;  // absent when k = m+1
  std::optional<BigInt> N;     // #X(F_q)
  std::optional<Rational> model_mean, model_variance;
  std::vector<double> standardized_moments;  // index j = moment j, up to 4
  std::optional<ErrorBoundResult> error;
  std::optional<ErrorBoundInputs> error_inputs;
  // Set when (n,k) = (3,2) on projective space: the product-form average,
  // the simplified closed form, and the note about the misprinted constant.
  std::optional<Rational> average_product_form, average_closed_form;
  std::vector<std::string> notes;
};

PredictionReport make_prediction(const Variety& X, int k, int r,
                                 const std::vector<int>& degrees = {},
                                 int conditioning_points = 0,
                                 uint64_t max_points = uint64_t{1} << 26);

std::string prediction_to_json(const PredictionReport& rep);

}  // namespace bertini
