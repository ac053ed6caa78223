// Exact rational arithmetic helpers on top of Boost.Multiprecision.
// Every predicted quantity in this project is a rational number at finite
// truncation, so the whole prediction layer works in cpp_rational and
// converts to double only when reporting.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bertini {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt int_pow(const BigInt& base, uint64_t e) {
  BigInt r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// base^e with negative exponents allowed (base must be nonzero for e < 0).
inline Rational rat_pow(const Rational& base, int64_t e) {
  if (e >= 0) {
    return Rational(int_pow(numerator(base), uint64_t(e)),
                    int_pow(denominator(base), uint64_t(e)));
  }
  if (base == 0) throw std::domain_error("rat_pow: 0 to a negative power");
  return Rational(int_pow(denominator(base), uint64_t(-e)),
                  int_pow(numerator(base), uint64_t(-e)));
}

// q^e as a rational, e of either sign.
inline Rational q_to(uint64_t q, int64_t e) { return rat_pow(Rational(q), e); }

inline double rat_double(const Rational& x) { return x.convert_to<double>(); }

// Canonical "num/den" text, always with an explicit denominator.
inline std::string rat_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

std::string rat_decimal(const Rational& x, int significant = 15);

// Parses "num/den" or a plain integer.
Rational rat_parse(const std::string& s);

// Largest integer t with q^t <= x (x > 0, q >= 2). Exact.
int64_t floor_log_base(const Rational& x, uint64_t q);

}  // namespace bertini
