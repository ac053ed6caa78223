#include "bertini/rational.hpp"

#include <cstdio>

namespace bertini {

std::string rat_decimal(const Rational& x, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, rat_double(x));
  return buf;
}

Rational rat_parse(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument(s);
    return Rational(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse rational '" + s + "'");
  }
}

int64_t floor_log_base(const Rational& x, uint64_t q) {
  if (x <= 0) throw std::domain_error("floor_log_base: x must be positive");
  if (q < 2) throw std::domain_error("floor_log_base: base must be >= 2");
  int64_t t = 0;
  Rational v = x;
  const Rational base(q);
  if (v >= 1) {
    while (v >= base) {
      v /= base;
      ++t;
    }
  } else {
    while (v < 1) {
      v *= base;
      --t;
    }
  }
  return t;
}

}  // namespace bertini
