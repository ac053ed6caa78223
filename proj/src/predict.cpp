#include "bertini/predict.hpp"

#include <cmath>
#include <json.hpp>

namespace bertini {

Rational lin_indep_prob(uint64_t q, int m, int k) {
  if (q < 2 || m < 0 || k < 0)
    throw std::invalid_argument("lin_indep_prob: need q >= 2, m >= 0, k >= 0");
  Rational prod = 1;
  for (int j = 0; j < k; ++j) prod *= 1 - q_to(q, -(int64_t(m) - j));
  return prod;
}

Rational local_factor(uint64_t q, int m, int k, int e) {
  if (e < 1) throw std::invalid_argument("local_factor: e >= 1");
  const Rational qke = q_to(q, -int64_t(k) * e);
  // L over the degree-e extension: base q^e. Compute directly to avoid
  // overflowing q^e as an integer: (q^e)^{-(m-j)} = q^{-e(m-j)}.
  Rational L = 1;
  for (int j = 0; j < k; ++j) L *= 1 - q_to(q, -int64_t(e) * (m - j));
  return 1 - qke + qke * L;
}

int moebius(int n) {
  if (n < 1) throw std::invalid_argument("moebius: n >= 1");
  int mu = 1;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::vector<BigInt> closed_point_counts(const std::vector<BigInt>& rational_counts) {
  const int r = int(rational_counts.size());
  std::vector<BigInt> a(r);
  for (int e = 1; e <= r; ++e) {
    BigInt sum = 0;
    for (int d = 1; d <= e; ++d) {
      if (e % d) continue;
      sum += moebius(e / d) * rational_counts[d - 1];
    }
    if (sum < 0 || sum % e != 0)
      throw std::invalid_argument(
          "closed_point_counts: inconsistent rational point counts at e = " +
          std::to_string(e));
    a[e - 1] = sum / e;
  }
  return a;
}

BigInt projective_rational_count(uint64_t q, int m, int e) {
  BigInt total = 0, qe = 1;
  const BigInt step = int_pow(BigInt(q), uint64_t(e));
  for (int i = 0; i <= m; ++i) {
    total += qe;
    qe *= step;
  }
  return total;
}

std::vector<BigInt> variety_rational_counts(const Variety& X, int r,
                                            uint64_t max_points) {
  std::vector<BigInt> N;
  for (int e = 1; e <= r; ++e) {
    if (!X.is_hypersurface()) {
      N.push_back(projective_rational_count(X.field()->size(), X.dim(), e));
    } else {
      N.push_back(BigInt(count_points(X, {}, e, max_points)));
    }
  }
  return N;
}

namespace {

// base^exp by binary powering; the exponent may exceed 64 bits.
BigInt big_pow(const BigInt& base, const BigInt& exp) {
  if (exp == 0) return 1;
  BigInt out = 1, b = base;
  const unsigned top = msb(exp);
  for (unsigned i = 0;; ++i) {
    if (bit_test(exp, i)) out *= b;
    if (i == top) break;
    b *= b;
  }
  return out;
}

long double ldbl_pow(long double base, const BigInt& exp) {
  if (exp == 0) return 1.0L;
  long double out = 1.0L;
  for (unsigned i = msb(exp) + 1; i-- > 0;) {
    out *= out;
    if (bit_test(exp, i)) out *= base;
  }
  return out;
}

size_t bits_of(const BigInt& x) { return x == 0 ? 1 : size_t(msb(x)) + 1; }

}  // namespace

double TruncatedDensity::to_double() const {
  long double acc = 1.0L;
  for (const auto& [f, a] : factors)
    acc *= ldbl_pow(f.convert_to<long double>(), a);
  return double(acc);
}

std::optional<std::pair<BigInt, BigInt>> TruncatedDensity::exact(
    size_t max_bits) const {
  // Size the result before computing anything.
  BigInt bits = 0;
  for (const auto& [f, a] : factors)
    bits += a * BigInt(bits_of(numerator(f)) + bits_of(denominator(f)));
  if (bits > BigInt(max_bits)) return std::nullopt;
  BigInt num = 1, den = 1;
  for (const auto& [f, a] : factors) {
    num *= big_pow(numerator(f), a);
    den *= big_pow(denominator(f), a);
  }
  return std::make_pair(std::move(num), std::move(den));
}

bool TruncatedDensity::within(const Rational& center, const Rational& radius,
                              size_t max_bits) const {
  const auto v = exact(max_bits);
  if (!v)
    throw std::length_error("truncated density: exact product exceeds the bit cap");
  const auto& [num, den] = *v;
  // |num/den - nc/dc| <= nr/dr  <=>  |num dc - nc den| dr <= nr den dc.
  const BigInt nc = numerator(center), dc = denominator(center);
  const BigInt nr = numerator(radius), dr = denominator(radius);
  BigInt lhs = num * dc - nc * den;
  if (lhs < 0) lhs = -lhs;
  return lhs * dr <= nr * den * dc;
}

bool TruncatedDensity::same_factors(const TruncatedDensity& o) const {
  return factors == o.factors;
}

bool TruncatedDensity::in_unit_interval() const {
  for (const auto& [f, a] : factors) {
    (void)a;
    if (f <= 0 || f > 1) return false;
  }
  return true;
}

TruncatedDensity truncated_density_from_counts(
    uint64_t q, int m, int k, const std::vector<BigInt>& closed_counts) {
  TruncatedDensity out;
  out.q = q;
  out.m = m;
  out.k = k;
  out.r = int(closed_counts.size()) + 1;
  for (size_t i = 0; i < closed_counts.size(); ++i) {
    const int e = int(i) + 1;
    out.factors.emplace_back(local_factor(q, m, k, e), closed_counts[i]);
  }
  return out;
}

TruncatedDensity truncated_density(const Variety& X, int k, int r,
                                   uint64_t max_points) {
  if (r < 1) throw std::invalid_argument("truncated_density: r >= 1");
  if (k < 1 || k > X.dim() + 1)
    throw std::invalid_argument("truncated_density: need 1 <= k <= dim X + 1");
  const auto N = variety_rational_counts(X, r - 1, max_points);
  const auto a = closed_point_counts(N);
  return truncated_density_from_counts(X.field()->size(), X.dim(), k, a);
}

Rational truncation_tail_bound(uint64_t q, int m, int k, int degX, int r) {
  if (r < 1 || k < 1 || degX < 1)
    throw std::invalid_argument("truncation_tail_bound: bad inputs");
  return q_to(2, m + 1) * degX * k * q_to(q, -int64_t(r) * (2 * k - 1));
}

Rational zeta_projective(uint64_t q, int m, int s) {
  if (s <= m)
    throw std::domain_error("zeta_projective: s must exceed m");
  Rational inv = 1;
  for (int i = 0; i <= m; ++i) inv *= 1 - q_to(q, int64_t(i) - s);
  return 1 / inv;
}

Rational bernoulli_p(uint64_t q, int m, int k) {
  if (k < 1 || k > m)
    throw std::invalid_argument("bernoulli_p: need 1 <= k <= m");
  const Rational L = lin_indep_prob(q, m, k);
  const Rational qk = q_to(q, -int64_t(k));
  return qk * L / (1 - qk + qk * L);
}

Rational conditional_density(uint64_t q, int m, int k, int g, int h) {
  if (g < 0 || h < 0)
    throw std::invalid_argument("conditional_density: g, h >= 0");
  const Rational pi = bernoulli_p(q, m, k);
  return rat_pow(pi, g) * rat_pow(1 - pi, h);
}

// Stirling numbers of the second kind up to S(r, r).
static std::vector<std::vector<BigInt>> stirling2(int r) {
  std::vector<std::vector<BigInt>> S(r + 1, std::vector<BigInt>(r + 1, 0));
  S[0][0] = 1;
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= i; ++j) S[i][j] = S[i - 1][j - 1] + j * S[i - 1][j];
  return S;
}

Rational binomial_pmf(const BigInt& N, const Rational& pi, const BigInt& j) {
  if (N < 0 || j < 0 || j > N)
    throw std::invalid_argument("binomial_pmf: need 0 <= j <= N");
  // binom(N, j) computed with the smaller of j, N-j multiplications.
  const BigInt t = j <= N - j ? j : N - j;
  BigInt binom = 1;
  for (BigInt i = 0; i < t; ++i) {
    binom *= N - i;
    binom /= i + 1;
  }
  Rational out(binom);
  for (BigInt i = 0; i < j; ++i) out *= pi;
  for (BigInt i = 0; i < N - j; ++i) out *= 1 - pi;
  return out;
}

std::vector<Rational> binomial_raw_moments(const BigInt& N, const Rational& pi,
                                           int r) {
  if (N < 1 || r < 0 || r > 12)
    throw std::invalid_argument("binomial_raw_moments: bad inputs");
  // E[S^j] = sum_t S2(j,t) * N falling t * pi^t.
  const auto S2 = stirling2(r);
  std::vector<Rational> out(r + 1);
  out[0] = 1;
  for (int j = 1; j <= r; ++j) {
    Rational acc = 0;
    BigInt falling = 1;
    Rational pit = 1;
    for (int t = 1; t <= j; ++t) {
      falling = t == 1 ? N : falling * (N - (t - 1));
      pit *= pi;
      acc += Rational(S2[j][t]) * Rational(falling) * pit;
    }
    out[j] = acc;
  }
  return out;
}

std::vector<Rational> binomial_central_moments(const BigInt& N,
                                               const Rational& pi, int r) {
  const auto raw = binomial_raw_moments(N, pi, r);
  const Rational mean = Rational(N) * pi;
  std::vector<Rational> out(r + 1);
  // mu_j = sum_i binom(j,i) raw_i (-mean)^{j-i}
  std::vector<std::vector<BigInt>> binom(r + 1, std::vector<BigInt>(r + 1, 0));
  for (int i = 0; i <= r; ++i) {
    binom[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
  }
  for (int j = 0; j <= r; ++j) {
    Rational acc = 0;
    for (int i = 0; i <= j; ++i)
      acc += Rational(binom[j][i]) * raw[i] * rat_pow(-mean, j - i);
    out[j] = acc;
  }
  return out;
}

std::vector<double> binomial_standardized_moments(const BigInt& N,
                                                  const Rational& pi, int r) {
  const auto central = binomial_central_moments(N, pi, r);
  const Rational var = Rational(N) * pi * (1 - pi);
  const double sigma = std::sqrt(rat_double(var));
  std::vector<double> out(r + 1);
  for (int j = 0; j <= r; ++j)
    out[j] = rat_double(central[j]) / std::pow(sigma, j);
  return out;
}

Rational average_curve_points(uint64_t q, int n) {
  if (n < 2) throw std::invalid_argument("average_curve_points: n >= 2");
  return Rational(projective_rational_count(q, n, 1)) * bernoulli_p(q, n, n - 1);
}

Rational average_curve_points_p3_closed_form(uint64_t q) {
  return Rational(q) + 1 -
         q_to(q, -2) * (1 + q_to(q, -1)) / (1 + q_to(q, -2) - q_to(q, -5));
}

Rational eta_partial_average(uint64_t q, int J) {
  Rational prod = Rational(q) + 1;
  for (int j = 3; j <= J; ++j) prod *= 1 - q_to(q, -j);
  return prod;
}

BigInt lang_weil_bound(int m, int degX, uint64_t q, int e) {
  if (e < 1) throw std::invalid_argument("lang_weil_bound: e >= 1");
  return int_pow(2, uint64_t(m)) * degX * int_pow(BigInt(q), uint64_t(m) * e);
}

ErrorBoundResult error_bound(const ErrorBoundInputs& in) {
  if (in.q < 2 || in.n < 1 || in.m < 1 || in.k < 1 || in.degX < 1 || in.z < 0)
    throw std::invalid_argument("error_bound: bad geometry inputs");
  if (in.degrees.empty())
    throw std::invalid_argument("error_bound: no degrees");
  if (int(in.degrees.size()) != in.k)
    throw std::invalid_argument("error_bound: k does not match degrees");
  for (size_t i = 1; i < in.degrees.size(); ++i) {
    if (in.degrees[i] < in.degrees[i - 1])
      throw std::invalid_argument("error_bound: degrees must be ascending");
  }
  const int d1 = in.degrees.front(), dk = in.degrees.back();
  if (d1 < in.z)
    throw std::invalid_argument("error_bound: need d_1 >= number of conditioning points");
  ErrorBoundResult res;

  // r = 1 + floor((1/m) log_q ((d_1 - z + 1) / ((m+1) 2^{m+1} degX)))
  const Rational arg =
      Rational(d1 - in.z + 1) / (Rational(in.m + 1) * q_to(2, in.m + 1) * in.degX);
  int64_t r;
  if (arg <= 0) {
    r = 0;  // forces the vacuous branch
  } else {
    const int64_t fl = floor_log_base(arg, in.q);
    r = 1 + (fl >= 0 ? fl / in.m
                     : -((-fl + in.m - 1) / in.m));  // floor of fl/m
  }
  if (r < 1) {
    res.r = 1;
    res.vacuous = true;
  } else {
    res.r = r;
  }

  // Characteristic of F_q.
  uint64_t p = in.q;
  for (uint64_t c = 2; c * c <= in.q; ++c) {
    if (in.q % c == 0) {
      p = c;
      break;
    }
  }
  const int denom = std::max(in.m + 1, int(p));

  res.medium_term = q_to(2, in.m + 2) * in.degX * in.k *
                    q_to(in.q, -res.r * (2 * in.k - 1));
  res.high_term = Rational(in.n + 1) * in.k * int_pow(BigInt(in.n), uint64_t(in.m)) *
                  in.degX * (in.m + 1) * int_pow(BigInt(dk), uint64_t(in.m)) *
                  q_to(in.q, -int64_t(d1 / denom));
  const Rational total = res.medium_term + res.high_term;
  res.value = res.vacuous || total > 1 ? Rational(1) : total;
  return res;
}

PredictionReport make_prediction(const Variety& X, int k, int r,
                                 const std::vector<int>& degrees,
                                 int conditioning_points, uint64_t max_points) {
  PredictionReport rep;
  rep.q = X.field()->size();
  rep.m = X.dim();
  rep.k = k;
  rep.degX = X.deg_closure();
  rep.r = r;
  rep.truncated_density = truncated_density(X, k, r, max_points);
  rep.tail_bound = truncation_tail_bound(rep.q, rep.m, k, rep.degX, r);
  if (k <= rep.m) {
    rep.pi = bernoulli_p(rep.q, rep.m, k);
    const BigInt N = variety_rational_counts(X, 1, max_points).at(0);
    rep.N = N;
    rep.model_mean = Rational(N) * *rep.pi;
    rep.model_variance = Rational(N) * *rep.pi * (1 - *rep.pi);
    rep.standardized_moments = binomial_standardized_moments(N, *rep.pi, 4);
  }
  if (!degrees.empty()) {
    ErrorBoundInputs in;
    in.q = rep.q;
    in.n = X.n();
    in.m = rep.m;
    in.k = k;
    in.degX = rep.degX;
    in.z = conditioning_points;
    in.degrees = degrees;
    if (degrees.front() >= conditioning_points) {
      rep.error_inputs = in;
      rep.error = error_bound(in);
    } else {
      rep.notes.push_back(
          "explicit error bound omitted: it requires d_1 >= the number of "
          "conditioning points");
    }
  }
  if (!X.is_hypersurface() && X.n() == 3 && k == 2) {
    rep.average_product_form = average_curve_points(rep.q, 3);
    rep.average_closed_form = average_curve_points_p3_closed_form(rep.q);
    rep.notes.push_back(
        "limiting average point count: product form " +
        rat_string(*rep.average_product_form) + " (" +
        rat_decimal(*rep.average_product_form) + ") and simplified closed form " +
        rat_string(*rep.average_closed_form) + " agree exactly; the previously " +
        "quoted constant 37/13 (~2.846) does not match either form at q=2 and " +
        "appears to be a misprint of 35/13 (~2.692).");
  }
  return rep;
}

std::string prediction_to_json(const PredictionReport& rep) {
  nlohmann::ordered_json j;
  j["q"] = rep.q;
  j["m"] = rep.m;
  j["k"] = rep.k;
  j["degX"] = rep.degX;
  j["r"] = rep.r;
  auto rat = [](const Rational& x) {
    nlohmann::ordered_json o;
    o["rational"] = rat_string(x);
    o["decimal"] = rat_decimal(x);
    return o;
  };
  {
    nlohmann::ordered_json td;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", rep.truncated_density.to_double());
    td["decimal"] = buf;
    // The exact fraction can run to millions of bits; print it only when it
    // stays report-sized.
    if (const auto v = rep.truncated_density.exact(size_t{1} << 15)) {
      td["rational"] = v->first.str() + "/" + v->second.str();
    } else {
      td["rational"] = nullptr;
    }
    j["truncated_density"] = td;
  }
  j["tail_bound"] = rat(rep.tail_bound);
  if (rep.pi) j["pi"] = rat(*rep.pi);
  if (rep.N) j["N"] = rep.N->str();
  if (rep.model_mean) j["model_mean"] = rat(*rep.model_mean);
  if (rep.model_variance) j["model_variance"] = rat(*rep.model_variance);
  if (!rep.standardized_moments.empty())
    j["standardized_moments"] = rep.standardized_moments;
  if (rep.error) {
    nlohmann::ordered_json e;
    e["r"] = rep.error->r;
    e["medium_term"] = rat(rep.error->medium_term);
    e["high_term"] = rat(rep.error->high_term);
    e["value"] = rat(rep.error->value);
    e["vacuous"] = rep.error->vacuous;
    const auto& in = *rep.error_inputs;
    nlohmann::ordered_json ein;
    ein["q"] = in.q;
    ein["n"] = in.n;
    ein["m"] = in.m;
    ein["k"] = in.k;
    ein["degX"] = in.degX;
    ein["z"] = in.z;
    ein["degrees"] = in.degrees;
    e["inputs"] = ein;
    j["error_bound"] = e;
  }
  if (rep.average_product_form)
    j["average_product_form"] = rat(*rep.average_product_form);
  if (rep.average_closed_form)
    j["average_closed_form"] = rat(*rep.average_closed_form);
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  return j.dump(2) + "\n";
}

}  // namespace bertini
