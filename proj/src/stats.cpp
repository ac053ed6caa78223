#include "bertini/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "bertini/rng.hpp"

namespace bertini {

WilsonInterval wilson_interval(uint64_t successes, uint64_t n, double z) {
  if (n == 0) throw std::invalid_argument("wilson_interval: n >= 1");
  if (successes > n) throw std::invalid_argument("wilson_interval: successes > n");
  const double p = double(successes) / double(n);
  const double z2 = z * z;
  const double denom = 1 + z2 / double(n);
  WilsonInterval w;
  w.center = (p + z2 / (2.0 * double(n))) / denom;
  w.halfwidth =
      z * std::sqrt(p * (1 - p) / double(n) + z2 / (4.0 * double(n) * double(n))) /
      denom;
  w.lower = std::max(0.0, w.center - w.halfwidth);
  w.upper = std::min(1.0, w.center + w.halfwidth);
  return w;
}

namespace {

// Regularized lower incomplete gamma P(a, x) by series, upper Q(a, x) by
// continued fraction (Lentz); standard numerical recipes forms.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_square_upper_tail(double stat, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_upper_tail: dof >= 1");
  if (stat <= 0) return 1;
  const double a = dof / 2.0, x = stat / 2.0;
  if (x < a + 1) return 1 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

ChiSquareResult chi_square_gof(const std::vector<uint64_t>& observed,
                               const std::vector<double>& probabilities,
                               double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  uint64_t n = 0;
  for (uint64_t o : observed) n += o;
  if (n == 0) throw std::invalid_argument("chi_square_gof: empty sample");

  // Pool adjacent bins left to right until each pooled bin's expectation
  // reaches the threshold; fold a trailing underweight bin backwards.
  std::vector<double> exp_bins;
  std::vector<double> obs_bins;
  double e_acc = 0, o_acc = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    e_acc += probabilities[i] * double(n);
    o_acc += double(observed[i]);
    if (e_acc >= min_expected) {
      exp_bins.push_back(e_acc);
      obs_bins.push_back(o_acc);
      e_acc = o_acc = 0;
    }
  }
  if (e_acc > 0 || o_acc > 0) {
    if (exp_bins.empty()) {
      exp_bins.push_back(e_acc);
      obs_bins.push_back(o_acc);
    } else {
      exp_bins.back() += e_acc;
      obs_bins.back() += o_acc;
    }
  }
  if (exp_bins.size() < 2)
    throw std::invalid_argument("chi_square_gof: fewer than 2 usable bins");

  ChiSquareResult res;
  res.bins_used = int(exp_bins.size());
  res.dof = res.bins_used - 1;
  for (size_t i = 0; i < exp_bins.size(); ++i) {
    const double d = obs_bins[i] - exp_bins[i];
    res.statistic += d * d / exp_bins[i];
  }
  res.p_value = chi_square_upper_tail(res.statistic, res.dof);
  return res;
}

double bootstrap_sigma(const std::vector<double>& sample,
                       const std::function<double(const std::vector<double>&)>& stat,
                       int resamples, uint64_t seed) {
  if (sample.empty() || resamples < 2)
    throw std::invalid_argument("bootstrap_sigma: need data and >= 2 resamples");
  Rng rng(seed);
  std::vector<double> values;
  values.reserve(resamples);
  std::vector<double> re(sample.size());
  for (int b = 0; b < resamples; ++b) {
    for (size_t i = 0; i < sample.size(); ++i)
      re[i] = sample[rng.below(sample.size())];
    values.push_back(stat(re));
  }
  double mean = 0;
  for (double v : values) mean += v;
  mean /= values.size();
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (values.size() - 1);
  return std::sqrt(var);
}

}  // namespace bertini
