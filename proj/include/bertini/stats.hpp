// Statistical helpers for comparing empirical frequencies to predictions:
// Wilson score intervals, chi-square goodness of fit (with a hand-rolled
// regularized incomplete gamma for the p-value), and a seeded bootstrap for
// standard errors of moment statistics.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bertini {

struct WilsonInterval {
  double lower = 0, upper = 0;
  double center = 0, halfwidth = 0;
};

// Score interval for a binomial proportion at z standard normal units
// (z = 1.959964 for 95%; pass z = 3 for a 3-sigma interval).
WilsonInterval wilson_interval(uint64_t successes, uint64_t n, double z);

// Upper tail P(X >= stat) for X ~ chi-square(dof), via the regularized
// incomplete gamma function Q(dof/2, stat/2).
double chi_square_upper_tail(double stat, int dof);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  int bins_used = 0;  // after pooling
};

// Goodness of fit of observed counts against model probabilities. Adjacent
// bins are pooled until every expected count is at least min_expected;
// dof = bins_used - 1.
ChiSquareResult chi_square_gof(const std::vector<uint64_t>& observed,
                               const std::vector<double>& probabilities,
                               double min_expected = 5.0);

// Bootstrap standard error of a statistic of a sample: resample with
// replacement `resamples` times (seeded, deterministic) and return the
// standard deviation of the statistic across resamples.
double bootstrap_sigma(const std::vector<double>& sample,
                       const std::function<double(const std::vector<double>&)>& stat,
                       int resamples, uint64_t seed);

}  // namespace bertini
