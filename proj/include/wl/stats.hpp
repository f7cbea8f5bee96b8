#pragma once

#include <cstdint>
#include <vector>

#include "wl/chain.hpp"

namespace wl::stats {

// Quantile with linear interpolation between order statistics
// (the (n-1)q convention). Input must be sorted ascending.
double quantile_sorted(const std::vector<double>& sorted, double q);

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

struct Summary {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  std::uint64_t m_effective = 0;
  std::uint64_t capped_count = 0;
};

// Moments and quantiles over the non-capped samples; capped runs are only
// counted.
Summary summarize(const std::vector<ExitSample>& samples);

// Two-sided Kolmogorov-Smirnov sup-distance between the empirical CDF of
// `samples` and the unit-rate exponential CDF 1 - exp(-c).
double ks_to_exp1(std::vector<double> samples);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// via the classical series / continued-fraction pair.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi2_sf(double x, double dof);

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Two-sample binned chi-square test on integer-valued samples. Bin edges are
// taken at combined-sample quantiles so expected counts stay well away from
// zero; adjacent duplicate edges collapse.
Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b,
                           int target_bins = 20);

// One-sample chi-square of observed counts against expected probabilities.
Chi2Result chi2_goodness_of_fit(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& probs);

}  // namespace wl::stats
