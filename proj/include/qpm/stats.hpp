#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qpm::stats {

// Wilson score interval for a binomial proportion.
double wilson_lower(std::uint64_t successes, std::uint64_t trials, double z = 1.96);
double wilson_upper(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

// Regularized upper incomplete gamma Q(a, x); series/continued-fraction.
double gammq(double a, double x);

// Survival function of the chi-squared distribution (p-value of a statistic).
double chi2_survival(double statistic, int dof);

// Pearson chi-squared statistic against a uniform distribution over bins.
double chi2_uniform_statistic(const std::vector<std::uint64_t>& counts);

// p-value for observed bin counts under the uniform null.
double chi2_uniform_pvalue(const std::vector<std::uint64_t>& counts);

// Two-proportion z statistic threshold test: returns true when |p1 - p2| is
// below the z-level threshold with pooled variance (i.e. indistinguishable).
bool proportions_indistinguishable(std::uint64_t k1, std::uint64_t n1,
                                   std::uint64_t k2, std::uint64_t n2,
                                   double z = 1.96);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qpm::stats
