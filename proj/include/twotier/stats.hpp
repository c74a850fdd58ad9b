#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace twotier {

double mean_of(std::span<const double> xs);

// Unbiased sample variance (n-1 denominator).
double variance_of(std::span<const double> xs);

double normal_cdf(double x);

// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement); relative error below 1e-13 on (0,1).
double normal_quantile(double p);

// Survival function of the Kolmogorov distribution,
// Q(x) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_sf(double x);

// Critical value c such that kolmogorov_sf(c) == alpha.
double kolmogorov_critical(double alpha);

struct KsResult {
    double statistic = 0.0;  // sup |F_emp - F|
    double scaled = 0.0;     // statistic scaled by effective sample size
    double p_value = 1.0;
    std::size_t n = 0;
};

// One-sample KS against a continuous CDF. Sorts a copy of the sample.
KsResult ks_test(std::vector<double> sample,
                 const std::function<double(double)>& cdf);

// Two-sample KS.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

// Pearson chi-square goodness-of-fit p-value for observed counts against
// expected counts (same length, expected > 0).
double chi_square_gof_pvalue(std::span<const std::uint64_t> observed,
                             std::span<const double> expected);

}  // namespace twotier
