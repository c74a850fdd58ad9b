#pragma once

#include <string>

namespace twotier {

enum class DistFamily { uniform, normal, degenerate };

// One-dimensional ideal-point distribution. Uniform is parameterized by its
// support (a,b), normal by mean and variance, degenerate by its point mass.
struct DistributionSpec {
    DistFamily family = DistFamily::degenerate;
    double p1 = 0.0;  // uniform: lower bound; normal: mean; degenerate: point
    double p2 = 0.0;  // uniform: upper bound; normal: variance

    static DistributionSpec uniform(double a, double b);
    static DistributionSpec normal(double mean, double variance);
    static DistributionSpec degenerate(double point);

    bool is_degenerate() const;
    double variance() const;
    std::string describe() const;
};

// Probability density at x; rejects degenerate specs.
double density_at(const DistributionSpec& spec, double x);

double theoretical_median(const DistributionSpec& spec);

// Quantile function for p in (0,1); rejects degenerate specs.
double inverse_cdf(const DistributionSpec& spec, double p);

double cdf_at(const DistributionSpec& spec, double x);

// Parses "uniform(a,b)", "normal(mean,var)" or "degenerate(point)".
DistributionSpec parse_distribution(const std::string& text);

}  // namespace twotier
