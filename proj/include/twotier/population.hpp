#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twotier/distributions.hpp"
#include "twotier/kvfile.hpp"
#include "twotier/rng.hpp"

namespace twotier {

// Sizes n_1,...,n_m of the disjoint constituencies. All sizes are positive
// odd integers so the constituency median is a single order statistic.
struct ConstituencyPartition {
    std::vector<std::int64_t> sizes;

    explicit ConstituencyPartition(std::vector<std::int64_t> s);

    std::size_t size() const { return sizes.size(); }
    std::int64_t total_population() const;
    std::string describe() const;
};

// Voter ideal point model: nu = shock_scale * mu + eps with eps ~ g per
// voter and mu ~ h per constituency. shock_scale = 0 (or degenerate h)
// is the i.i.d. case.
struct PreferenceModel {
    DistributionSpec g;
    DistributionSpec h = DistributionSpec::degenerate(0.0);
    double shock_scale = 0.0;

    PreferenceModel(DistributionSpec g_, DistributionSpec h_, double t);

    bool iid() const { return shock_scale == 0.0 || h.is_degenerate(); }
    std::string describe() const;
};

struct MedianSample {
    double value = 0.0;
    std::int64_t constituency_size = 0;
};

// Sampling routes for the constituency median. All routes agree in
// distribution; the "auto" policy picks beta_affine for uniform g and
// the direct order-statistic route for other g up to n = 10001, then the
// beta-quantile route.
enum class MedianPath { auto_select, direct, beta_affine, beta_quantile };

double sample_constituency_median(const DistributionSpec& g, std::int64_t n,
                                  RandomStream& rs,
                                  MedianPath path = MedianPath::auto_select);

// Ideal points of all m delegates for one replication. Each constituency
// uses its own stream derived from (seed, replication, constituency), so
// results are independent of how replications are scheduled.
void sample_ideal_points(const PreferenceModel& model,
                         const ConstituencyPartition& partition,
                         std::uint64_t seed, std::uint64_t replication,
                         std::span<double> out);

// Density of the sample median of n draws at the common median:
// 2 * g(M) * sqrt(n) / sqrt(2*pi).
double asymptotic_median_density(double g_density_at_median, std::int64_t n);

// Variance of the sample median of n draws: 1 / (n * (2*g(M))^2).
double asymptotic_median_variance(double g_density_at_median, std::int64_t n);

// Ratio f_i(0)/f_j(0) of delegate ideal-point densities at the common
// median under the normal heterogeneity model:
// ((pi*sg2/(2 n_i) + sh2) / (pi*sg2/(2 n_j) + sh2))^(-1/2).
double ideal_point_density_ratio(std::int64_t n_i, std::int64_t n_j,
                                 double sigma_g_sq, double sigma_h_sq);

// Nearest odd integer >= 1; exact even values round up.
std::int64_t round_to_odd(double x);

// One integer per line; blank lines and '#' comments ignored. Each value
// is divided by scale and rounded to the nearest odd integer.
ConstituencyPartition load_partition_file(const std::string& path, double scale = 1.0);

// Reads "sizes" or "population_file" (+ optional "population_scale").
ConstituencyPartition partition_from_config(const KeyValueFile& kv,
                                            const std::string& base_dir = "");

// Reads "g", optional "h" and "shock_scale".
PreferenceModel model_from_config(const KeyValueFile& kv);

}  // namespace twotier
