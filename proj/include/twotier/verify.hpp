#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twotier/distributions.hpp"
#include "twotier/population.hpp"

namespace twotier {

// One statistical pass/fail record. `hard` marks checks whose failure
// should fail the suite; soft checks are informational (small-m cases
// where weighted voting is too granular to score).
struct CheckReport {
    std::string name;
    std::string config;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool hard = true;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;
};

struct VerifyOptions {
    unsigned threads = 1;
    // Multiplies every model-error allowance and critical value; 0 makes
    // all statistical checks fail (negative control), 1 is the default.
    double tolerance_scale = 1.0;
};

// Replica type: every delegate of a type shares a weight, a constituency
// size, and a fixed share of the assembly.
struct ReplicaType {
    double weight = 1.0;
    std::int64_t size = 1;
    double share = 1.0;
};

// Large-assembly pivot ratio law: under the i.i.d. model at simple
// majority, pi_i/pi_j tends to (w_i f_i(M))/(w_j f_j(M)). For each m in
// the grid the observed type ratio is compared with that limit; the error
// must be nonincreasing in m up to noise and within tolerance at final m.
std::vector<CheckReport> check_pivot_ratio_limit(std::span<const ReplicaType> types,
                                                 std::span<const std::int64_t> m_grid,
                                                 std::uint64_t replications,
                                                 std::uint64_t seed,
                                                 const VerifyOptions& opts = {});

// Strong-polarization law: as the shock scale t grows, pi converges to
// the Shapley value of the weighted voting game, for any quota in [0.5,1).
std::vector<CheckReport> check_shock_shapley_limit(double quota_fraction,
                                                   std::span<const std::int64_t> weights,
                                                   std::span<const std::int64_t> sizes,
                                                   const DistributionSpec& g,
                                                   const DistributionSpec& h,
                                                   std::span<const double> t_grid,
                                                   std::uint64_t replications,
                                                   std::uint64_t seed,
                                                   const VerifyOptions& opts = {});

// Sample-median normality: the rescaled median 2 g(M) sqrt(n) (Y - M)
// must pass a KS test against N(0,1), and the empirical variance must
// match 1/(n (2 g(M))^2). The variance comparison is hard for uniform g,
// where the exact Beta law of the median rank backs the tolerance.
std::vector<CheckReport> check_median_normality(const DistributionSpec& g,
                                                std::int64_t n,
                                                std::uint64_t replications,
                                                std::uint64_t seed,
                                                const VerifyOptions& opts = {});

// Square root rule: sqrt(n_i) weights under the i.i.d. model should give
// every citizen roughly equal influence. Reports the worst per-capita
// deviation |pi_i n / n_i - 1|; soft for m < 5 where feasible voting
// games are too coarse.
CheckReport check_square_root_rule(const ConstituencyPartition& partition,
                                   std::uint64_t replications, std::uint64_t seed,
                                   const VerifyOptions& opts = {},
                                   double deviation_allowance = 0.15);

bool all_hard_pass(std::span<const CheckReport> reports);

std::string reports_csv(std::span<const CheckReport> reports);
void print_reports(std::ostream& os, std::span<const CheckReport> reports);

}  // namespace twotier
