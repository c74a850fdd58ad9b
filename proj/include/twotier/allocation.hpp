#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twotier/game.hpp"
#include "twotier/pivot_mc.hpp"
#include "twotier/population.hpp"

namespace twotier {

enum class AllocationRuleKind { direct_power_law, shapley_power_law, density_rule };

struct AllocationRuleSpec {
    AllocationRuleKind kind = AllocationRuleKind::direct_power_law;
    double alpha = 0.0;  // power laws only; conventional range [0, 2]
};

const char* rule_kind_name(AllocationRuleKind kind);

// Weights proportional to n_i^alpha, normalized to sum 1.
std::vector<double> power_law_weights(const ConstituencyPartition& partition,
                                      double alpha);

// Weights proportional to n_i / f_i(M), where f_i is the delegate
// ideal-point density at the common median: the square root rule in the
// i.i.d. case, approaching proportionality as the shock variance grows.
std::vector<double> density_rule_weights(const ConstituencyPartition& partition,
                                         const PreferenceModel& model);

struct InverseShapleyResult {
    std::vector<double> weights;     // normalized to sum 1
    PowerIndexVector achieved;       // exact Shapley value of the weights
    double residual_linf = 0.0;      // max_i |achieved_i - target_i|
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // best residual after each step
};

// Heuristic for the inverse Shapley problem: damped multiplicative
// fixed-point iteration w <- w * (target / phi(w))^0.5 starting at the
// target, keeping the best iterate seen. Weights are rationalized to
// `resolution` for each exact Shapley evaluation. Never claims exactness.
InverseShapleyResult inverse_shapley(std::span<const double> target,
                                     double quota_fraction, int max_iters = 100,
                                     double tolerance = 1e-4,
                                     std::int64_t resolution = 10000);

struct AlphaSearchResult {
    double alpha_star = 0.0;
    std::vector<std::pair<double, double>> l1_by_alpha;
    AllocationRuleKind kind = AllocationRuleKind::direct_power_law;
    std::string model_descriptor;
};

std::vector<double> make_alpha_grid(double lo, double hi, double step);

// For each alpha, builds weights under the rule (direct: n^alpha;
// shapley: weights whose Shapley value tracks n^alpha), estimates pivot
// probabilities and scores the L1 distance from egalitarian per-capita
// influence. Returns the minimizing alpha, smallest first on ties.
// Grid point k uses the sub-seed derive_seed(seed, k).
AlphaSearchResult optimize_alpha(const ConstituencyPartition& partition,
                                 const PreferenceModel& model,
                                 AllocationRuleKind kind,
                                 std::span<const double> alpha_grid,
                                 double quota_fraction, std::uint64_t replications,
                                 std::uint64_t seed, unsigned threads = 1,
                                 std::int64_t resolution = 10000);

// CSV "alpha,l1,rule_kind".
std::string alpha_search_csv(const AlphaSearchResult& result);

}  // namespace twotier
