#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twotier/game.hpp"
#include "twotier/population.hpp"

namespace twotier {

// Monte Carlo estimate of the per-delegate pivot probabilities pi_i.
// counts sum to replications exactly; every replication selects exactly
// one pivotal delegate.
struct PivotEstimate {
    std::vector<std::uint64_t> counts;
    std::uint64_t replications = 0;
    std::vector<double> probabilities;
    std::vector<double> std_errors;  // sqrt(p (1-p) / replications)
    std::uint64_t seed = 0;
    std::string game_descriptor;
    std::string model_descriptor;
};

struct InfluenceProfile {
    std::vector<double> per_capita;  // pi_i / n_i
    double l1_distance = 0.0;        // sum_i n_i |pi_i/n_i - 1/n|
};

struct RunOptions {
    unsigned threads = 1;
    SweepDirection direction = SweepDirection::left_to_right;
};

// Repeatedly samples delegate ideal points, locates the pivotal delegate
// and counts hits. Deterministic for fixed (seed, replications) no matter
// how many threads are used: replication r always draws from streams keyed
// by (seed, r, constituency), and counts add associatively.
PivotEstimate estimate_pivot_probabilities(const WeightedVotingGame& game,
                                           const PreferenceModel& model,
                                           const ConstituencyPartition& partition,
                                           std::uint64_t replications,
                                           std::uint64_t seed,
                                           const RunOptions& opts = {});

InfluenceProfile influence_profile(const PivotEstimate& estimate,
                                   const ConstituencyPartition& partition,
                                   std::int64_t population_total = 0);

// Fraction of replications whose pivotal delegate sits within m^(-3/8) of
// the common median. Requires the i.i.d. model (shock_scale 0 or
// degenerate h) so all delegates share the median of g.
double pivot_concentration_rate(const WeightedVotingGame& game,
                                const PreferenceModel& model,
                                const ConstituencyPartition& partition,
                                std::uint64_t replications, std::uint64_t seed,
                                unsigned threads = 1);

// CSV "constituency,size,weight,pivot_prob,std_err,per_capita".
std::string estimate_csv(const PivotEstimate& estimate,
                         const ConstituencyPartition& partition,
                         const WeightedVotingGame& game);

}  // namespace twotier
