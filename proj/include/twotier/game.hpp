#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace twotier {

// Weighted voting rule [q^m; w_1,...,w_m] with relative quota
// q in [0.5, 1). A coalition wins iff its combined weight strictly
// exceeds q * (total weight); ties at the quota lose.
struct WeightedVotingGame {
    double quota_fraction;
    std::vector<double> weights;

    WeightedVotingGame(double quota, std::vector<double> w);

    std::size_t size() const { return weights.size(); }
    double total_weight() const;
    double absolute_quota() const { return quota_fraction * total_weight(); }
    bool integral_weights() const;
    std::string describe() const;
};

// Set of representative indices, 0-based, distinct, within bounds.
struct Coalition {
    std::vector<int> members;
};

enum class IndexKind { shapley, banzhaf };

struct PowerIndexVector {
    std::vector<double> values;
    IndexKind kind = IndexKind::shapley;
};

// Strict quota comparison shared by every code path. Treats sums within
// 1e-9 relative of the quota as ties (losing), which reproduces exact
// rational semantics for quotas like 2/3 held in doubles.
bool exceeds_quota(double sum, double absolute_quota);

// Smallest integer weight total that wins under the game's quota.
std::int64_t winning_threshold(double quota_fraction, std::int64_t total_weight);

bool is_winning(const WeightedVotingGame& game, const Coalition& coalition);

// Exact Shapley value via per-player subset enumeration (Gray code).
// Accepts real weights; m is capped at 20.
PowerIndexVector shapley_exact(const WeightedVotingGame& game);

// Exact Shapley value via generating-function counting of coalitions by
// (cardinality, weight). Requires nonnegative integer weights; runs in
// O(m^2 * sum(w)) time.
PowerIndexVector shapley_dp(const WeightedVotingGame& game);

// Raw (non-normalized) Penrose-Banzhaf index: swings / 2^(m-1).
// Same preconditions as shapley_dp.
PowerIndexVector banzhaf(const WeightedVotingGame& game);

enum class SweepDirection { left_to_right, right_to_left };

// Index (0-based) of the pivotal representative: sort representatives by
// ideal point, accumulate weights until the running total strictly exceeds
// the absolute quota. Ties in ideal points break by ascending index.
// right_to_left runs the mirrored sweep from the largest ideal point.
int pivotal_index(const WeightedVotingGame& game, std::span<const double> ideal_points,
                  SweepDirection direction = SweepDirection::left_to_right);

bool weights_are_integral(std::span<const double> weights);

// Scales normalized weights to integers: round(w_i / sum(w) * resolution),
// reduced by their gcd. At least one entry stays positive.
std::vector<std::int64_t> rationalize_weights(std::span<const double> weights,
                                              std::int64_t resolution);

// Plain-text game record: first token the quota fraction, then weights.
WeightedVotingGame parse_game_text(std::istream& in);
WeightedVotingGame load_game_file(const std::string& path);
std::string game_to_text(const WeightedVotingGame& game);

// CSV rows "index,value,kind" (1-based indices), one block per vector.
std::string power_index_csv(std::span<const PowerIndexVector> vectors);

}  // namespace twotier
