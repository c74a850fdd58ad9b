#pragma once

// Brute-force reference implementations used only by tests. These stay
// independent of the library's computation paths: integer arithmetic with
// exact rational quotas, direct permutation / subset enumeration.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

// Exact winning test: sum(weights of S) * q_den > q_num * total.
inline bool coalition_wins(const std::vector<std::int64_t>& weights,
                           std::uint64_t members_mask, std::int64_t q_num,
                           std::int64_t q_den) {
    std::int64_t total = 0, sum = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        total += weights[i];
        if (members_mask & (1ULL << i)) sum += weights[i];
    }
    return sum * q_den > q_num * total;
}

// Shapley value by full permutation enumeration; m <= 10.
inline std::vector<double> shapley_by_permutations(const std::vector<std::int64_t>& weights,
                                                   std::int64_t q_num, std::int64_t q_den) {
    const std::size_t m = weights.size();
    if (m == 0 || m > 10) throw std::invalid_argument("oracle: m must be in [1,10]");
    const std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    // Smallest integer weight sum that wins: threshold = floor(q*total) + 1
    // computed exactly in integers.
    const std::int64_t threshold = (q_num * total) / q_den + 1;

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::int64_t> pivots(m, 0);
    std::int64_t n_perms = 0;
    do {
        std::int64_t cum = 0;
        for (int idx : order) {
            cum += weights[static_cast<std::size_t>(idx)];
            if (cum >= threshold) {
                ++pivots[static_cast<std::size_t>(idx)];
                break;
            }
        }
        ++n_perms;
    } while (std::next_permutation(order.begin(), order.end()));

    std::vector<double> phi(m);
    for (std::size_t i = 0; i < m; ++i)
        phi[i] = static_cast<double>(pivots[i]) / static_cast<double>(n_perms);
    return phi;
}

// Permutation enumeration scoring several quotas in one pass over the
// m! orderings. Thresholds must be given in increasing order.
inline std::vector<std::vector<double>> shapley_by_permutations_multi(
    const std::vector<std::int64_t>& weights,
    const std::vector<std::pair<std::int64_t, std::int64_t>>& quotas) {
    const std::size_t m = weights.size();
    if (m == 0 || m > 10) throw std::invalid_argument("oracle: m must be in [1,10]");
    const std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    std::vector<std::int64_t> thresholds;
    for (const auto& [num, den] : quotas) thresholds.push_back((num * total) / den + 1);
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("oracle: quotas must be increasing");

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<std::int64_t>> pivots(quotas.size(),
                                                  std::vector<std::int64_t>(m, 0));
    std::int64_t n_perms = 0;
    do {
        std::int64_t cum = 0;
        std::size_t next = 0;
        for (int idx : order) {
            cum += weights[static_cast<std::size_t>(idx)];
            while (next < thresholds.size() && cum >= thresholds[next]) {
                ++pivots[next][static_cast<std::size_t>(idx)];
                ++next;
            }
            if (next == thresholds.size()) break;
        }
        ++n_perms;
    } while (std::next_permutation(order.begin(), order.end()));

    std::vector<std::vector<double>> out(quotas.size(), std::vector<double>(m));
    for (std::size_t q = 0; q < quotas.size(); ++q)
        for (std::size_t i = 0; i < m; ++i)
            out[q][i] = static_cast<double>(pivots[q][i]) / static_cast<double>(n_perms);
    return out;
}

// Raw Banzhaf index by direct subset enumeration; m <= 20.
inline std::vector<double> banzhaf_by_subsets(const std::vector<std::int64_t>& weights,
                                              std::int64_t q_num, std::int64_t q_den) {
    const std::size_t m = weights.size();
    if (m == 0 || m > 20) throw std::invalid_argument("oracle: m must be in [1,20]");
    const std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    const std::int64_t threshold = (q_num * total) / q_den + 1;

    std::vector<double> bz(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        std::int64_t swings = 0;
        for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
            if (mask & (1ULL << i)) continue;
            std::int64_t sum = 0;
            for (std::size_t j = 0; j < m; ++j)
                if (mask & (1ULL << j)) sum += weights[j];
            if (sum < threshold && sum + weights[i] >= threshold) ++swings;
        }
        bz[i] = static_cast<double>(swings) /
                static_cast<double>(1ULL << (m - 1));
    }
    return bz;
}

// All winning coalitions as bitmasks.
inline std::vector<std::uint64_t> winning_masks(const std::vector<std::int64_t>& weights,
                                                std::int64_t q_num, std::int64_t q_den) {
    std::vector<std::uint64_t> wins;
    for (std::uint64_t mask = 0; mask < (1ULL << weights.size()); ++mask)
        if (coalition_wins(weights, mask, q_num, q_den)) wins.push_back(mask);
    return wins;
}

// Exact moments of Beta(a,b): the distribution of the median's quantile
// rank for samples of odd size n has a = b = (n+1)/2.
inline double beta_variance(double a, double b) {
    return a * b / ((a + b) * (a + b) * (a + b + 1.0));
}

}  // namespace oracle
