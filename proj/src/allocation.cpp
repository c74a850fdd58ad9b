#include "twotier/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace twotier {

const char* rule_kind_name(AllocationRuleKind kind) {
    switch (kind) {
        case AllocationRuleKind::direct_power_law: return "direct";
        case AllocationRuleKind::shapley_power_law: return "shapley";
        case AllocationRuleKind::density_rule: return "density";
    }
    return "?";
}

namespace {

void normalize(std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += x;
    if (!(s > 0.0)) throw std::invalid_argument("weights sum to zero");
    for (double& x : w) x /= s;
}

}  // namespace

std::vector<double> power_law_weights(const ConstituencyPartition& partition,
                                      double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("power_law_weights: alpha must be >= 0");
    std::vector<double> w(partition.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::pow(static_cast<double>(partition.sizes[i]), alpha);
    normalize(w);
    return w;
}

std::vector<double> density_rule_weights(const ConstituencyPartition& partition,
                                         const PreferenceModel& model) {
    const double center = theoretical_median(model.g);
    const double g_at_center = density_at(model.g, center);
    if (!(g_at_center > 0.0))
        throw std::invalid_argument("density_rule_weights: g has zero density at its median");

    const double shock_var =
        model.iid() ? 0.0 : model.shock_scale * model.shock_scale * model.h.variance();

    std::vector<double> w(partition.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double n = static_cast<double>(partition.sizes[i]);
        // Delegate ideal-point variance: sample-median part plus shock part.
        const double var = asymptotic_median_variance(g_at_center, partition.sizes[i]) + shock_var;
        // f_i(M) ~ 1/sqrt(2 pi var); constants cancel under normalization.
        w[i] = n * std::sqrt(var);
    }
    normalize(w);
    return w;
}

namespace {

// Coordinate-wise +-1 hill-climb over small-integer weight vectors,
// seeded by rounding the best iterate at several coarse resolutions.
void polish_small_game(const std::vector<double>& target, double quota_fraction,
                       InverseShapleyResult& res) {
    const std::size_t m = target.size();
    auto score = [&](const std::vector<std::int64_t>& wi,
                     PowerIndexVector& phi_out) -> double {
        bool any = false;
        for (auto x : wi) any |= x > 0;
        if (!any) return std::numeric_limits<double>::infinity();
        std::vector<double> as_real(wi.begin(), wi.end());
        phi_out = shapley_dp(WeightedVotingGame(quota_fraction, std::move(as_real)));
        double resid = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            resid = std::max(resid, std::fabs(phi_out.values[i] - target[i]));
        return resid;
    };

    for (std::int64_t resolution : {10, 15, 20, 30}) {
        auto wi = rationalize_weights(res.weights, resolution);
        PowerIndexVector phi;
        double best = score(wi, phi);
        bool improved = true;
        int evals = 0;
        while (improved && evals < 400) {
            improved = false;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::int64_t delta : {std::int64_t{1}, std::int64_t{-1}}) {
                    if (wi[i] + delta < 0) continue;
                    wi[i] += delta;
                    PowerIndexVector cand_phi;
                    const double cand = score(wi, cand_phi);
                    ++evals;
                    if (cand < best - 1e-15) {
                        best = cand;
                        phi = cand_phi;
                        improved = true;
                    } else {
                        wi[i] -= delta;
                    }
                }
            }
        }
        if (best < res.residual_linf) {
            res.residual_linf = best;
            res.weights.assign(wi.begin(), wi.end());
            res.achieved = phi;
            res.residual_history.push_back(best);
        }
    }
}

}  // namespace

InverseShapleyResult inverse_shapley(std::span<const double> target,
                                     double quota_fraction, int max_iters,
                                     double tolerance, std::int64_t resolution) {
    if (target.empty()) throw std::invalid_argument("inverse_shapley: empty target");
    std::vector<double> t(target.begin(), target.end());
    for (double x : t)
        if (!(x >= 0.0)) throw std::invalid_argument("inverse_shapley: negative target entry");
    normalize(t);  // throws if all zero

    auto evaluate = [&](const std::vector<double>& w) {
        const auto ints = rationalize_weights(w, resolution);
        std::vector<double> as_real(ints.begin(), ints.end());
        return shapley_dp(WeightedVotingGame(quota_fraction, std::move(as_real)));
    };

    InverseShapleyResult res;
    std::vector<double> w = t;
    res.residual_linf = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < std::max(1, max_iters); ++iter) {
        const PowerIndexVector phi = evaluate(w);
        double resid = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i)
            resid = std::max(resid, std::fabs(phi.values[i] - t[i]));
        if (resid < res.residual_linf) {
            res.residual_linf = resid;
            res.weights = w;
            res.achieved = phi;
        }
        res.residual_history.push_back(res.residual_linf);
        res.iterations = iter + 1;
        if (res.residual_linf < tolerance) {
            res.converged = true;
            break;
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            // Floor shields dummy players (phi_i = 0); clamp keeps steps bounded.
            const double ratio = (t[i] + 1e-12) / (phi.values[i] + 1e-12);
            const double factor = std::clamp(std::sqrt(ratio), 0.5, 2.0);
            w[i] *= factor;
        }
        normalize(w);
    }

    // With few players the feasible Shapley set is coarse and its best
    // points sit on weight ties the multiplicative trajectory cannot hit
    // (coalition sums exactly at the quota). A short integer hill-climb
    // around the best iterate finds those representations.
    if (!res.converged && t.size() <= 12) polish_small_game(t, quota_fraction, res);

    normalize(res.weights);
    return res;
}

std::vector<double> make_alpha_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("bad alpha grid");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double a = lo + step * k;
        if (a > hi + 1e-12) break;
        grid.push_back(std::min(a, hi));
    }
    return grid;
}

AlphaSearchResult optimize_alpha(const ConstituencyPartition& partition,
                                 const PreferenceModel& model,
                                 AllocationRuleKind kind,
                                 std::span<const double> alpha_grid,
                                 double quota_fraction, std::uint64_t replications,
                                 std::uint64_t seed, unsigned threads,
                                 std::int64_t resolution) {
    if (alpha_grid.empty()) throw std::invalid_argument("optimize_alpha: empty grid");
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
        throw std::invalid_argument("optimize_alpha: grid must be sorted");
    if (kind == AllocationRuleKind::density_rule)
        throw std::invalid_argument("optimize_alpha: density rule has no alpha");

    AlphaSearchResult result;
    result.kind = kind;
    result.model_descriptor = model.describe() + " " + partition.describe();

    double best_l1 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
        const double alpha = alpha_grid[k];
        std::vector<double> weights;
        if (kind == AllocationRuleKind::direct_power_law) {
            weights = power_law_weights(partition, alpha);
        } else {
            const auto target = power_law_weights(partition, alpha);
            weights = inverse_shapley(target, quota_fraction, 100, 5e-4, resolution).weights;
        }
        WeightedVotingGame game(quota_fraction, std::move(weights));
        RunOptions opts;
        opts.threads = threads;
        const PivotEstimate est = estimate_pivot_probabilities(
            game, model, partition, replications, derive_seed(seed, k), opts);
        const double l1 = influence_profile(est, partition).l1_distance;
        result.l1_by_alpha.emplace_back(alpha, l1);
        if (l1 < best_l1) {
            best_l1 = l1;
            result.alpha_star = alpha;
        }
    }
    return result;
}

std::string alpha_search_csv(const AlphaSearchResult& result) {
    std::string s = "alpha,l1,rule_kind\n";
    char buf[96];
    for (const auto& [alpha, l1] : result.l1_by_alpha) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%s\n", alpha, l1,
                      rule_kind_name(result.kind));
        s += buf;
    }
    return s;
}

}  // namespace twotier
