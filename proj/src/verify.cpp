#include "twotier/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "twotier/game.hpp"
#include "twotier/pivot_mc.hpp"
#include "twotier/stats.hpp"

namespace twotier {

namespace {

// Largest-remainder apportionment of m delegates to the type shares.
std::vector<std::size_t> type_counts(std::span<const ReplicaType> types, std::int64_t m) {
    const std::size_t r = types.size();
    std::vector<std::size_t> counts(r);
    std::vector<std::pair<double, std::size_t>> rema(r);
    std::int64_t assigned = 0;
    for (std::size_t t = 0; t < r; ++t) {
        const double exact = types[t].share * static_cast<double>(m);
        counts[t] = static_cast<std::size_t>(std::floor(exact));
        assigned += static_cast<std::int64_t>(counts[t]);
        rema[t] = {-(exact - std::floor(exact)), t};
    }
    std::sort(rema.begin(), rema.end());
    for (std::int64_t k = 0; k < m - assigned; ++k) ++counts[rema[static_cast<std::size_t>(k)].second];
    return counts;
}

struct TypeEstimate {
    std::vector<double> per_rep_prob;  // aggregated type prob / type count
    std::vector<double> per_rep_se;
};

TypeEstimate estimate_by_type(std::span<const ReplicaType> types, std::int64_t m,
                              std::uint64_t replications, std::uint64_t seed,
                              unsigned threads) {
    const auto counts = type_counts(types, m);
    std::vector<double> weights;
    std::vector<std::int64_t> sizes;
    std::vector<std::size_t> type_of;
    for (std::size_t t = 0; t < types.size(); ++t) {
        if (counts[t] == 0)
            throw std::invalid_argument("pivot ratio check: a type has no delegates at m=" +
                                        std::to_string(m));
        for (std::size_t k = 0; k < counts[t]; ++k) {
            weights.push_back(types[t].weight);
            sizes.push_back(types[t].size);
            type_of.push_back(t);
        }
    }
    WeightedVotingGame game(0.5, weights);
    ConstituencyPartition partition(sizes);
    PreferenceModel model(DistributionSpec::uniform(-0.5, 0.5),
                          DistributionSpec::degenerate(0.0), 0.0);
    RunOptions opts;
    opts.threads = threads;
    const PivotEstimate est =
        estimate_pivot_probabilities(game, model, partition, replications, seed, opts);

    TypeEstimate out;
    out.per_rep_prob.assign(types.size(), 0.0);
    out.per_rep_se.assign(types.size(), 0.0);
    std::vector<std::uint64_t> agg(types.size(), 0);
    for (std::size_t i = 0; i < type_of.size(); ++i) agg[type_of[i]] += est.counts[i];
    const double R = static_cast<double>(replications);
    for (std::size_t t = 0; t < types.size(); ++t) {
        const double p = static_cast<double>(agg[t]) / R;
        const double c = static_cast<double>(counts[t]);
        out.per_rep_prob[t] = p / c;
        out.per_rep_se[t] = std::sqrt(p * (1.0 - p) / R) / c;
    }
    return out;
}

}  // namespace

std::vector<CheckReport> check_pivot_ratio_limit(std::span<const ReplicaType> types,
                                                 std::span<const std::int64_t> m_grid,
                                                 std::uint64_t replications,
                                                 std::uint64_t seed,
                                                 const VerifyOptions& opts) {
    if (types.size() < 2)
        throw std::invalid_argument("pivot ratio check: need at least two types");
    if (m_grid.empty() || !std::is_sorted(m_grid.begin(), m_grid.end()))
        throw std::invalid_argument("pivot ratio check: m grid must be sorted and nonempty");
    double share_sum = 0.0;
    for (const auto& t : types) share_sum += t.share;
    if (std::fabs(share_sum - 1.0) > 1e-9)
        throw std::invalid_argument("pivot ratio check: type shares must sum to 1");

    // Limit ratio of type 0 against each other type; g(M) cancels, so the
    // limit depends only on weights and sqrt of sizes.
    const std::size_t pairs = types.size() - 1;
    std::vector<double> limit(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
        limit[p] = (types[0].weight * asymptotic_median_density(1.0, types[0].size)) /
                   (types[p + 1].weight * asymptotic_median_density(1.0, types[p + 1].size));
    }

    std::vector<CheckReport> reports;
    std::vector<std::vector<double>> err(pairs), se(pairs);

    for (std::size_t gi = 0; gi < m_grid.size(); ++gi) {
        const std::int64_t m = m_grid[gi];
        const auto te = estimate_by_type(types, m, replications, derive_seed(seed, gi),
                                         opts.threads);
        for (std::size_t p = 0; p < pairs; ++p) {
            CheckReport rep;
            rep.replications = replications;
            rep.seed = seed;
            rep.expected = limit[p];
            std::ostringstream cfg;
            cfg << "m=" << m << " type0=(w=" << types[0].weight << ",n=" << types[0].size
                << ") type" << p + 1 << "=(w=" << types[p + 1].weight
                << ",n=" << types[p + 1].size << ")";
            rep.config = cfg.str();
            rep.name = "pivot-ratio-limit m=" + std::to_string(m);

            const double pa = te.per_rep_prob[0];
            const double pb = te.per_rep_prob[p + 1];
            if (pb <= 0.0 || pa <= 0.0) {
                rep.observed = std::numeric_limits<double>::quiet_NaN();
                rep.pass = false;
                rep.tolerance = 0.0;
                err[p].push_back(std::numeric_limits<double>::infinity());
                se[p].push_back(0.0);
                reports.push_back(rep);
                continue;
            }
            const double ratio = pa / pb;
            const double rel = std::sqrt(std::pow(te.per_rep_se[0] / pa, 2) +
                                         std::pow(te.per_rep_se[p + 1] / pb, 2));
            const double ratio_se = ratio * rel;
            rep.observed = ratio;
            rep.tolerance = (0.4 + 3.0 * ratio_se) * opts.tolerance_scale;
            rep.pass = std::fabs(ratio - limit[p]) <= rep.tolerance;
            {
                char parts[64];
                std::snprintf(parts, sizeof parts, " model_tol=0.4 mc_se=%.3g", ratio_se);
                rep.config += parts;
            }
            rep.hard = gi + 1 == m_grid.size();
            err[p].push_back(std::fabs(ratio - limit[p]));
            se[p].push_back(ratio_se);
            reports.push_back(rep);
        }
    }

    // Error trend across the m grid: nonincreasing up to twice the noise.
    for (std::size_t p = 0; p < pairs; ++p) {
        for (std::size_t gi = 1; gi < m_grid.size(); ++gi) {
            CheckReport rep;
            rep.name = "pivot-ratio-trend m=" + std::to_string(m_grid[gi - 1]) + "->" +
                       std::to_string(m_grid[gi]);
            rep.config = "pair type0/type" + std::to_string(p + 1);
            rep.replications = replications;
            rep.seed = seed;
            rep.observed = err[p][gi] - err[p][gi - 1];
            rep.expected = 0.0;
            rep.tolerance = 2.0 * (se[p][gi] + se[p][gi - 1]) * opts.tolerance_scale;
            rep.pass = rep.observed <= rep.tolerance;
            reports.push_back(rep);
        }
    }
    return reports;
}

std::vector<CheckReport> check_shock_shapley_limit(double quota_fraction,
                                                   std::span<const std::int64_t> weights,
                                                   std::span<const std::int64_t> sizes,
                                                   const DistributionSpec& g,
                                                   const DistributionSpec& h,
                                                   std::span<const double> t_grid,
                                                   std::uint64_t replications,
                                                   std::uint64_t seed,
                                                   const VerifyOptions& opts) {
    if (h.is_degenerate())
        throw std::invalid_argument("shock limit check: h must be non-degenerate");
    if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("shock limit check: t grid must be sorted and nonempty");
    if (weights.size() != sizes.size())
        throw std::invalid_argument("shock limit check: weights and sizes disagree");

    std::vector<double> w(weights.begin(), weights.end());
    WeightedVotingGame game(quota_fraction, w);
    ConstituencyPartition partition(std::vector<std::int64_t>(sizes.begin(), sizes.end()));
    const PowerIndexVector phi = shapley_dp(game);

    std::vector<CheckReport> reports;
    std::vector<double> errs, ses;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        PreferenceModel model(g, h, t_grid[k]);
        RunOptions ro;
        ro.threads = opts.threads;
        const PivotEstimate est = estimate_pivot_probabilities(
            game, model, partition, replications, derive_seed(seed, k), ro);
        double max_err = 0.0, max_se = 0.0;
        for (std::size_t i = 0; i < phi.values.size(); ++i) {
            max_err = std::max(max_err, std::fabs(est.probabilities[i] - phi.values[i]));
            max_se = std::max(max_se, est.std_errors[i]);
        }
        errs.push_back(max_err);
        ses.push_back(max_se);

        CheckReport rep;
        rep.name = "shock-shapley-limit t=" + std::to_string(t_grid[k]);
        std::ostringstream cfg;
        cfg << game.describe() << " " << partition.describe();
        rep.config = cfg.str();
        rep.observed = max_err;
        rep.expected = 0.0;
        rep.tolerance = (0.01 + 3.0 * max_se) * opts.tolerance_scale;
        rep.pass = max_err <= rep.tolerance;
        {
            char parts[64];
            std::snprintf(parts, sizeof parts, " model_tol=0.01 mc_se=%.3g", max_se);
            rep.config += parts;
        }
        rep.hard = k + 1 == t_grid.size();
        rep.replications = replications;
        rep.seed = seed;
        reports.push_back(rep);
    }
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        CheckReport rep;
        rep.name = "shock-shapley-trend t=" + std::to_string(t_grid[k - 1]) + "->" +
                   std::to_string(t_grid[k]);
        rep.config = game.describe();
        rep.observed = errs[k] - errs[k - 1];
        rep.expected = 0.0;
        rep.tolerance = 2.0 * (ses[k] + ses[k - 1]) * opts.tolerance_scale;
        rep.pass = rep.observed <= rep.tolerance;
        rep.replications = replications;
        rep.seed = seed;
        reports.push_back(rep);
    }
    return reports;
}

std::vector<CheckReport> check_median_normality(const DistributionSpec& g,
                                                std::int64_t n,
                                                std::uint64_t replications,
                                                std::uint64_t seed,
                                                const VerifyOptions& opts) {
    const double center = theoretical_median(g);
    const double g_at = density_at(g, center);
    if (!(g_at > 0.0))
        throw std::invalid_argument("median normality check: zero density at the median");

    std::vector<double> medians(replications);
    for (std::uint64_t r = 0; r < replications; ++r) {
        RandomStream rs = replication_stream(seed, r, 0);
        medians[r] = sample_constituency_median(g, n, rs);
    }

    const double scale = 2.0 * g_at * std::sqrt(static_cast<double>(n));
    std::vector<double> rescaled(replications);
    for (std::uint64_t r = 0; r < replications; ++r)
        rescaled[r] = scale * (medians[r] - center);

    const KsResult ks = ks_test(rescaled, [](double x) { return normal_cdf(x); });
    const double critical = kolmogorov_critical(0.01);

    std::vector<CheckReport> reports;
    CheckReport ks_rep;
    ks_rep.name = "median-normality-ks n=" + std::to_string(n);
    ks_rep.config = "g=" + g.describe();
    ks_rep.observed = ks.scaled;
    ks_rep.expected = critical;
    ks_rep.tolerance = critical * opts.tolerance_scale;
    ks_rep.pass = ks.scaled <= ks_rep.tolerance;
    ks_rep.replications = replications;
    ks_rep.seed = seed;
    reports.push_back(ks_rep);

    CheckReport var_rep;
    var_rep.name = "median-variance n=" + std::to_string(n);
    var_rep.config = "g=" + g.describe();
    var_rep.observed = variance_of(medians);
    var_rep.expected = asymptotic_median_variance(g_at, n);
    // Model allowance plus the sampling noise of a variance estimate,
    // whose relative standard error is about sqrt(2/R).
    const double rel_se = std::sqrt(2.0 / static_cast<double>(replications - 1));
    var_rep.tolerance =
        (0.02 + 3.0 * rel_se) * var_rep.expected * opts.tolerance_scale;
    {
        char parts[64];
        std::snprintf(parts, sizeof parts, " model_tol=0.02 mc_se=%.3g", rel_se);
        var_rep.config += parts;
    }
    var_rep.pass = std::fabs(var_rep.observed - var_rep.expected) <= var_rep.tolerance;
    // The exact Beta law of the median rank pins the uniform case; other
    // families only have the asymptotic formula behind them.
    var_rep.hard = g.family == DistFamily::uniform;
    var_rep.replications = replications;
    var_rep.seed = seed;
    reports.push_back(var_rep);
    return reports;
}

CheckReport check_square_root_rule(const ConstituencyPartition& partition,
                                   std::uint64_t replications, std::uint64_t seed,
                                   const VerifyOptions& opts,
                                   double deviation_allowance) {
    std::vector<double> weights(partition.size());
    for (std::size_t i = 0; i < partition.size(); ++i)
        weights[i] = std::sqrt(static_cast<double>(partition.sizes[i]));
    WeightedVotingGame game(0.5, std::move(weights));
    PreferenceModel model(DistributionSpec::uniform(-0.5, 0.5),
                          DistributionSpec::degenerate(0.0), 0.0);
    RunOptions ro;
    ro.threads = opts.threads;
    const PivotEstimate est =
        estimate_pivot_probabilities(game, model, partition, replications, seed, ro);

    const double total = static_cast<double>(partition.total_population());
    double max_dev = 0.0, max_se = 0.0;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        const double scale = total / static_cast<double>(partition.sizes[i]);
        max_dev = std::max(max_dev, std::fabs(est.probabilities[i] * scale - 1.0));
        max_se = std::max(max_se, est.std_errors[i] * scale);
    }

    CheckReport rep;
    rep.name = "square-root-rule m=" + std::to_string(partition.size());
    rep.config = partition.describe();
    rep.observed = max_dev;
    rep.expected = 0.0;
    rep.tolerance = (deviation_allowance + 3.0 * max_se) * opts.tolerance_scale;
    rep.pass = max_dev <= rep.tolerance;
    {
        char parts[64];
        std::snprintf(parts, sizeof parts, " model_tol=%.3g mc_se=%.3g",
                      deviation_allowance, max_se);
        rep.config += parts;
    }
    rep.hard = partition.size() >= 5;
    rep.replications = replications;
    rep.seed = seed;
    return rep;
}

bool all_hard_pass(std::span<const CheckReport> reports) {
    for (const auto& r : reports)
        if (r.hard && !r.pass) return false;
    return true;
}

std::string reports_csv(std::span<const CheckReport> reports) {
    std::string s = "name,config,observed,expected,tolerance,pass,hard,replications,seed\n";
    char buf[160];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d,%d,%llu,%llu\n", r.observed,
                      r.expected, r.tolerance, r.pass ? 1 : 0, r.hard ? 1 : 0,
                      static_cast<unsigned long long>(r.replications),
                      static_cast<unsigned long long>(r.seed));
        s += '"' + r.name + "\",\"" + r.config + "\"," + buf;
    }
    return s;
}

void print_reports(std::ostream& os, std::span<const CheckReport> reports) {
    for (const auto& r : reports) {
        char line[256];
        std::snprintf(line, sizeof line, "%-6s %-42s observed=%-12.6g expected=%-12.6g tol=%-10.4g %s",
                      r.pass ? "PASS" : (r.hard ? "FAIL" : "note"), r.name.c_str(),
                      r.observed, r.expected, r.tolerance, r.config.c_str());
        os << line << "\n";
    }
}

}  // namespace twotier
