#include "twotier/pivot_mc.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace twotier {

namespace {

// Runs fn(rep) for rep in [0, replications), split into contiguous blocks
// across workers. Each worker owns a state object; states merge in worker
// order afterwards, so the combined result is schedule-independent.
template <typename State, typename PerRep>
std::vector<State> run_replications(std::uint64_t replications, unsigned threads,
                                    std::size_t state_size, const PerRep& fn) {
    if (threads == 0) threads = 1;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(replications, 1)));
    std::vector<State> states(workers, State(state_size));
    if (workers == 1) {
        for (std::uint64_t r = 0; r < replications; ++r) fn(r, states[0]);
        return states;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        const std::uint64_t lo = replications * t / workers;
        const std::uint64_t hi = replications * (t + 1) / workers;
        pool.emplace_back([&, t, lo, hi] {
            for (std::uint64_t r = lo; r < hi; ++r) fn(r, states[t]);
        });
    }
    for (auto& th : pool) th.join();
    return states;
}

struct CountState {
    std::vector<std::uint64_t> counts;
    std::vector<double> points;
    explicit CountState(std::size_t m) : counts(m, 0), points(m, 0.0) {}
};

}  // namespace

PivotEstimate estimate_pivot_probabilities(const WeightedVotingGame& game,
                                           const PreferenceModel& model,
                                           const ConstituencyPartition& partition,
                                           std::uint64_t replications,
                                           std::uint64_t seed,
                                           const RunOptions& opts) {
    const std::size_t m = partition.size();
    if (game.size() != m)
        throw std::invalid_argument("estimate_pivot_probabilities: weight count != partition size");
    if (replications == 0)
        throw std::invalid_argument("estimate_pivot_probabilities: replications must be >= 1");

    auto states = run_replications<CountState>(
        replications, opts.threads, m, [&](std::uint64_t rep, CountState& st) {
            sample_ideal_points(model, partition, seed, rep, st.points);
            const int p = pivotal_index(game, st.points, opts.direction);
            ++st.counts[static_cast<std::size_t>(p)];
        });

    PivotEstimate est;
    est.counts.assign(m, 0);
    for (const auto& st : states)
        for (std::size_t i = 0; i < m; ++i) est.counts[i] += st.counts[i];
    est.replications = replications;
    est.seed = seed;
    est.game_descriptor = game.describe();
    est.model_descriptor = model.describe() + " " + partition.describe();
    est.probabilities.resize(m);
    est.std_errors.resize(m);
    const double r = static_cast<double>(replications);
    for (std::size_t i = 0; i < m; ++i) {
        const double p = static_cast<double>(est.counts[i]) / r;
        est.probabilities[i] = p;
        est.std_errors[i] = std::sqrt(p * (1.0 - p) / r);
    }
    return est;
}

InfluenceProfile influence_profile(const PivotEstimate& estimate,
                                   const ConstituencyPartition& partition,
                                   std::int64_t population_total) {
    const std::size_t m = partition.size();
    if (estimate.probabilities.size() != m)
        throw std::invalid_argument("influence_profile: estimate and partition disagree");
    if (population_total <= 0) population_total = partition.total_population();

    InfluenceProfile prof;
    prof.per_capita.resize(m);
    const double ideal = 1.0 / static_cast<double>(population_total);
    double l1 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double n_i = static_cast<double>(partition.sizes[i]);
        prof.per_capita[i] = estimate.probabilities[i] / n_i;
        l1 += n_i * std::fabs(prof.per_capita[i] - ideal);
    }
    prof.l1_distance = l1;
    return prof;
}

double pivot_concentration_rate(const WeightedVotingGame& game,
                                const PreferenceModel& model,
                                const ConstituencyPartition& partition,
                                std::uint64_t replications, std::uint64_t seed,
                                unsigned threads) {
    if (!model.iid())
        throw std::invalid_argument("pivot_concentration_rate: requires the i.i.d. model");
    const std::size_t m = partition.size();
    if (game.size() != m)
        throw std::invalid_argument("pivot_concentration_rate: weight count != partition size");
    const double center = theoretical_median(model.g);
    const double half_width = std::pow(static_cast<double>(m), -0.375);

    struct HitState {
        std::uint64_t hits = 0;
        std::vector<double> points;
        explicit HitState(std::size_t mm) : points(mm, 0.0) {}
    };
    auto states = run_replications<HitState>(
        replications, threads, m, [&](std::uint64_t rep, HitState& st) {
            sample_ideal_points(model, partition, seed, rep, st.points);
            const int p = pivotal_index(game, st.points);
            if (std::fabs(st.points[static_cast<std::size_t>(p)] - center) <= half_width)
                ++st.hits;
        });
    std::uint64_t hits = 0;
    for (const auto& st : states) hits += st.hits;
    return static_cast<double>(hits) / static_cast<double>(replications);
}

std::string estimate_csv(const PivotEstimate& estimate,
                         const ConstituencyPartition& partition,
                         const WeightedVotingGame& game) {
    const std::size_t m = partition.size();
    if (estimate.probabilities.size() != m || game.size() != m)
        throw std::invalid_argument("estimate_csv: inconsistent inputs");
    std::string s = "constituency,size,weight,pivot_prob,std_err,per_capita\n";
    char buf[160];
    for (std::size_t i = 0; i < m; ++i) {
        const double per_capita =
            estimate.probabilities[i] / static_cast<double>(partition.sizes[i]);
        std::snprintf(buf, sizeof buf, "%zu,%lld,%.12g,%.12g,%.12g,%.12g\n", i + 1,
                      static_cast<long long>(partition.sizes[i]), game.weights[i],
                      estimate.probabilities[i], estimate.std_errors[i], per_capita);
        s += buf;
    }
    return s;
}

}  // namespace twotier
