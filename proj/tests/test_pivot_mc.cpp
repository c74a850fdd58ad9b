#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twotier/pivot_mc.hpp"

using namespace twotier;

namespace {

PreferenceModel iid_uniform() {
    return PreferenceModel(DistributionSpec::uniform(-0.5, 0.5),
                           DistributionSpec::degenerate(0), 0.0);
}

}  // namespace

TEST_CASE("symmetric three-way game gives equal pivot probabilities") {
    WeightedVotingGame game(0.5, {1, 1, 1});
    ConstituencyPartition part({101, 101, 101});
    const auto est = estimate_pivot_probabilities(game, iid_uniform(), part, 100000, 7);
    std::uint64_t total = 0;
    for (auto c : est.counts) total += c;
    CHECK(total == est.replications);
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::fabs(est.probabilities[i] - 1.0 / 3.0) < 3 * est.std_errors[i]);
        sum += est.probabilities[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a dummy player is never pivotal") {
    WeightedVotingGame game(0.5, {1, 2, 2, 2});
    ConstituencyPartition part({51, 51, 51, 51});
    const auto est = estimate_pivot_probabilities(game, iid_uniform(), part, 50000, 99);
    CHECK(est.counts[0] == 0);
}

TEST_CASE("pivot counts are invariant under weight rescaling") {
    ConstituencyPartition part({101, 301, 501});
    const auto a = estimate_pivot_probabilities(WeightedVotingGame(0.5, {1, 2, 3}),
                                                iid_uniform(), part, 20000, 31);
    const auto b = estimate_pivot_probabilities(WeightedVotingGame(0.5, {2.5, 5, 7.5}),
                                                iid_uniform(), part, 20000, 31);
    CHECK(a.counts == b.counts);
}

TEST_CASE("estimates are bit-identical across thread counts and reruns") {
    WeightedVotingGame game(0.6, {3, 2, 1, 1, 1});
    ConstituencyPartition part({101, 303, 55, 11, 405});
    PreferenceModel model(DistributionSpec::uniform(-0.5, 0.5),
                          DistributionSpec::normal(0, 1), 0.7);
    RunOptions one, four;
    one.threads = 1;
    four.threads = 4;
    const auto a = estimate_pivot_probabilities(game, model, part, 30000, 2222, one);
    const auto b = estimate_pivot_probabilities(game, model, part, 30000, 2222, four);
    const auto c = estimate_pivot_probabilities(game, model, part, 30000, 2222, four);
    CHECK(a.counts == b.counts);
    CHECK(b.counts == c.counts);
}

TEST_CASE("estimate validates dimensions and replications") {
    WeightedVotingGame game(0.5, {1, 1});
    ConstituencyPartition part({3, 3, 3});
    CHECK_THROWS_AS(estimate_pivot_probabilities(game, iid_uniform(), part, 10, 1),
                    std::invalid_argument);
    ConstituencyPartition two({3, 3});
    CHECK_THROWS_AS(estimate_pivot_probabilities(game, iid_uniform(), two, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("influence profile from hand-computed values") {
    PivotEstimate est;
    est.probabilities = {1.0, 0.0};
    est.counts = {10, 0};
    est.replications = 10;
    est.std_errors = {0.0, 0.0};
    ConstituencyPartition part({3, 5});
    const auto prof = influence_profile(est, part);
    CHECK(prof.per_capita[0] == doctest::Approx(1.0 / 3.0));
    CHECK(prof.per_capita[1] == 0.0);
    CHECK(prof.l1_distance == doctest::Approx(1.25));
}

TEST_CASE("influence profile vanishes at the egalitarian fixed point") {
    ConstituencyPartition part({3, 5, 7});
    PivotEstimate est;
    est.replications = 15;
    est.counts = {3, 5, 7};
    est.probabilities = {3.0 / 15, 5.0 / 15, 7.0 / 15};
    est.std_errors = {0, 0, 0};
    CHECK(influence_profile(est, part).l1_distance < 1e-15);
}

TEST_CASE("left and right sweeps agree on symmetric models") {
    WeightedVotingGame game(0.7, {3, 1, 2, 1, 2});
    ConstituencyPartition part({101, 101, 101, 101, 101});
    RunOptions left, right;
    right.direction = SweepDirection::right_to_left;
    const auto a = estimate_pivot_probabilities(game, iid_uniform(), part, 200000, 5, left);
    const auto b = estimate_pivot_probabilities(game, iid_uniform(), part, 200000, 5, right);
    for (std::size_t i = 0; i < 5; ++i) {
        const double noise = 6.0 * (a.std_errors[i] + b.std_errors[i]) + 1e-9;
        CHECK(std::fabs(a.probabilities[i] - b.probabilities[i]) < noise);
    }
}

TEST_CASE("pivot concentration rate") {
    SUBCASE("single delegate inside the unit window") {
        WeightedVotingGame game(0.5, {1});
        ConstituencyPartition part({3});
        const double rate =
            pivot_concentration_rate(game, iid_uniform(), part, 5000, 17);
        CHECK(rate == 1.0);  // support of the median is inside [-1, 1]
    }
    SUBCASE("deterministic given the seed") {
        WeightedVotingGame game(0.5, std::vector<double>(11, 1.0));
        ConstituencyPartition part(std::vector<std::int64_t>(11, 3));
        const double r1 = pivot_concentration_rate(game, iid_uniform(), part, 20000, 4, 1);
        const double r2 = pivot_concentration_rate(game, iid_uniform(), part, 20000, 4, 3);
        CHECK(r1 == r2);
    }
    SUBCASE("requires the i.i.d. model") {
        WeightedVotingGame game(0.5, {1});
        ConstituencyPartition part({3});
        PreferenceModel shock(DistributionSpec::uniform(-0.5, 0.5),
                              DistributionSpec::normal(0, 1), 1.0);
        CHECK_THROWS_AS(pivot_concentration_rate(game, shock, part, 100, 1),
                        std::invalid_argument);
    }
}

TEST_CASE("estimate csv layout") {
    WeightedVotingGame game(0.5, {1, 1});
    ConstituencyPartition part({3, 3});
    const auto est = estimate_pivot_probabilities(game, iid_uniform(), part, 1000, 1);
    const auto csv = estimate_csv(est, part, game);
    CHECK(csv.find("constituency,size,weight,pivot_prob,std_err,per_capita") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
