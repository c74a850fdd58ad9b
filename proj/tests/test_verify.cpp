#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "twotier/verify.hpp"

using namespace twotier;

TEST_CASE("median normality check passes for uniform g at n=1001") {
    const auto reports =
        check_median_normality(DistributionSpec::uniform(0, 1), 1001, 20000, 314);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].pass);  // KS against N(0,1)
    CHECK(reports[1].pass);  // variance against 1/(n (2 g(M))^2)
    CHECK(reports[1].hard);
    CHECK(all_hard_pass(reports));
}

TEST_CASE("median normality check fails for a single draw") {
    // n=1: the rescaled draw has variance (2/sqrt(2 pi))^2 ~ 0.637, so the
    // KS test must reject.
    const auto reports =
        check_median_normality(DistributionSpec::normal(0, 1), 1, 20000, 314);
    CHECK_FALSE(reports[0].pass);
}

TEST_CASE("zero tolerance scale is a working negative control") {
    VerifyOptions strict;
    strict.tolerance_scale = 0.0;
    const auto reports =
        check_median_normality(DistributionSpec::uniform(0, 1), 1001, 5000, 314, strict);
    CHECK_FALSE(reports[0].pass);
    CHECK_FALSE(reports[1].pass);
    CHECK_FALSE(all_hard_pass(reports));
}

TEST_CASE("pivot ratio check is exact on symmetric types") {
    const ReplicaType types[] = {{1.0, 101, 0.5}, {1.0, 101, 0.5}};
    const std::int64_t grid[] = {10, 30};
    const auto reports = check_pivot_ratio_limit(types, grid, 40000, 7);
    for (const auto& r : reports) {
        INFO(r.name, " observed=", r.observed);
        CHECK(r.pass);
    }
    // Limit ratio is 1 for identical types.
    CHECK(reports[0].expected == doctest::Approx(1.0));
}

TEST_CASE("pivot ratio check: ninefold size advantage gives limit 3") {
    // Equal weights, one type nine times larger: the limit ratio is the
    // square root of the size ratio.
    const ReplicaType types[] = {{1.0, 909, 0.5}, {1.0, 101, 0.5}};
    const std::int64_t grid[] = {40};
    const auto reports = check_pivot_ratio_limit(types, grid, 200000, 19);
    REQUIRE(!reports.empty());
    CHECK(reports[0].expected == doctest::Approx(3.0));
    CHECK(reports[0].pass);
}

TEST_CASE("shock limit at the nine-member reference assembly") {
    const std::int64_t weights[] = {5, 4, 3, 3, 2, 2, 2, 1, 1};
    const std::int64_t sizes[] = {3, 5, 7, 9, 11, 13, 15, 17, 19};
    const double t_grid[] = {0.0, 1.0, 10.0, 100.0};
    const auto reports = check_shock_shapley_limit(
        0.6, weights, sizes, DistributionSpec::uniform(-0.5, 0.5),
        DistributionSpec::normal(0, 1), t_grid, 200000, 41);
    // Interim t points are informational; the error bound binds at the
    // largest t and the trend reports enforce the decay.
    for (const auto& r : reports) {
        if (!r.hard) continue;
        INFO(r.name, " observed=", r.observed, " tol=", r.tolerance);
        CHECK(r.pass);
    }
    CHECK(all_hard_pass(reports));
    const auto& final_rep = reports[t_grid[3] == 100.0 ? 3 : 0];
    CHECK(final_rep.name == "shock-shapley-limit t=100.000000");
    CHECK(final_rep.pass);
}

TEST_CASE("pivot ratio check validates its configuration") {
    const ReplicaType one[] = {{1.0, 101, 1.0}};
    const std::int64_t grid[] = {10};
    CHECK_THROWS_AS(check_pivot_ratio_limit(one, grid, 100, 1), std::invalid_argument);

    const ReplicaType bad_shares[] = {{1.0, 101, 0.6}, {1.0, 101, 0.6}};
    CHECK_THROWS_AS(check_pivot_ratio_limit(bad_shares, grid, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("shock limit check on a symmetric assembly") {
    const std::int64_t weights[] = {1, 1, 1, 1, 1};
    const std::int64_t sizes[] = {7, 7, 7, 7, 7};
    const double t_grid[] = {0.0, 5.0};
    const auto reports = check_shock_shapley_limit(
        0.5, weights, sizes, DistributionSpec::uniform(-0.5, 0.5),
        DistributionSpec::normal(0, 1), t_grid, 40000, 77);
    for (const auto& r : reports) {
        INFO(r.name, " observed=", r.observed);
        CHECK(r.pass);
    }
}

TEST_CASE("shock limit check sees the dummy stay at zero") {
    const std::int64_t weights[] = {1, 2, 2, 2};
    const std::int64_t sizes[] = {3, 5, 7, 9};
    const double t_grid[] = {0.0, 100.0};
    const auto reports = check_shock_shapley_limit(
        0.5, weights, sizes, DistributionSpec::uniform(-0.5, 0.5),
        DistributionSpec::normal(0, 1), t_grid, 30000, 5);
    CHECK(all_hard_pass(reports));
}

TEST_CASE("shock limit check rejects a degenerate shock distribution") {
    const std::int64_t weights[] = {1, 1};
    const std::int64_t sizes[] = {3, 3};
    const double t_grid[] = {0.0, 1.0};
    CHECK_THROWS_AS(
        check_shock_shapley_limit(0.5, weights, sizes, DistributionSpec::uniform(0, 1),
                                  DistributionSpec::degenerate(0), t_grid, 100, 1),
        std::invalid_argument);
}

TEST_CASE("square root rule check reports per-capita deviation") {
    ConstituencyPartition part({101, 101, 101, 101, 101, 101, 101});
    const auto rep = check_square_root_rule(part, 50000, 3);
    CHECK(rep.hard);
    CHECK(rep.pass);  // symmetric case: deviation is pure noise
    CHECK(rep.observed < 0.15);

    ConstituencyPartition tiny({75, 11, 3});
    const auto soft = check_square_root_rule(tiny, 5000, 3);
    CHECK_FALSE(soft.hard);  // too few constituencies to score
}

TEST_CASE("report formatting") {
    CheckReport r;
    r.name = "demo";
    r.config = "cfg";
    r.observed = 1.5;
    r.expected = 1.0;
    r.tolerance = 0.6;
    r.pass = true;
    const CheckReport reports[] = {r};
    const auto csv = reports_csv(reports);
    CHECK(csv.find("name,config,observed,expected,tolerance,pass,hard,replications,seed") == 0);
    CHECK(csv.find("\"demo\"") != std::string::npos);
    std::ostringstream os;
    print_reports(os, reports);
    CHECK(os.str().find("PASS") != std::string::npos);
}
