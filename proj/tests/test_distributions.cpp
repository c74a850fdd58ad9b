#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "twotier/distributions.hpp"
#include "twotier/rng.hpp"
#include "twotier/stats.hpp"

using namespace twotier;

TEST_CASE("density values") {
    CHECK(density_at(DistributionSpec::uniform(-0.5, 0.5), 0.0) == 1.0);
    CHECK(density_at(DistributionSpec::normal(0, 1), 0.0) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(density_at(DistributionSpec::uniform(0, 1), 2.0) == 0.0);
    CHECK_THROWS_AS(density_at(DistributionSpec::degenerate(1.0), 0.0),
                    std::invalid_argument);
}

TEST_CASE("theoretical medians") {
    CHECK(theoretical_median(DistributionSpec::uniform(-0.5, 0.5)) == 0.0);
    CHECK(theoretical_median(DistributionSpec::normal(3, 4)) == 3.0);
    CHECK(theoretical_median(DistributionSpec::degenerate(1.5)) == 1.5);
}

TEST_CASE("spec validation and parsing") {
    CHECK_THROWS_AS(DistributionSpec::uniform(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::normal(0, -1), std::invalid_argument);
    CHECK(DistributionSpec::normal(0, 0).is_degenerate());

    const auto u = parse_distribution(" uniform(-0.5, 0.5) ");
    CHECK(u.family == DistFamily::uniform);
    CHECK(u.p1 == -0.5);
    const auto n = parse_distribution("normal(0,1e-6)");
    CHECK(n.p2 == 1e-6);
    const auto d = parse_distribution("degenerate(2)");
    CHECK(d.p1 == 2.0);
    CHECK_THROWS_AS(parse_distribution("cauchy(0,1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution("uniform(0)"), std::invalid_argument);
}

TEST_CASE("normal quantile and cdf invert each other") {
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963985).epsilon(1e-8));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1 - 1e-6})
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
}

TEST_CASE("inverse_cdf") {
    CHECK(inverse_cdf(DistributionSpec::uniform(2, 4), 0.25) == doctest::Approx(2.5));
    CHECK(inverse_cdf(DistributionSpec::normal(1, 4), 0.975) ==
          doctest::Approx(1 + 2 * 1.959963985).epsilon(1e-8));
    CHECK_THROWS_AS(inverse_cdf(DistributionSpec::degenerate(0), 0.5),
                    std::invalid_argument);
}

TEST_CASE("kolmogorov distribution") {
    CHECK(kolmogorov_sf(1e9) == 0.0);
    CHECK(kolmogorov_sf(0.0) == 1.0);
    // Classical critical values.
    CHECK(kolmogorov_critical(0.05) == doctest::Approx(1.3581).epsilon(1e-3));
    CHECK(kolmogorov_critical(0.01) == doctest::Approx(1.6276).epsilon(1e-3));
}

TEST_CASE("chi-square tail") {
    CHECK(chi_square_sf(3.841458821, 1) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(chi_square_sf(5.991464547, 2) == doctest::Approx(0.05).epsilon(1e-6));
    CHECK(chi_square_sf(0.0, 5) == 1.0);
}

TEST_CASE("regularized incomplete gamma against erf") {
    // P(1/2, x) = erf(sqrt(x)).
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0})
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
}

TEST_CASE("philox streams are deterministic and distinct") {
    RandomStream a(123, 5), b(123, 5), c(123, 6);
    std::vector<std::uint64_t> xs, ys, zs;
    for (int i = 0; i < 16; ++i) {
        xs.push_back(a.next_u64());
        ys.push_back(b.next_u64());
        zs.push_back(c.next_u64());
    }
    CHECK(xs == ys);
    CHECK(xs != zs);

    RandomStream r1 = replication_stream(9, 1, 2);
    RandomStream r2 = replication_stream(9, 2, 1);
    CHECK(r1.next_u64() != r2.next_u64());
}

TEST_CASE("uniform01 passes a KS test against U(0,1)") {
    RandomStream rs(mix64(2024), 0);
    std::vector<double> xs(50000);
    for (auto& x : xs) x = rs.uniform01();
    const auto ks = ks_test(xs, [](double x) { return x; });
    CHECK(ks.p_value > 0.01);
}

TEST_CASE("normal and gamma moments") {
    RandomStream rs(mix64(7), 0);
    const int n = 200000;
    std::vector<double> zs(n), gs(n);
    for (int i = 0; i < n; ++i) {
        zs[static_cast<std::size_t>(i)] = rs.normal();
        gs[static_cast<std::size_t>(i)] = rs.gamma(3.5);
    }
    CHECK(mean_of(zs) == doctest::Approx(0.0).epsilon(0.01));
    CHECK(variance_of(zs) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(mean_of(gs) == doctest::Approx(3.5).epsilon(0.02));
    CHECK(variance_of(gs) == doctest::Approx(3.5).epsilon(0.05));

    const auto ks = ks_test(zs, [](double x) { return normal_cdf(x); });
    CHECK(ks.p_value > 0.001);
}

TEST_CASE("beta moments match the closed form") {
    RandomStream rs(mix64(11), 0);
    const int n = 200000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = rs.beta(51, 51);
    // Var Beta(a,a) = 1 / (4 (2a+1)).
    CHECK(mean_of(xs) == doctest::Approx(0.5).epsilon(0.002));
    CHECK(variance_of(xs) == doctest::Approx(1.0 / (4.0 * 103.0)).epsilon(0.02));
}

TEST_CASE("two-sample KS separates shifted samples") {
    RandomStream rs(mix64(3), 0);
    std::vector<double> a(20000), b(20000), c(20000);
    for (int i = 0; i < 20000; ++i) {
        a[static_cast<std::size_t>(i)] = rs.normal();
        b[static_cast<std::size_t>(i)] = rs.normal();
        c[static_cast<std::size_t>(i)] = rs.normal() + 0.1;
    }
    CHECK(ks_test_two_sample(a, b).p_value > 0.01);
    CHECK(ks_test_two_sample(a, c).p_value < 1e-6);
}
