#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rankscreen/core_stats.hpp"
#include "rankscreen/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace rankscreen;

namespace {

// Independent O(n^2) classification of every unordered pair; the oracle the
// fast kernel is checked against.
ConcordanceCounts oracle_counts(const std::vector<double>& x, const std::vector<double>& y) {
    ConcordanceCounts c;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++c.total_pairs;
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) ++c.tied_both;
            else if (dx == 0.0) ++c.tied_x;
            else if (dy == 0.0) ++c.tied_y;
            else if (dx * dy > 0.0) ++c.concordant;
            else ++c.discordant;
        }
    }
    return c;
}

std::vector<double> random_values(SplitMix64& rng, std::size_t n, bool heavy_ties) {
    std::vector<double> v(n);
    for (auto& e : v) {
        e = heavy_ties ? std::floor(rng.uniform(0.0, 6.0)) : rng.normal();
    }
    return v;
}

}  // namespace

TEST_CASE("concordance counts match the brute-force oracle (ties included)") {
    SplitMix64 rng(20120613);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 59.0));
        const bool ties = trial % 2 == 0;
        const auto x = random_values(rng, n, ties);
        const auto y = random_values(rng, n, ties);
        const auto fast = concordance_counts(x, y);
        const auto slow = oracle_counts(x, y);
        REQUIRE(fast.concordant == slow.concordant);
        REQUIRE(fast.discordant == slow.discordant);
        REQUIRE(fast.tied_x == slow.tied_x);
        REQUIRE(fast.tied_y == slow.tied_y);
        REQUIRE(fast.tied_both == slow.tied_both);
        REQUIRE(fast.total_pairs == slow.total_pairs);
        // Partition identity.
        CHECK(fast.concordant + fast.discordant + fast.tied_x + fast.tied_y + fast.tied_both ==
              fast.total_pairs);
    }
}

TEST_CASE("concordance examples") {
    const std::vector<double> a{1, 2, 3};
    SUBCASE("perfectly concordant") {
        const auto c = concordance_counts(a, a);
        CHECK(c.concordant == 3);
        CHECK(c.discordant == 0);
        CHECK(c.tied_x + c.tied_y + c.tied_both == 0);
    }
    SUBCASE("perfectly discordant") {
        const std::vector<double> rev{3, 2, 1};
        const auto c = concordance_counts(a, rev);
        CHECK(c.concordant == 0);
        CHECK(c.discordant == 3);
    }
}

TEST_CASE("kendall tau endpoints") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> rev{4, 3, 2, 1};
    CHECK(kendall_tau(x, x) == 1.0);
    CHECK(kendall_tau(x, rev) == -1.0);
}

TEST_CASE("omega endpoints and tie-free quarter-tau identity") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> rev{4, 3, 2, 1};
    CHECK(omega_score(x, x) == 0.25);
    CHECK(omega_score(x, rev) == -0.25);

    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 48.0));
        const auto xs = random_values(rng, n, false);  // continuous, tie-free a.s.
        const auto ys = random_values(rng, n, false);
        CHECK(omega_score(xs, ys) == kendall_tau(xs, ys) / 4.0);
    }
}

TEST_CASE("fast omega equals the literal double loop on tied data") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 48.0));
        const auto xs = random_values(rng, n, true);
        const auto ys = random_values(rng, n, true);
        CHECK(omega_score(xs, ys) == brute_force_omega(xs, ys));
    }
}

TEST_CASE("rank invariance is bit-exact under strictly increasing transforms") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform(0.0, 40.0));
        const auto xs = random_values(rng, n, trial % 2 == 0);
        const auto ys = random_values(rng, n, trial % 2 == 0);
        std::vector<double> gx(n), hy(n);
        for (std::size_t i = 0; i < n; ++i) {
            gx[i] = std::exp(xs[i]);
            hy[i] = ys[i] * ys[i] * ys[i];
        }
        CHECK(omega_score(gx, hy) == omega_score(xs, ys));
        CHECK(kendall_tau(gx, hy) == kendall_tau(xs, ys));
    }
}

TEST_CASE("simultaneous permutation symmetry") {
    SplitMix64 rng(313);
    const std::size_t n = 40;
    const auto xs = random_values(rng, n, true);
    const auto ys = random_values(rng, n, false);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(i)))]);
    std::vector<double> px(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = xs[perm[i]];
        py[i] = ys[perm[i]];
    }
    CHECK(omega_score(px, py) == omega_score(xs, ys));
    CHECK(kendall_tau(px, py) == kendall_tau(xs, ys));
}

TEST_CASE("statistic bounds") {
    SplitMix64 rng(5150);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0.0, 30.0));
        const auto xs = random_values(rng, n, true);
        const auto ys = random_values(rng, n, trial % 3 == 0);
        CHECK(std::abs(kendall_tau(xs, ys)) <= 1.0);
        CHECK(std::abs(omega_score(xs, ys)) <= 0.25);
    }
}

TEST_CASE("tau arcsine identity under bivariate normal, rho = 0.5") {
    // E(tau) = (2/pi) arcsin(rho) = 1/3 exactly at rho = 1/2.
    SplitMix64 rng(404);
    const int reps = 2000;
    const int n = 200;
    const double rho = 0.5;
    const double cross = std::sqrt(1.0 - rho * rho);
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> x(n), y(n);
    for (int r = 0; r < reps; ++r) {
        for (int i = 0; i < n; ++i) {
            const double u = rng.normal();
            x[i] = u;
            y[i] = rho * u + cross * rng.normal();
        }
        const double t = kendall_tau(x, y);
        sum += t;
        sumsq += t * t;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt((sumsq / reps - mean * mean) / (reps - 1));
    const double target = 2.0 / std::numbers::pi * std::asin(rho);
    CHECK(std::abs(target - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(mean - target) < 3.0 * sd);
}

TEST_CASE("pearson examples and oracle") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> up{2, 4, 6};
    const std::vector<double> down{6, 4, 2};
    CHECK(pearson(x, up) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pearson(x, down) == doctest::Approx(-1.0).epsilon(1e-14));

    SplitMix64 rng(8080);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform(0.0, 60.0));
        const auto xs = random_values(rng, n, false);
        const auto ys = random_values(rng, n, false);
        // Textbook covariance-formula oracle.
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        const auto dn = static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            syy += ys[i] * ys[i];
            sxy += xs[i] * ys[i];
        }
        const double expected = (sxy - sx * sy / dn) /
                                std::sqrt((sxx - sx * sx / dn) * (syy - sy * sy / dn));
        CHECK(pearson(xs, ys) == doctest::Approx(expected).epsilon(1e-12));
    }

    const std::vector<double> flat{1, 1, 1};
    CHECK_THROWS_AS((void)pearson(flat, x), DegenerateColumnError);
}

TEST_CASE("input validation") {
    const std::vector<double> x{1, 2, 3};
    const std::vector<double> short_y{1, 2};
    CHECK_THROWS_AS((void)kendall_tau(x, short_y), std::invalid_argument);
    const std::vector<double> single{1};
    CHECK_THROWS_AS((void)kendall_tau(single, single), std::invalid_argument);
    const std::vector<double> with_nan{1, std::nan(""), 3};
    CHECK_THROWS_AS((void)omega_score(x, with_nan), std::invalid_argument);
    const std::vector<double> with_inf{1, std::numeric_limits<double>::infinity(), 3};
    CHECK_THROWS_AS((void)concordance_counts(with_inf, x), std::invalid_argument);
}
