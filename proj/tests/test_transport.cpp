#include <doctest.h>

#include <cmath>

#include "masscone/errors.hpp"
#include "masscone/transport.hpp"
#include "test_support.hpp"

using namespace masscone;

TEST_SUITE_BEGIN("transport");

TEST_CASE("Dirac pairs use the closed form for every p") {
    const auto a = DiscreteMeasure::dirac({0.0, 0.0});
    const auto b = DiscreteMeasure::dirac({3.0, 4.0});
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        CHECK(wasserstein_distance(a, b, p) == doctest::Approx(5.0).epsilon(1e-15));
    }
    CHECK(wasserstein_distance(mct::dirac1(0.0), mct::dirac1(7.0), 2.5) == 7.0);
}

TEST_CASE("identical measures are at distance zero") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const auto mu = mct::random_measure(rng, 2);
        CHECK(wasserstein_distance(mu, mu, 1.0) == 0.0);
        CHECK(wasserstein_distance(mu, mu, 2.0) == 0.0);
    }
}

TEST_CASE("two-to-one split") {
    // Only one feasible plan in the 2x1 transport polytope: each source atom
    // sends its full weight to the single target atom.
    const auto mu = mct::m1({{0.0, 0.5}, {1.0, 0.5}});
    const auto nu = mct::dirac1(0.5);
    const auto r = wasserstein_p(mu, nu, 1.0);
    CHECK(r.distance == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.plan(0, 0) == doctest::Approx(0.5));
    CHECK(r.plan(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("brute force oracle on tiny instances") {
    const auto u01 = mct::m1({{0.0, 0.5}, {1.0, 0.5}});
    CHECK(brute_force_wasserstein(u01, u01, 1.0) == doctest::Approx(0.0));

    const auto a = mct::m1({{0.0, 0.5}, {2.0, 0.5}});
    const auto b = mct::m1({{1.0, 0.5}, {3.0, 0.5}});
    // identity pairing costs (1+1)/2, the swap costs (3+1)/2
    CHECK(brute_force_wasserstein(a, b, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(brute_force_wasserstein(mct::dirac1(0.0), mct::dirac1(7.0), 3.0) ==
          doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("brute force oracle rejects unsupported instances") {
    const auto nonuniform = mct::m1({{0.0, 0.3}, {1.0, 0.7}});
    const auto uniform = mct::m1({{0.0, 0.5}, {1.0, 0.5}});
    CHECK_THROWS_AS(brute_force_wasserstein(nonuniform, uniform, 1.0), UnsupportedInstanceError);

    std::vector<Point> pts;
    std::vector<double> wts;
    for (int i = 0; i < 9; ++i) {
        pts.push_back({static_cast<double>(i)});
        wts.push_back(1.0);
    }
    const DiscreteMeasure big(pts, wts);
    CHECK_THROWS_AS(brute_force_wasserstein(big, big, 1.0), UnsupportedInstanceError);
}

TEST_CASE("mass preconditions") {
    const auto a = mct::dirac1(0.0, 1.0);
    const auto b = mct::dirac1(1.0, 2.0);
    CHECK_THROWS_AS(wasserstein_p(a, b, 1.0), MassMismatchError);
    CHECK_THROWS_AS(wasserstein_p(DiscreteMeasure::zero(1), a, 1.0), ZeroMassError);

    OtOptions opts;
    opts.p = 1.0;
    opts.rescale_to_match = true;
    CHECK(wasserstein_p(a, b, opts).distance == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("p below 1 is rejected") {
    const auto a = mct::dirac1(0.0);
    CHECK_THROWS_AS(wasserstein_p(a, a, 0.5), std::invalid_argument);
}

TEST_CASE("solver agrees with the permutation oracle") {
    Rng rng(19);
    for (int t = 0; t < 60; ++t) {
        const int dim = 1 + static_cast<int>(rng.index(3));
        const std::size_t k = 2 + rng.index(4); // up to 5 atoms
        std::vector<Point> xs(k), ys(k);
        for (std::size_t i = 0; i < k; ++i) {
            xs[i].resize(static_cast<std::size_t>(dim));
            ys[i].resize(static_cast<std::size_t>(dim));
            for (double& c : xs[i]) c = rng.uniform(-2.0, 2.0);
            for (double& c : ys[i]) c = rng.uniform(-2.0, 2.0);
        }
        const std::vector<double> w(k, 1.0 / static_cast<double>(k));
        const DiscreteMeasure mu(xs, w), nu(ys, w);
        const double p = (t % 2 == 0) ? 1.0 : 2.0;
        CHECK(wasserstein_distance(mu, nu, p) ==
              doctest::Approx(brute_force_wasserstein(mu, nu, p)).epsilon(1e-9));
    }
}

TEST_CASE("symmetry on random pairs") {
    Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        const int dim = 1 + static_cast<int>(rng.index(2));
        const auto mu = mct::random_measure(rng, dim, 5, 2.0, 1.0);
        const auto nu = mct::random_measure(rng, dim, 5, 2.0, 1.0);
        const double d1 = wasserstein_distance(mu, nu, 1.0);
        const double d2 = wasserstein_distance(nu, mu, 1.0);
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-10));
    }
}

TEST_CASE("triangle inequality on random equal-mass triples") {
    Rng rng(29);
    for (int t = 0; t < 50; ++t) {
        const int dim = 1 + static_cast<int>(rng.index(2));
        const double mass = rng.log_uniform(0.5, 2.0);
        const auto a = mct::random_measure(rng, dim, 4, 2.0, mass);
        const auto b = mct::random_measure(rng, dim, 4, 2.0, mass);
        const auto c = mct::random_measure(rng, dim, 4, 2.0, mass);
        const double p = (t % 2 == 0) ? 1.0 : 2.0;
        const double ab = wasserstein_distance(a, b, p);
        const double bc = wasserstein_distance(b, c, p);
        const double ac = wasserstein_distance(a, c, p);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("translation invariance") {
    Rng rng(31);
    for (int t = 0; t < 30; ++t) {
        const int dim = 1 + static_cast<int>(rng.index(3));
        const auto mu = mct::random_measure(rng, dim, 4, 2.0, 1.0);
        const auto nu = mct::random_measure(rng, dim, 4, 2.0, 1.0);
        const auto iso = random_isometry(dim, rng, 5.0);
        const double before = wasserstein_distance(mu, nu, 2.0);
        const double after =
            wasserstein_distance(pushforward_isometry(mu, iso), pushforward_isometry(nu, iso), 2.0);
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}

TEST_CASE("returned plans are feasible and attain the distance") {
    Rng rng(37);
    for (int t = 0; t < 40; ++t) {
        const int dim = 1 + static_cast<int>(rng.index(2));
        const double mass = rng.log_uniform(0.2, 5.0);
        const auto mu = mct::random_measure(rng, dim, 5, 2.0, mass);
        const auto nu = mct::random_measure(rng, dim, 5, 2.0, mass);
        const double p = (t % 2 == 0) ? 1.0 : 2.0;
        const auto r = wasserstein_p(mu, nu, p);
        CHECK(r.plan.max_marginal_deviation() <= 1e-10);
        const auto cost = cost_matrix(mu, nu, p);
        CHECK(std::pow(r.plan.total_cost(cost), 1.0 / p) ==
              doctest::Approx(r.distance).epsilon(1e-12));
        for (double pi : r.plan.couplings) CHECK(pi >= 0.0);
    }
}

TEST_CASE("zero-weight atoms pass through the solver") {
    const DiscreteMeasure mu({{0.0}, {5.0}}, {1.0, 0.0});
    const DiscreteMeasure nu({{1.0}, {9.0}}, {0.0, 1.0});
    const auto r = wasserstein_p(mu, nu, 1.0);
    CHECK(r.distance == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(r.plan.max_marginal_deviation() <= 1e-12);
}

TEST_CASE("larger uniform instances match the oracle at k = 7") {
    Rng rng(41);
    for (int t = 0; t < 5; ++t) {
        const std::size_t k = 7;
        std::vector<Point> xs(k), ys(k);
        for (std::size_t i = 0; i < k; ++i) {
            xs[i] = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
            ys[i] = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        }
        const std::vector<double> w(k, 0.25);
        const DiscreteMeasure mu(xs, w), nu(ys, w);
        CHECK(wasserstein_distance(mu, nu, 2.0) ==
              doctest::Approx(brute_force_wasserstein(mu, nu, 2.0)).epsilon(1e-9));
    }
}
