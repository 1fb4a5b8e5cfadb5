#include <doctest.h>

#include <cmath>

#include "masscone/errors.hpp"
#include "masscone/warped_cone.hpp"
#include "test_support.hpp"

using namespace masscone;

TEST_SUITE_BEGIN("warped_cone");

namespace {

GridSpec grid_1d(double mass_min, double mass_max, double lo, double hi, int mass_steps = 13,
                 int spatial_steps = 81, int radius = 1) {
    GridSpec g;
    g.mass_min = mass_min;
    g.mass_max = mass_max;
    g.mass_steps = mass_steps;
    g.box_lo = {lo};
    g.box_hi = {hi};
    g.spatial_steps = spatial_steps;
    g.stencil_radius = radius;
    return g;
}

WarpingFunction constant_g(double c) {
    WarpingFunction g;
    g.kind = WarpKind::constant;
    g.c = c;
    return g;
}

WarpingFunction origin_g(double p = 1.0) {
    WarpingFunction g;
    g.kind = WarpKind::one_plus_wp_to_origin;
    g.p = p;
    return g;
}

/// Brute-force oracle for inf_x W_p(mu, delta_x): dense grid search over the
/// support's bounding interval.
double grid_search_inf_wp(const DiscreteMeasure& mu, double p) {
    double lo = mu.point(0)[0], hi = lo;
    for (const auto& x : mu.points()) {
        lo = std::min(lo, x[0]);
        hi = std::max(hi, x[0]);
    }
    double best = std::numeric_limits<double>::infinity();
    const int steps = 20000;
    for (int i = 0; i <= steps; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / steps;
        double cost = 0.0;
        for (std::size_t a = 0; a < mu.size(); ++a)
            cost += mu.weight(a) * std::pow(std::abs(mu.point(a)[0] - x), p);
        best = std::min(best, std::pow(cost, 1.0 / p));
    }
    return best;
}

} // namespace

TEST_CASE("warping on Diracs") {
    WarpingFunction inf_g;
    inf_g.kind = WarpKind::one_plus_inf_wp_to_diracs;
    inf_g.p = 2.0;
    CHECK(eval_warping(inf_g, DiscreteMeasure::dirac({3.7})) == doctest::Approx(1.0));

    CHECK(eval_warping(origin_g(), DiscreteMeasure::dirac({-4.0})) == doctest::Approx(5.0));
    CHECK(eval_warping(origin_g(2.0), DiscreteMeasure::dirac({3.0, 4.0})) ==
          doctest::Approx(6.0));
}

TEST_CASE("inf-over-Diracs warping at p = 2 sits at the barycenter") {
    WarpingFunction g;
    g.kind = WarpKind::one_plus_inf_wp_to_diracs;
    g.p = 2.0;
    const auto mu = mct::m1({{0.0, 0.5}, {2.0, 0.5}});
    CHECK(eval_warping(g, mu) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eval_warping(g, mu) == doctest::Approx(1.0 + grid_search_inf_wp(mu, 2.0)).epsilon(1e-6));

    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const auto nu = mct::random_profile(rng, 1, 5, 2.0);
        CHECK(eval_warping(g, nu) ==
              doctest::Approx(1.0 + grid_search_inf_wp(nu, 2.0)).epsilon(1e-6));
    }
}

TEST_CASE("inf-over-Diracs warping at p = 1 sits at the weighted median") {
    WarpingFunction g;
    g.kind = WarpKind::one_plus_inf_wp_to_diracs;
    g.p = 1.0;
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const auto nu = mct::random_profile(rng, 1, 5, 2.0);
        CHECK(eval_warping(g, nu) ==
              doctest::Approx(1.0 + grid_search_inf_wp(nu, 1.0)).epsilon(1e-5));
    }
    // 2-D Weiszfeld against a planar grid oracle on one fixed instance
    const DiscreteMeasure planar({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {0.4, 0.3, 0.3});
    const Point med = weighted_geometric_median(planar);
    double direct = 0.0;
    for (std::size_t i = 0; i < planar.size(); ++i)
        direct += planar.weight(i) * euclidean(planar.point(i), med);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 200; ++j) {
            const Point x{i / 200.0, j / 200.0};
            double cost = 0.0;
            for (std::size_t a = 0; a < planar.size(); ++a)
                cost += planar.weight(a) * euclidean(planar.point(a), x);
            best = std::min(best, cost);
        }
    CHECK(direct <= best + 1e-4);
}

TEST_CASE("unsupported exponent for the infimum variant") {
    WarpingFunction g;
    g.kind = WarpKind::one_plus_inf_wp_to_diracs;
    g.p = 3.0;
    CHECK_THROWS_AS(eval_warping(g, DiscreteMeasure::dirac({0.0})), UnsupportedExponentError);
}

TEST_CASE("path length collapses to W_p length at constant mass") {
    ConePath path;
    for (double x : {0.0, 1.0, 3.0, 5.0})
        path.waypoints.push_back({2.0, DiscreteMeasure::dirac({x})});
    CHECK(path_length(path, origin_g(), 1.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(path_length(path, constant_g(7.0), 1.0) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("path length collapses to warped mass variation at constant profile") {
    ConePath path;
    path.waypoints.push_back({1.0, DiscreteMeasure::dirac({0.0})});
    path.waypoints.push_back({2.0, DiscreteMeasure::dirac({0.0})});
    CHECK(path_length(path, constant_g(3.0), 1.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("two-segment mixed path") {
    ConePath path;
    path.waypoints.push_back({1.0, DiscreteMeasure::dirac({0.0})});
    path.waypoints.push_back({2.0, DiscreteMeasure::dirac({0.0})});
    path.waypoints.push_back({2.0, DiscreteMeasure::dirac({3.0})});
    // g(delta_0) = 1 on the mass leg, then a horizontal W_p leg of length 3
    CHECK(path_length(path, origin_g(), 1.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("trapezoidal evaluation restores reversal symmetry") {
    Rng rng(7);
    for (int t = 0; t < 10; ++t) {
        ConePath path;
        const std::size_t waypoints = 3 + rng.index(3);
        for (std::size_t k = 0; k < waypoints; ++k)
            path.waypoints.push_back(
                {rng.log_uniform(0.5, 2.0), mct::random_profile(rng, 1, 3, 2.0)});
        ConePath reversed = path;
        std::reverse(reversed.waypoints.begin(), reversed.waypoints.end());
        const double fwd = path_length(path, origin_g(), 1.0, WarpEval::trapezoidal);
        const double bwd = path_length(reversed, origin_g(), 1.0, WarpEval::trapezoidal);
        CHECK(fwd == doctest::Approx(bwd).epsilon(1e-9));
    }
}

TEST_CASE("path validation") {
    ConePath path;
    path.waypoints.push_back({1.0, DiscreteMeasure::dirac({0.0})});
    CHECK_THROWS_AS(path_length(path, constant_g(1.0), 1.0), std::invalid_argument);
    path.waypoints.push_back({-1.0, DiscreteMeasure::dirac({1.0})});
    CHECK_THROWS_AS(path_length(path, constant_g(1.0), 1.0), std::invalid_argument);
    path.waypoints[1] = {1.0, DiscreteMeasure::dirac({1.0}, 2.0)}; // not a probability
    CHECK_THROWS_AS(path_length(path, constant_g(1.0), 1.0), std::invalid_argument);
}

TEST_CASE("constant-g cone distance matches the Euclidean product closed form") {
    // With g constant the warped product is a Euclidean product in rescaled
    // coordinates; the straight path is optimal.
    const auto grid = grid_1d(0.5, 2.5, -5.0, 5.0, 9, 41, 2).refined(1);
    for (double c : {1.0, 2.0}) {
        const DiracConePoint src{1.0, {-3.0}};
        const DiracConePoint dst{2.0, {1.5}};
        const auto r = warped_distance_dirac_cone(src, dst, constant_g(c), 1.0, grid);
        const double truth = std::sqrt(c * c * 1.0 + 4.5 * 4.5);
        CHECK(r.value >= truth - 1e-12);
        CHECK(r.value <= truth * 1.03);
    }
}

TEST_CASE("equal-mass Dirac pairs recover the base distance on node-aligned endpoints") {
    const auto grid = grid_1d(0.5, 2.5, -10.0, 10.0);
    for (double sep : {2.0, 5.0, 8.0}) {
        const DiracConePoint src{1.0, {-sep / 2.0}};
        const DiracConePoint dst{1.0, {sep / 2.0}};
        const auto r = warped_distance_dirac_cone(src, dst, origin_g(), 1.0, grid);
        CHECK(r.value == doctest::Approx(sep).epsilon(1e-12));
    }
}

TEST_CASE("grid refinement never increases the distance") {
    // Monotonicity is stated for fixed endpoints that stay grid nodes, so
    // draw the endpoints on the coarse lattice (nodes of every refinement).
    Rng rng(11);
    const auto base = grid_1d(0.5, 2.5, -5.0, 5.0, 9, 41, 1);
    const double mass_h = (base.mass_max - base.mass_min) / (base.mass_steps - 1);
    const double space_h = (base.box_hi[0] - base.box_lo[0]) / (base.spatial_steps - 1);
    for (int t = 0; t < 6; ++t) {
        auto node = [&]() {
            return DiracConePoint{
                base.mass_min + mass_h * static_cast<double>(rng.index(
                                    static_cast<std::size_t>(base.mass_steps))),
                {base.box_lo[0] + space_h * static_cast<double>(rng.index(
                                      static_cast<std::size_t>(base.spatial_steps)))}};
        };
        const DiracConePoint src = node();
        const DiracConePoint dst = node();
        const WarpingFunction g = (t % 2 == 0) ? origin_g() : constant_g(1.5);
        double prev = std::numeric_limits<double>::infinity();
        for (int level = 0; level < 3; ++level) {
            const auto r = warped_distance_dirac_cone(src, dst, g, 1.0, base.refined(level));
            CHECK(r.value <= prev + 1e-12);
            prev = r.value;
        }
    }
}

TEST_CASE("mass variation bounded by the warping at the fixed profile") {
    const auto grid = grid_1d(0.5, 2.5, -5.0, 5.0);
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        const double x = rng.uniform(-4.0, 4.0);
        const double m0 = rng.uniform(0.6, 1.4);
        const double m1 = rng.uniform(1.5, 2.4);
        const auto r = warped_distance_dirac_cone({m0, {x}}, {m1, {x}}, origin_g(), 1.0, grid);
        const double g_here = 1.0 + std::abs(r.src_node.position[0]);
        const double snapped_gap = std::abs(r.dst_node.mass - r.src_node.mass);
        CHECK(r.value <= g_here * snapped_gap + 1e-9);
    }
}

TEST_CASE("mass-change legs are bracketed and agree with a double-resolution oracle") {
    for (double R : {5.0, 8.0}) {
        const auto grid = grid_1d(1.0, 2.0, R - 2.0, R + 2.0, 9, 33, 2);
        const DiracConePoint src{1.0, {R}};
        const DiracConePoint dst{2.0, {R}};
        const auto v = warped_distance_dirac_cone(src, dst, origin_g(), 1.0, grid);
        // Any path pays at least (min g over the box) * dm; the vertical path
        // costs g(delta_R) * dm = 1 + R.
        CHECK(v.value >= (1.0 + (R - 2.0)) * 1.0 - 1e-9);
        CHECK(v.value <= (1.0 + R) * 1.0 + 1e-12);
        const auto oracle =
            warped_distance_dirac_cone(src, dst, origin_g(), 1.0, grid.refined(1));
        CHECK(std::abs(v.value - oracle.value) <= 0.01 * oracle.value);
    }
}

TEST_CASE("origin-anchored warping grows linearly in the anchor distance") {
    // sup_x d((m0, x), (m, x)) is unbounded: the mass-change cost at distance
    // R from the origin scales like (1 + R) |m - m0|.
    std::vector<double> values;
    for (double R : {10.0, 100.0, 1000.0}) {
        const auto grid = grid_1d(1.0, 2.0, R - 2.0, R + 2.0, 9, 17, 2);
        const auto r = warped_distance_dirac_cone({1.0, {R}}, {2.0, {R}}, origin_g(), 1.0, grid);
        values.push_back(r.value);
    }
    const double slope0 = values[0] / 10.0;
    CHECK(values[1] >= 0.5 * slope0 * 100.0);
    CHECK(values[2] >= 0.5 * slope0 * 1000.0);
}

TEST_CASE("grid validation") {
    auto bad = grid_1d(0.5, 2.5, -1.0, 1.0);
    bad.mass_steps = 2;
    CHECK_THROWS_AS(bad.validate(), GridTooCoarseError);
    bad = grid_1d(0.5, 2.5, -1.0, 1.0);
    bad.spatial_steps = 2;
    CHECK_THROWS_AS(bad.validate(), GridTooCoarseError);

    const auto grid = grid_1d(0.5, 2.5, -1.0, 1.0);
    CHECK_THROWS_AS(warped_distance_dirac_cone({3.0, {0.0}}, {1.0, {0.0}}, constant_g(1.0), 1.0,
                                               grid),
                    DomainError);
    CHECK_THROWS_AS(warped_distance_dirac_cone({1.0, {5.0}}, {1.0, {0.0}}, constant_g(1.0), 1.0,
                                               grid),
                    DomainError);
}
