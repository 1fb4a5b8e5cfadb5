#include <benchmark/benchmark.h>

#include "masscone/axiom_engine.hpp"
#include "masscone/metric_families.hpp"
#include "masscone/rng.hpp"
#include "masscone/transport.hpp"
#include "masscone/warped_cone.hpp"

using namespace masscone;

namespace {

DiscreteMeasure random_equal_mass(Rng& rng, std::size_t atoms, int dim) {
    std::vector<Point> pts(atoms);
    std::vector<double> wts(atoms);
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        pts[i].resize(static_cast<std::size_t>(dim));
        for (double& c : pts[i]) c = rng.uniform(-1.0, 1.0);
        wts[i] = 0.05 + rng.uniform();
        sum += wts[i];
    }
    for (double& w : wts) w /= sum;
    return DiscreteMeasure(pts, wts);
}

void BM_wasserstein(benchmark::State& state) {
    Rng rng(7);
    const auto atoms = static_cast<std::size_t>(state.range(0));
    const auto mu = random_equal_mass(rng, atoms, 2);
    const auto nu = random_equal_mass(rng, atoms, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wasserstein_distance(mu, nu, 2.0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_wasserstein)->RangeMultiplier(2)->Range(4, 256)->Complexity();

void BM_axiom_trial(benchmark::State& state) {
    ExtendedMetricSpec spec;
    spec.family = MetricFamily::product_q;
    const ExtendedMetric metric(spec);
    MeasureSampler sampler;
    sampler.dim = 2;
    sampler.box = {{0.0, 0.0}, {1.0, 1.0}};
    std::uint64_t trial = 0;
    for (auto _ : state) {
        Rng rng(derive_seed(kDefaultSeed, trial++));
        const auto a = sampler.sample(rng);
        const auto b = sampler.sample(rng);
        benchmark::DoNotOptimize(metric(a, b));
    }
}
BENCHMARK(BM_axiom_trial);

void BM_warped_grid(benchmark::State& state) {
    GridSpec grid;
    grid.mass_min = 0.5;
    grid.mass_max = 2.5;
    grid.mass_steps = 13;
    grid.box_lo = {-10.0};
    grid.box_hi = {10.0};
    grid.spatial_steps = 81;
    grid.stencil_radius = 1;
    const GridSpec fine = grid.refined(static_cast<int>(state.range(0)));
    WarpingFunction g;
    g.kind = WarpKind::one_plus_wp_to_origin;
    g.p = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            warped_distance_dirac_cone({1.0, {-4.0}}, {2.0, {4.0}}, g, 1.0, fine).value);
    }
}
BENCHMARK(BM_warped_grid)->DenseRange(0, 2);

} // namespace

BENCHMARK_MAIN();
