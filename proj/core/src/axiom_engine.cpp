#include "masscone/axiom_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

#include "masscone/errors.hpp"
#include "masscone/transport.hpp"

namespace masscone {

void MeasureSampler::validate() const {
    if (dim < 1) throw SamplerError("sampler: dimension must be >= 1");
    if (box.lo.size() != static_cast<std::size_t>(dim) || box.hi.size() != box.lo.size())
        throw SamplerError("sampler: box corners do not match the dimension");
    for (std::size_t a = 0; a < box.lo.size(); ++a) {
        if (!(box.hi[a] >= box.lo[a])) throw SamplerError("sampler: box has negative extent");
    }
    if (min_atoms < 1 || max_atoms < min_atoms)
        throw SamplerError("sampler: need 1 <= min_atoms <= max_atoms");
    if (!(mass_min > 0.0) || !(mass_max >= mass_min))
        throw SamplerError("sampler: need 0 < mass_min <= mass_max");
    if (zero_probability < 0.0 || zero_probability >= 1.0)
        throw SamplerError("sampler: zero_probability must lie in [0, 1)");
}

DiscreteMeasure MeasureSampler::sample(Rng& rng) const {
    if (zero_probability > 0.0 && rng.uniform() < zero_probability)
        return DiscreteMeasure::zero(dim);
    const std::size_t k = min_atoms + rng.index(max_atoms - min_atoms + 1);
    std::vector<Point> pts(k);
    std::vector<double> wts(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        Point x(static_cast<std::size_t>(dim));
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = rng.uniform(box.lo[a], box.hi[a]);
        pts[i] = std::move(x);
        wts[i] = 0.05 + rng.uniform();
        sum += wts[i];
    }
    const double mass =
        (mass_min == mass_max) ? mass_min : rng.log_uniform(mass_min, mass_max);
    for (double& w : wts) w *= mass / sum;
    return DiscreteMeasure(std::move(pts), std::move(wts));
}

std::string axiom_name(MetricAxiom axiom) {
    switch (axiom) {
    case MetricAxiom::non_negativity: return "non_negativity";
    case MetricAxiom::identity: return "identity";
    case MetricAxiom::symmetry: return "symmetry";
    case MetricAxiom::triangle: return "triangle";
    }
    return "unknown";
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MASSCONE_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return std::min(parsed, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

struct TrialChecks {
    std::vector<ViolationWitness> non_negativity;
    std::vector<ViolationWitness> identity;
    std::vector<ViolationWitness> symmetry;
    std::vector<ViolationWitness> triangle;
};

void run_one_trial(const ExtendedMetric& metric, const MeasureSampler& sampler,
                   std::uint64_t seed, std::uint64_t trial, double tol, TrialChecks& out) {
    Rng rng(derive_seed(seed, trial));
    const DiscreteMeasure a = sampler.sample(rng);
    const DiscreteMeasure b = sampler.sample(rng);
    const DiscreteMeasure c = sampler.sample(rng);

    const double d_ab = metric(a, b);
    const double d_ba = metric(b, a);
    const double d_ac = metric(a, c);
    const double d_bc = metric(b, c);
    const double d_aa = metric(a, a);

    auto emit = [&](std::vector<ViolationWitness>& sink, std::string violated,
                    std::vector<DiscreteMeasure> measures, double lhs, double rhs,
                    std::string note = {}) {
        sink.push_back({std::move(violated), std::move(measures), lhs, rhs, lhs - rhs, trial,
                        std::move(note)});
    };

    for (const auto& [d, fst, snd] :
         {std::tuple{d_ab, &a, &b}, std::tuple{d_ac, &a, &c}, std::tuple{d_bc, &b, &c}}) {
        if (-d > tol) emit(out.non_negativity, "non_negativity", {*fst, *snd}, 0.0, d);
    }

    if (d_aa > tol) emit(out.identity, "identity_zero", {a}, d_aa, 0.0);
    if (!approx_equal(a, b) && d_ab <= tol)
        emit(out.identity, "identity_positivity", {a, b}, d_ab, tol,
             "distance not positive for canonically distinct measures");

    if (std::abs(d_ab - d_ba) > tol)
        emit(out.symmetry, "symmetry", {a, b}, std::abs(d_ab - d_ba), 0.0);

    if (d_ac - (d_ab + d_bc) > tol) emit(out.triangle, "triangle", {a, b, c}, d_ac, d_ab + d_bc);
    if (d_ab - (d_ac + d_bc) > tol) emit(out.triangle, "triangle", {a, c, b}, d_ab, d_ac + d_bc);
    if (d_bc - (d_ba + d_ac) > tol) emit(out.triangle, "triangle", {b, a, c}, d_bc, d_ba + d_ac);
}

} // namespace

double replay_witness_margin(const ExtendedMetric& metric, const ViolationWitness& w) {
    const auto& m = w.measures;
    if (w.violated == "non_negativity" && m.size() == 2) return 0.0 - metric(m[0], m[1]);
    if (w.violated == "identity_zero" && m.size() == 1) return metric(m[0], m[0]) - 0.0;
    if (w.violated == "identity_positivity" && m.size() == 2) return metric(m[0], m[1]) - w.rhs;
    if (w.violated == "symmetry" && m.size() == 2)
        return std::abs(metric(m[0], m[1]) - metric(m[1], m[0])) - 0.0;
    if (w.violated == "triangle" && m.size() == 3)
        return metric(m[0], m[2]) - (metric(m[0], m[1]) + metric(m[1], m[2]));
    throw Error("cannot replay witness of kind " + w.violated);
}

std::vector<AxiomReport> run_axiom_suite(const ExtendedMetric& metric,
                                         const MeasureSampler& sampler,
                                         const AxiomSuiteConfig& config) {
    sampler.validate();
    if (config.trials < 1) throw SamplerError("axiom suite: trials must be >= 1");
    if (sampler.zero_probability > 0.0 && !metric.allows_zero())
        throw SamplerError("axiom suite: sampler emits zero measures the metric cannot take");

    const std::uint64_t trials = config.trials;
    const int threads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(resolve_threads(config.threads)),
                                std::max<std::uint64_t>(trials / 256, 1)));

    std::vector<TrialChecks> partial(static_cast<std::size_t>(threads));
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&](int slot, std::uint64_t begin, std::uint64_t end) {
        try {
            for (std::uint64_t t = begin; t < end; ++t)
                run_one_trial(metric, sampler, config.seed, t, config.tolerance,
                              partial[static_cast<std::size_t>(slot)]);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (threads == 1) {
        worker(0, 0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + threads - 1) / threads;
        for (int s = 0; s < threads; ++s) {
            const std::uint64_t begin = chunk * static_cast<std::uint64_t>(s);
            const std::uint64_t end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, s, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    auto make_report = [&](MetricAxiom axiom, std::uint64_t checks_per_trial) {
        AxiomReport rep;
        rep.metric_id = metric.id();
        rep.axiom = axiom;
        rep.trials = trials;
        rep.checks = trials * checks_per_trial;
        rep.tolerance = config.tolerance;
        rep.seed = config.seed;
        return rep;
    };
    std::vector<AxiomReport> reports;
    reports.push_back(make_report(MetricAxiom::non_negativity, 3));
    reports.push_back(make_report(MetricAxiom::identity, 2));
    reports.push_back(make_report(MetricAxiom::symmetry, 1));
    reports.push_back(make_report(MetricAxiom::triangle, 3));

    for (auto& checks : partial) {
        auto& [nn, id, sy, tr] = checks;
        std::move(nn.begin(), nn.end(), std::back_inserter(reports[0].witnesses));
        std::move(id.begin(), id.end(), std::back_inserter(reports[1].witnesses));
        std::move(sy.begin(), sy.end(), std::back_inserter(reports[2].witnesses));
        std::move(tr.begin(), tr.end(), std::back_inserter(reports[3].witnesses));
    }
    for (auto& rep : reports) {
        std::stable_sort(rep.witnesses.begin(), rep.witnesses.end(),
                         [](const ViolationWitness& a, const ViolationWitness& b) {
                             return a.trial < b.trial;
                         });
        for (const auto& w : rep.witnesses) {
            const double replayed = replay_witness_margin(metric, w);
            if (std::abs(replayed - w.margin) > 1e-12)
                throw Error("axiom witness failed to re-verify on replay");
        }
    }
    return reports;
}

TriangleEquivalenceReport check_triangle_equivalence(const ScalingFunction& f,
                                                     std::span<const MassProfileTriple> triples,
                                                     double p, double tolerance) {
    TriangleEquivalenceReport report;
    report.triples = triples.size();
    report.tolerance = tolerance;
    report.max_margin = -std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    for (const auto& t : triples) {
        if (!(t.m3 < t.m1) || !(t.m1 <= t.m2))
            throw std::invalid_argument("triangle equivalence needs m3 < m1 <= m2");
        const double d12 = wasserstein_distance(t.y1, t.y2, p);
        const double d13 = wasserstein_distance(t.y1, t.y3, p);
        const double d23 = wasserstein_distance(t.y2, t.y3, p);
        const double lhs = f(t.m1) * d12 - f(t.m3) * (d13 + d23);
        const double rhs = 2.0 * (t.m1 - t.m3);
        report.max_margin = std::max(report.max_margin, lhs - rhs);
        if (lhs - rhs > tolerance) {
            report.violations.push_back({"triangle_equivalence",
                                         {recompose(t.m1, t.y1), recompose(t.m2, t.y2),
                                          recompose(t.m3, t.y3)},
                                         lhs, rhs, lhs - rhs, index,
                                         "reduced form of the bounded-space triangle inequality"});
        }
        ++index;
    }
    return report;
}

std::vector<MassProfileTriple> sample_mass_profile_triples(const MeasureSampler& sampler,
                                                           std::size_t count,
                                                           std::uint64_t seed) {
    sampler.validate();
    MeasureSampler profile_sampler = sampler;
    profile_sampler.zero_probability = 0.0;
    std::vector<MassProfileTriple> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, i));
        double masses[3];
        do {
            for (double& m : masses) m = rng.log_uniform(sampler.mass_min, sampler.mass_max);
            std::sort(masses, masses + 3);
        } while (masses[0] >= masses[1]);
        MassProfileTriple t;
        t.m3 = masses[0];
        t.m1 = masses[1];
        t.m2 = masses[2];
        t.y1 = decompose(profile_sampler.sample(rng)).profile;
        t.y2 = decompose(profile_sampler.sample(rng)).profile;
        t.y3 = decompose(profile_sampler.sample(rng)).profile;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace masscone
