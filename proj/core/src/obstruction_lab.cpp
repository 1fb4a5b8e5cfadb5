#include "masscone/obstruction_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "masscone/errors.hpp"
#include "masscone/transport.hpp"

namespace masscone {

namespace {

Point axis_point(int dim, double radius) {
    Point x(static_cast<std::size_t>(dim), 0.0);
    x[0] = radius;
    return x;
}

} // namespace

std::vector<Point> SigmaSampler::sample() const {
    if (dim < 1) throw SamplerError("sigma sampler: dimension must be >= 1");
    if (!(r_max > 0.0)) throw SamplerError("sigma sampler: r_max must be positive");
    if (!(step > 0.0)) throw SamplerError("sigma sampler: step must be positive");

    std::vector<Point> pts;
    switch (kind) {
    case Kind::geometric_ray: {
        pts.push_back(axis_point(dim, 0.0));
        double radius = step;
        while (radius <= r_max * (1.0 + 1e-12)) {
            pts.push_back(axis_point(dim, radius));
            radius *= 2.0;
        }
        if (norm(pts.back()) < r_max) pts.push_back(axis_point(dim, r_max));
        break;
    }
    case Kind::segment_grid: {
        for (double radius = 0.0; radius <= r_max * (1.0 + 1e-12); radius += step)
            pts.push_back(axis_point(dim, radius));
        break;
    }
    case Kind::random_ball: {
        Rng rng(seed);
        pts.push_back(axis_point(dim, 0.0));
        while (pts.size() < count) {
            Point dir(static_cast<std::size_t>(dim));
            double len = 0.0;
            for (double& c : dir) {
                c = rng.normal();
                len += c * c;
            }
            len = std::sqrt(len);
            if (len < 1e-12) continue;
            const double radius = rng.log_uniform(std::min(step, r_max / 2.0), r_max);
            for (double& c : dir) c *= radius / len;
            pts.push_back(std::move(dir));
        }
        break;
    }
    }
    return pts;
}

double oscillation_bound(double C, double separation) {
    if (!(separation > 0.0)) throw std::invalid_argument("oscillation_bound: separation must be positive");
    if (!(C > 0.0)) throw std::invalid_argument("oscillation_bound: C must be positive");
    return 4.0 * C / separation;
}

ScalingViolationResult find_scaling_violation(const ObstructionConfig& config,
                                              const ScalingFunction& f) {
    if (!(config.r > 0.0) || !(config.C > 0.0) || !(config.m0 > 0.0))
        throw std::invalid_argument("obstruction config: need m0, r, C > 0");
    if (!f.eval) throw std::invalid_argument("obstruction config: missing scaling function");

    if (config.candidate) {
        Rng rng(config.probe_seed);
        const auto pairs = random_probe_pairs(config.sigma.dim, 4, rng);
        const auto probe = fiber_scaling_probe(*config.candidate, config.m0, pairs);
        const double expected = f(config.m0);
        if (!probe.consistent ||
            std::abs(probe.estimated_scale - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
            throw FiberViolationError(
                "candidate metric does not satisfy the fiber condition with the given f");
    }

    // Deterministic mass schedule inside the open window (m0 - r, m0 + r).
    std::vector<double> masses{config.m0};
    for (double frac : {5.0 / 6.0, 0.5, 0.25}) {
        const double lo = config.m0 - frac * config.r;
        const double hi = config.m0 + frac * config.r;
        if (lo > 0.0) masses.push_back(lo);
        masses.push_back(hi);
    }
    std::sort(masses.begin(), masses.end());

    struct MassPair {
        double m1, m2, df;
    };
    std::vector<MassPair> mass_pairs;
    double oscillation = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        for (std::size_t j = i + 1; j < masses.size(); ++j) {
            const double df = std::abs(f(masses[i]) - f(masses[j]));
            oscillation = std::max(oscillation, df);
            mass_pairs.push_back({masses[i], masses[j], df});
        }
    }
    std::stable_sort(mass_pairs.begin(), mass_pairs.end(),
                     [](const MassPair& a, const MassPair& b) { return a.df > b.df; });

    ScalingViolationResult result;
    result.sampled_oscillation = oscillation;
    if (oscillation == 0.0) return result; // constant f: the chain bound can never fail

    const std::vector<Point> points = config.sigma.sample();
    struct SepPair {
        double sep;
        std::size_t i, j;
    };
    std::vector<SepPair> pairs;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double sep = euclidean(points[i], points[j]);
            if (sep > 0.0) pairs.push_back({sep, i, j});
        }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const SepPair& a, const SepPair& b) { return a.sep < b.sep; });

    std::uint64_t step_index = 0;
    for (const SepPair& sp : pairs) {
        result.max_separation_examined = std::max(result.max_separation_examined, sp.sep);
        ++result.pairs_examined;
        for (const MassPair& mp : mass_pairs) {
            ++step_index;
            const double lhs = mp.df * sp.sep;
            const double rhs = 4.0 * config.C;
            if (lhs > rhs) {
                const Point& x = points[sp.i];
                const Point& y = points[sp.j];
                ViolationWitness w;
                w.violated = "oscillation_chain";
                w.measures = {DiscreteMeasure::dirac(x, mp.m1), DiscreteMeasure::dirac(x, mp.m2),
                              DiscreteMeasure::dirac(y, mp.m2), DiscreteMeasure::dirac(y, mp.m1)};
                w.lhs = lhs;
                w.rhs = rhs;
                w.margin = lhs - rhs;
                w.trial = step_index;
                std::ostringstream note;
                note << "separation=" << sp.sep << " m1=" << mp.m1 << " m2=" << mp.m2
                     << " |f(m1)-f(m2)|=" << mp.df;
                w.note = note.str();
                result.witness = std::move(w);
                return result;
            }
        }
    }
    return result;
}

ZeroExtensionResult zero_extension_diameter_test(const ExtensionCandidate& candidate,
                                                 const SigmaSampler& sigma) {
    if (!(candidate.lambda0 > 0.0))
        throw std::invalid_argument("extension candidate: lambda0 must be positive");
    const std::vector<Point> points = sigma.sample();

    ZeroExtensionResult result;
    std::size_t best_i = 0, best_j = 0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double sep = euclidean(points[i], points[j]);
            if (sep > result.sampled_diameter) {
                result.sampled_diameter = sep;
                best_i = i;
                best_j = j;
            }
        }

    if (candidate.claimed_sup) {
        result.Lambda = *candidate.claimed_sup;
    } else {
        if (!candidate.zero_distance)
            throw std::invalid_argument("extension candidate: need claimed_sup or zero_distance");
        for (const Point& x : points)
            result.Lambda =
                std::max(result.Lambda, candidate.zero_distance(
                                            candidate.m0, DiscreteMeasure::dirac(x)));
    }
    result.threshold = 2.0 * result.Lambda / candidate.lambda0;

    if (candidate.lambda0 * result.sampled_diameter > 2.0 * result.Lambda) {
        const int dim = sigma.dim;
        ViolationWitness w;
        w.violated = "zero_extension_diameter";
        w.measures = {DiscreteMeasure::dirac(points[best_i], candidate.m0),
                      DiscreteMeasure::dirac(points[best_j], candidate.m0),
                      DiscreteMeasure::zero(dim)};
        w.lhs = candidate.lambda0 * result.sampled_diameter;
        w.rhs = 2.0 * result.Lambda;
        w.margin = w.lhs - w.rhs;
        std::ostringstream note;
        note << "lambda0*diam=" << w.lhs << " exceeds 2*Lambda=" << w.rhs
             << "; the triangle through the zero measure cannot hold";
        w.note = note.str();
        result.witness = std::move(w);
    }
    return result;
}

CollapseResult mass_continuity_collapse_test(const ExtensionCandidate& candidate,
                                             const DiscreteMeasure& mu1,
                                             const DiscreteMeasure& mu2,
                                             std::span<const double> mass_sequence, double p) {
    if (!candidate.zero_distance)
        throw std::invalid_argument("collapse test: candidate needs a zero-distance rule");
    if (std::abs(total_mass(mu1) - 1.0) > 1e-9 || std::abs(total_mass(mu2) - 1.0) > 1e-9)
        throw std::invalid_argument("collapse test: mu1 and mu2 must be probability measures");

    CollapseResult result;
    result.profile_distance = candidate.lambda0 * wasserstein_distance(mu1, mu2, p);
    for (std::size_t k = 0; k < mass_sequence.size(); ++k) {
        const double m = mass_sequence[k];
        if (!(m > 0.0)) throw std::invalid_argument("collapse test: masses must be positive");
        const double rhs =
            candidate.zero_distance(m, mu1) + candidate.zero_distance(m, mu2);
        if (result.profile_distance > rhs) {
            ViolationWitness w;
            w.violated = "mass_continuity_chain";
            w.measures = {recompose(m, mu1), recompose(m, mu2), DiscreteMeasure::zero(mu1.dim())};
            w.lhs = result.profile_distance;
            w.rhs = rhs;
            w.margin = w.lhs - w.rhs;
            w.trial = k;
            std::ostringstream note;
            note << "m_k=" << m << ": lambda*W_p(mu1,mu2) exceeds d(0,m mu1)+d(0,m mu2)";
            w.note = note.str();
            result.witness = std::move(w);
            result.index = k;
            return result;
        }
    }
    return result;
}

InvarianceProbeReport isometry_invariance_probe(const ExtendedMetric& metric,
                                                std::span<const Isometry> isometries,
                                                std::span<const DiscreteMeasure> test_measures,
                                                double m0, double r, double tolerance) {
    if (isometries.empty() || test_measures.size() < 2)
        throw std::invalid_argument("invariance probe: need isometries and >= 2 test measures");
    if (!(m0 > 0.0) || !(r > 0.0) || !(m0 - r > 0.0))
        throw std::invalid_argument("invariance probe: need m0 > r > 0");
    for (const Isometry& iso : isometries) validate_isometry(iso);

    InvarianceProbeReport report;
    report.m0 = m0;
    report.r = r;
    report.tolerance = tolerance;

    std::uint64_t probe_index = 0;
    for (const Isometry& iso : isometries) {
        for (std::size_t i = 0; i < test_measures.size(); ++i) {
            for (std::size_t j = i + 1; j < test_measures.size(); ++j) {
                const double before = metric(test_measures[i], test_measures[j]);
                const double after = metric(pushforward_isometry(test_measures[i], iso),
                                            pushforward_isometry(test_measures[j], iso));
                const double dev = std::abs(after - before);
                report.max_deviation = std::max(report.max_deviation, dev);
                ++report.probes;
                ++probe_index;
                if (dev > tolerance) {
                    ViolationWitness w;
                    w.violated = "isometry_invariance";
                    w.measures = {test_measures[i], test_measures[j]};
                    w.lhs = after;
                    w.rhs = before;
                    w.margin = dev;
                    w.trial = probe_index;
                    w.note = "distance changed under an isometry pushforward";
                    report.witnesses.push_back(std::move(w));
                }
            }
        }
    }
    report.invariant = report.max_deviation <= tolerance;

    // Mass-continuity probe at m0 on a Dirac at the origin.
    const int dim = test_measures.front().dim();
    const Point origin(static_cast<std::size_t>(dim), 0.0);
    report.continuity_epsilon = 1e-6;
    const auto base = DiscreteMeasure::dirac(origin, m0);
    const double up =
        metric(DiscreteMeasure::dirac(origin, m0 + report.continuity_epsilon), base);
    const double down =
        metric(DiscreteMeasure::dirac(origin, m0 - report.continuity_epsilon), base);
    report.continuity_value = std::max(up, down);
    report.mass_continuous = report.continuity_value <= 1e-3;

    if (report.invariant && report.mass_continuous) {
        // Invariance transports the local bound at delta_0 to every delta_x,
        // so the sup over the closed mass window is the uniform constant.
        double bound = 0.0;
        const int samples = 20;
        for (int i = 0; i <= samples; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(samples);
            const double m = (m0 - r) + t * (2.0 * r);
            bound = std::max(bound, metric(DiscreteMeasure::dirac(origin, m), base));
        }
        report.derived_uniform_bound = bound;
    }
    return report;
}

} // namespace masscone
