#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "masscone/axiom_engine.hpp"
#include "masscone/measure.hpp"
#include "masscone/metric_families.hpp"
#include "masscone/scaling.hpp"

namespace masscone {

/// Generator of base points of the unbounded set Sigma, truncated at reach
/// r_max (a finite computation can only exhibit growth, not certify
/// unboundedness). Deterministic for a fixed configuration.
struct SigmaSampler {
    enum class Kind {
        geometric_ray,  // origin plus radii step, 2*step, 4*step, ... along e1
        segment_grid,   // 0, step, 2*step, ... along e1 (controlled diameter)
        random_ball,    // seeded random directions with log-spaced radii
    };

    Kind kind = Kind::geometric_ray;
    int dim = 1;
    double r_max = 64.0;
    double step = 1.0;
    std::size_t count = 64; // random_ball only
    std::uint64_t seed = kDefaultSeed;

    std::vector<Point> sample() const;
};

/// Inputs of the scaling-obstruction search: the fiber constant C claimed to
/// bound sup_x d(m0 delta_x, m delta_x) for m near m0, and the mass window.
struct ObstructionConfig {
    std::optional<ExtendedMetric> candidate; // when absent, the fiber-synthetic
                                             // metric d(m mu1, m mu2) = f(m) W_p is probed
    SigmaSampler sigma;
    double m0 = 1.0;
    double r = 0.5;
    double C = 1.0;
    double p = 1.0;
    std::uint64_t probe_seed = kDefaultSeed;
};

/// Largest oscillation |f(m1) - f(m2)| compatible with the chain bound at the
/// given fiber separation: 4C / separation.
double oscillation_bound(double C, double separation);

struct ScalingViolationResult {
    std::optional<ViolationWitness> witness;
    double sampled_oscillation = 0.0;    // max |f(m1) - f(m2)| over the mass schedule
    double max_separation_examined = 0.0;
    std::size_t pairs_examined = 0;
};

/// Searches Dirac pairs at growing separations (geometric schedule) and mass
/// pairs inside (m0 - r, m0 + r) for a four-term triangle chain
/// m1 delta_x -> m2 delta_x -> m2 delta_y -> m1 delta_y whose combined
/// inequality |f(m1) - f(m2)| |x - y| <= 4C fails. Returns the first failure
/// in (separation, mass-pair) order, or nothing. The candidate metric, when
/// given, is fiber-probed first; FiberViolationError if inconsistent.
ScalingViolationResult find_scaling_violation(const ObstructionConfig& config,
                                              const ScalingFunction& f);

/// A metric on positive-mass measures extended by a zero-distance rule.
struct ExtensionCandidate {
    /// d(0, m mu) = d(m mu, 0).
    std::function<double(double, const DiscreteMeasure&)> zero_distance;
    double lambda0 = 1.0; // fiber scaling at m0
    double m0 = 1.0;
    /// Claimed sup over Sigma of d(0, m0 delta_x); sampled when absent.
    std::optional<double> claimed_sup;
};

struct ZeroExtensionResult {
    std::optional<ViolationWitness> witness;
    double sampled_diameter = 0.0;
    double Lambda = 0.0;
    double threshold = 0.0; // 2 Lambda / lambda0
};

/// Looks for a Dirac pair in Sigma with lambda0 |x - y| > 2 Lambda, which
/// contradicts the triangle inequality routed through the zero measure.
ZeroExtensionResult zero_extension_diameter_test(const ExtensionCandidate& candidate,
                                                 const SigmaSampler& sigma);

struct CollapseResult {
    std::optional<ViolationWitness> witness;
    std::optional<std::size_t> index; // position in the mass sequence
    double profile_distance = 0.0;    // lambda0 W_p(mu1, mu2)
};

/// Follows lambda W_p(mu1, mu2) <= d(0, m_k mu1) + d(0, m_k mu2) along a mass
/// sequence; the first index where the chain fails yields a witness.
CollapseResult mass_continuity_collapse_test(const ExtensionCandidate& candidate,
                                             const DiscreteMeasure& mu1,
                                             const DiscreteMeasure& mu2,
                                             std::span<const double> mass_sequence, double p);

struct InvarianceProbeReport {
    std::size_t probes = 0;
    double max_deviation = 0.0;
    bool invariant = false;
    double tolerance = 0.0;
    bool mass_continuous = false;
    double continuity_epsilon = 0.0;
    double continuity_value = 0.0; // d(m0 mu, (m0 +/- eps) mu), worst probe
    /// sup over |m - m0| <= r of d(m delta_0, m0 delta_0). Invariance
    /// transports this local bound to every base point, making it the uniform
    /// mass-variation constant over all of R^n; derived when invariance and
    /// mass continuity both hold.
    std::optional<double> derived_uniform_bound;
    double m0 = 1.0;
    double r = 0.5;
    std::vector<ViolationWitness> witnesses;
};

/// Checks d(T# mu, T# nu) = d(mu, nu) over all (isometry, pair) combinations
/// and probes mass continuity at m0; when both hold, reports the derived
/// uniform bound of the isometry-invariance argument.
InvarianceProbeReport isometry_invariance_probe(const ExtendedMetric& metric,
                                                std::span<const Isometry> isometries,
                                                std::span<const DiscreteMeasure> test_measures,
                                                double m0 = 1.0, double r = 0.5,
                                                double tolerance = 1e-9);

} // namespace masscone
