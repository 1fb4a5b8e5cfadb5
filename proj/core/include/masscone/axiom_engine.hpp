#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "masscone/measure.hpp"
#include "masscone/metric_families.hpp"
#include "masscone/rng.hpp"
#include "masscone/scaling.hpp"

namespace masscone {

/// Seeded generator of bounded-support measures: 1..max_atoms uniform atoms
/// in a box, weights scaled to a log-uniform total mass. zero_probability
/// makes it occasionally emit the zero measure (for metrics that admit it).
struct MeasureSampler {
    int dim = 1;
    Box box{{0.0}, {1.0}};
    std::size_t min_atoms = 1;
    std::size_t max_atoms = 5;
    double mass_min = 0.1;
    double mass_max = 10.0;
    double zero_probability = 0.0;

    void validate() const; // SamplerError on degenerate configuration
    DiscreteMeasure sample(Rng& rng) const;
};

enum class MetricAxiom { non_negativity, identity, symmetry, triangle };
std::string axiom_name(MetricAxiom axiom);

/// A concrete violation: the measures involved, the two sides of the failed
/// inequality and the margin lhs - rhs (positive for genuine failures).
/// Witnesses re-verify by direct evaluation; see replay helpers below.
struct ViolationWitness {
    std::string violated; // axiom or obstruction inequality name
    std::vector<DiscreteMeasure> measures;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::uint64_t trial = 0;
    std::string note;
};

struct AxiomReport {
    std::string metric_id;
    MetricAxiom axiom = MetricAxiom::non_negativity;
    std::uint64_t trials = 0;
    std::uint64_t checks = 0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::vector<ViolationWitness> witnesses;

    bool passed() const { return witnesses.empty(); }
};

struct AxiomSuiteConfig {
    std::uint64_t trials = 10000;
    double tolerance = 1e-9;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0; // 0 = decide from MASSCONE_THREADS / hardware
};

/// Runs the four metric-axiom checks over seeded random triples. Each trial
/// derives its own generator from (seed, trial index), so reports do not
/// depend on thread scheduling. Every collected witness is re-verified by
/// recomputing its distances before the reports are returned.
std::vector<AxiomReport> run_axiom_suite(const ExtendedMetric& metric,
                                         const MeasureSampler& sampler,
                                         const AxiomSuiteConfig& config);

/// Recomputes the margin of an axiom witness from its stored measures.
double replay_witness_margin(const ExtendedMetric& metric, const ViolationWitness& witness);

/// (mass, profile) triple with m3 < m1 <= m2, as consumed by the
/// triangle-equivalence check.
struct MassProfileTriple {
    double m1 = 1.0;
    double m2 = 1.0;
    double m3 = 0.5;
    DiscreteMeasure y1 = DiscreteMeasure::zero(1);
    DiscreteMeasure y2 = DiscreteMeasure::zero(1);
    DiscreteMeasure y3 = DiscreteMeasure::zero(1);
};

struct TriangleEquivalenceReport {
    std::size_t triples = 0;
    double tolerance = 0.0;
    double max_margin = 0.0; // max over triples of lhs - rhs
    std::vector<ViolationWitness> violations;

    bool passed() const { return violations.empty(); }
};

/// Checks f(m1) d(y1,y2) - f(m3) (d(y1,y3) + d(y2,y3)) <= 2 (m1 - m3) + tol,
/// the inequality the bounded-space triangle inequality reduces to, with
/// d = W_p between the profiles.
TriangleEquivalenceReport check_triangle_equivalence(const ScalingFunction& f,
                                                     std::span<const MassProfileTriple> triples,
                                                     double p, double tolerance = 1e-9);

std::vector<MassProfileTriple> sample_mass_profile_triples(const MeasureSampler& sampler,
                                                           std::size_t count,
                                                           std::uint64_t seed);

} // namespace masscone
