#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "masscone/measure.hpp"
#include "masscone/scaling.hpp"
#include "masscone/warped_cone.hpp"

namespace masscone {

/// Base distance on masses for the bounded-mass-distance family, carried with
/// its certified bound C_d.
struct MassDistance {
    std::function<double(double, double)> eval;
    double bound = 1.0; // C_d
    std::string name = "custom";
};

MassDistance discrete_mass_distance();            // 0/1 metric, bound 1
MassDistance capped_mass_distance(double cap);    // min(|a - b|, cap)

/// Bounded base domain: an axis-aligned box or a finite point set.
struct Domain {
    enum class Kind { box, finite_set };
    Kind kind = Kind::box;
    Box box{{0.0}, {1.0}};
    std::vector<Point> points; // finite_set support

    int dim() const;
    bool contains(const Point& x, double tol = 1e-9) const;
    /// Exact diameter of the probability measures over the domain under W_p:
    /// the Euclidean diameter, realized by Dirac pairs.
    double diameter() const;
};

enum class MetricFamily {
    product_q,
    bounded_mass_distance,
    bounded_space_with_zero,
    warped_dirac_cone,
    custom,
};

std::string family_name(MetricFamily family);

/// Parameters selecting one extended-distance family.
struct ExtendedMetricSpec {
    MetricFamily family = MetricFamily::product_q;
    std::string id;          // report label; defaults to the family name
    double lambda = 1.0;     // profile-term weight (product_q, bounded_mass)
    double q = 2.0;          // combination exponent; +inf handled explicitly
    double p = 1.0;          // Wasserstein exponent on profiles
    ScalingFunction f;       // bounded_space_with_zero
    MassDistance mass_distance;            // bounded_mass_distance
    double diam_bound = 0.0; // 0 = derive from the domain
    Domain domain;           // bounded_space_with_zero
    WarpingFunction warping; // warped_dirac_cone
    GridSpec grid;           // warped_dirac_cone
    std::function<double(const DiscreteMeasure&, const DiscreteMeasure&)> custom_eval;
    bool custom_allows_zero = false;
};

// The individual families as plain functions.

/// (| |mu1|-|mu2| |^q + lambda^q W_p(profiles)^q)^(1/q); max of the two terms
/// for q = inf.
double dist_product_q(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, double lambda,
                      double q, double p);

/// mass_distance(|mu1|, |mu2|) + lambda W_p(profiles).
double dist_bounded_mass(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, double lambda,
                         double p, const MassDistance& mass_distance);

/// |m1 - m2| + min(f(m1), f(m2)) W_p(profiles) on positive-mass inputs;
/// d(0, m mu) = m and d(0, 0) = 0. Checks that supports stay inside the
/// domain (DomainError) and that f is admissible for diam_bound
/// (InadmissibleScalingError).
double dist_bounded_space_with_zero(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                    const ScalingFunction& f, double p, double diam_bound,
                                    const Domain& domain);

/// Validated distance evaluator for one ExtendedMetricSpec. Construction
/// checks parameter completeness once (including the admissibility of f for
/// the bounded-space family), so evaluation loops stay cheap.
class ExtendedMetric {
public:
    explicit ExtendedMetric(ExtendedMetricSpec spec);

    double operator()(const DiscreteMeasure& a, const DiscreteMeasure& b) const;

    const ExtendedMetricSpec& spec() const { return spec_; }
    const std::string& id() const { return spec_.id; }
    bool allows_zero() const;
    /// The scaling factor of the fiber condition: lambda for product_q and
    /// bounded_mass, f(m) for bounded_space_with_zero, 1 for the warped cone.
    double fiber_scale(double m) const;

private:
    ExtendedMetricSpec spec_;
};

using ProbePair = std::pair<DiscreteMeasure, DiscreteMeasure>;

struct FiberProbeResult {
    double estimated_scale = 0.0; // mean of the ratios
    bool consistent = false;      // all ratios agree within tolerance
    double max_spread = 0.0;
    std::vector<double> ratios;
};

/// Estimates f(m) by the ratio d(m mu1, m mu2) / W_p(mu1, mu2) over probe
/// pairs of probability measures. A pair with W_p <= 1e-6 throws
/// DegenerateProbeError.
FiberProbeResult fiber_scaling_probe(const ExtendedMetric& metric, double m,
                                     const std::vector<ProbePair>& probe_pairs,
                                     double tolerance = 1e-8);

/// Random probability-measure probe pairs supported in [-box, box]^dim.
std::vector<ProbePair> random_probe_pairs(int dim, std::size_t count, Rng& rng,
                                          double box = 1.0);
/// Same, supported inside an explicit box (e.g. a metric's bounded domain).
std::vector<ProbePair> random_probe_pairs(const Box& box, std::size_t count, Rng& rng);

/// Dirac probe pairs aligned to the nodes of a cone grid (what the warped
/// family can evaluate exactly).
std::vector<ProbePair> dirac_probe_pairs(const GridSpec& grid, std::size_t count, Rng& rng);

} // namespace masscone
