#include "masscone/metric_families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "masscone/errors.hpp"
#include "masscone/transport.hpp"

namespace masscone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double profile_distance(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, double p) {
    return wasserstein_distance(decompose(mu1).profile, decompose(mu2).profile, p);
}

void require_positive_mass(const DiscreteMeasure& mu, const char* who) {
    if (total_mass(mu) <= 0.0) throw ZeroMassError(std::string(who) + ": zero-mass input");
}

} // namespace

MassDistance discrete_mass_distance() {
    MassDistance d;
    // Masses within the workspace mass tolerance count as equal; strict ==
    // would see the ulp noise recompose() leaves on equal-mass fibers.
    d.eval = [](double a, double b) { return std::abs(a - b) <= 1e-9 ? 0.0 : 1.0; };
    d.bound = 1.0;
    d.name = "discrete";
    return d;
}

MassDistance capped_mass_distance(double cap) {
    if (cap <= 0.0) throw std::invalid_argument("capped mass distance: cap must be positive");
    MassDistance d;
    d.eval = [cap](double a, double b) { return std::min(std::abs(a - b), cap); };
    d.bound = cap;
    d.name = "capped";
    return d;
}

int Domain::dim() const {
    if (kind == Kind::box) return box.dim();
    return points.empty() ? 0 : static_cast<int>(points.front().size());
}

bool Domain::contains(const Point& x, double tol) const {
    if (kind == Kind::box) return box.contains(x, tol);
    for (const Point& y : points) {
        if (y.size() != x.size()) continue;
        bool close = true;
        for (std::size_t a = 0; a < x.size() && close; ++a)
            close = std::abs(x[a] - y[a]) <= tol;
        if (close) return true;
    }
    return false;
}

double Domain::diameter() const {
    if (kind == Kind::box) return box.diameter();
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, euclidean(points[i], points[j]));
    return best;
}

std::string family_name(MetricFamily family) {
    switch (family) {
    case MetricFamily::product_q: return "product_q";
    case MetricFamily::bounded_mass_distance: return "bounded_mass_distance";
    case MetricFamily::bounded_space_with_zero: return "bounded_space_with_zero";
    case MetricFamily::warped_dirac_cone: return "warped_dirac_cone";
    case MetricFamily::custom: return "custom";
    }
    return "unknown";
}

double dist_product_q(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, double lambda,
                      double q, double p) {
    if (!(lambda > 0.0)) throw std::invalid_argument("product_q: lambda must be positive");
    if (!(q >= 1.0)) throw std::invalid_argument("product_q: q must satisfy q >= 1");
    require_positive_mass(mu1, "dist_product_q");
    require_positive_mass(mu2, "dist_product_q");
    const double dm = std::abs(total_mass(mu1) - total_mass(mu2));
    const double w = lambda * profile_distance(mu1, mu2, p);
    if (q == kInf) return std::max(dm, w);
    if (q == 1.0) return dm + w;
    if (q == 2.0) return std::sqrt(dm * dm + w * w);
    return std::pow(std::pow(dm, q) + std::pow(w, q), 1.0 / q);
}

double dist_bounded_mass(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, double lambda,
                         double p, const MassDistance& mass_distance) {
    if (!(lambda > 0.0)) throw std::invalid_argument("bounded_mass: lambda must be positive");
    if (!mass_distance.eval) throw std::invalid_argument("bounded_mass: missing mass distance");
    require_positive_mass(mu1, "dist_bounded_mass");
    require_positive_mass(mu2, "dist_bounded_mass");
    return mass_distance.eval(total_mass(mu1), total_mass(mu2)) +
           lambda * profile_distance(mu1, mu2, p);
}

namespace {

void require_in_domain(const DiscreteMeasure& mu, const Domain& domain) {
    for (const Point& x : mu.points()) {
        if (!domain.contains(x))
            throw DomainError("support point leaves the declared bounded domain");
    }
}

double bounded_space_formula(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                             const ScalingFunction& f, double p) {
    if (mu1.is_zero() && mu2.is_zero()) return 0.0;
    if (mu1.is_zero()) return total_mass(mu2);
    if (mu2.is_zero()) return total_mass(mu1);
    const auto d1 = decompose(mu1);
    const auto d2 = decompose(mu2);
    const double fmin = std::min(f(d1.mass), f(d2.mass));
    return std::abs(d1.mass - d2.mass) + fmin * wasserstein_distance(d1.profile, d2.profile, p);
}

} // namespace

double dist_bounded_space_with_zero(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                    const ScalingFunction& f, double p, double diam_bound,
                                    const Domain& domain) {
    require_in_domain(mu1, domain);
    require_in_domain(mu2, domain);
    const auto report = check_f_admissible(f, diam_bound);
    if (!report.admissible())
        throw InadmissibleScalingError("scaling function fails the admissibility check");
    return bounded_space_formula(mu1, mu2, f, p);
}

ExtendedMetric::ExtendedMetric(ExtendedMetricSpec spec) : spec_(std::move(spec)) {
    if (spec_.id.empty()) spec_.id = family_name(spec_.family);
    if (!(spec_.p >= 1.0)) throw std::invalid_argument("metric spec: p must satisfy p >= 1");
    switch (spec_.family) {
    case MetricFamily::product_q:
        if (!(spec_.lambda > 0.0) || !(spec_.q >= 1.0))
            throw std::invalid_argument("product_q spec: need lambda > 0 and q >= 1");
        break;
    case MetricFamily::bounded_mass_distance:
        if (!(spec_.lambda > 0.0) || !spec_.mass_distance.eval)
            throw std::invalid_argument("bounded_mass spec: need lambda > 0 and a mass distance");
        break;
    case MetricFamily::bounded_space_with_zero: {
        if (!spec_.f.eval)
            throw std::invalid_argument("bounded_space spec: missing scaling function");
        if (spec_.diam_bound <= 0.0) spec_.diam_bound = spec_.domain.diameter();
        if (!(spec_.diam_bound > 0.0))
            throw std::invalid_argument("bounded_space spec: domain has no positive diameter");
        const auto report = check_f_admissible(spec_.f, spec_.diam_bound);
        if (!report.admissible())
            throw InadmissibleScalingError(
                "scaling function fails the admissibility check for this domain");
        break;
    }
    case MetricFamily::warped_dirac_cone:
        spec_.grid.validate();
        break;
    case MetricFamily::custom:
        if (!spec_.custom_eval)
            throw std::invalid_argument("custom metric spec: missing evaluator");
        break;
    }
}

bool ExtendedMetric::allows_zero() const {
    if (spec_.family == MetricFamily::bounded_space_with_zero) return true;
    if (spec_.family == MetricFamily::custom) return spec_.custom_allows_zero;
    return false;
}

double ExtendedMetric::fiber_scale(double m) const {
    switch (spec_.family) {
    case MetricFamily::product_q:
    case MetricFamily::bounded_mass_distance:
        return spec_.lambda;
    case MetricFamily::bounded_space_with_zero:
        return spec_.f(m);
    case MetricFamily::warped_dirac_cone:
        return 1.0;
    case MetricFamily::custom:
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double ExtendedMetric::operator()(const DiscreteMeasure& a, const DiscreteMeasure& b) const {
    switch (spec_.family) {
    case MetricFamily::product_q:
        return dist_product_q(a, b, spec_.lambda, spec_.q, spec_.p);
    case MetricFamily::bounded_mass_distance:
        return dist_bounded_mass(a, b, spec_.lambda, spec_.p, spec_.mass_distance);
    case MetricFamily::bounded_space_with_zero:
        // Parameters were validated at construction; only the supports vary.
        require_in_domain(a, spec_.domain);
        require_in_domain(b, spec_.domain);
        return bounded_space_formula(a, b, spec_.f, spec_.p);
    case MetricFamily::warped_dirac_cone: {
        if (a.size() != 1 || b.size() != 1)
            throw UnsupportedInstanceError(
                "warped_dirac_cone evaluates Dirac-cone measures (single atoms) only");
        const DiracConePoint src{total_mass(a), a.point(0)};
        const DiracConePoint dst{total_mass(b), b.point(0)};
        return warped_distance_dirac_cone(src, dst, spec_.warping, spec_.p, spec_.grid).value;
    }
    case MetricFamily::custom:
        return spec_.custom_eval(a, b);
    }
    throw std::invalid_argument("unknown metric family");
}

FiberProbeResult fiber_scaling_probe(const ExtendedMetric& metric, double m,
                                     const std::vector<ProbePair>& probe_pairs,
                                     double tolerance) {
    if (!(m > 0.0)) throw std::invalid_argument("fiber probe: mass must be positive");
    if (probe_pairs.empty()) throw std::invalid_argument("fiber probe: no probe pairs");
    FiberProbeResult result;
    result.ratios.reserve(probe_pairs.size());
    double lo = kInf, hi = -kInf, sum = 0.0;
    for (const auto& [mu1, mu2] : probe_pairs) {
        const double w = wasserstein_distance(mu1, mu2, metric.spec().p);
        if (w <= 1e-6)
            throw DegenerateProbeError("fiber probe pair has W_p <= 1e-6");
        const double ratio = metric(recompose(m, mu1), recompose(m, mu2)) / w;
        result.ratios.push_back(ratio);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        sum += ratio;
    }
    result.estimated_scale = sum / static_cast<double>(result.ratios.size());
    result.max_spread = hi - lo;
    result.consistent = result.max_spread <= tolerance;
    return result;
}

std::vector<ProbePair> random_probe_pairs(int dim, std::size_t count, Rng& rng, double box) {
    Box region;
    region.lo.assign(static_cast<std::size_t>(dim), -box);
    region.hi.assign(static_cast<std::size_t>(dim), box);
    return random_probe_pairs(region, count, rng);
}

std::vector<ProbePair> random_probe_pairs(const Box& box, std::size_t count, Rng& rng) {
    std::vector<ProbePair> pairs;
    pairs.reserve(count);
    auto profile = [&]() {
        const std::size_t k = 1 + rng.index(4);
        std::vector<Point> pts(k);
        std::vector<double> wts(k);
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            pts[i].resize(box.lo.size());
            for (std::size_t a = 0; a < pts[i].size(); ++a)
                pts[i][a] = rng.uniform(box.lo[a], box.hi[a]);
            wts[i] = 0.05 + rng.uniform();
            sum += wts[i];
        }
        for (double& w : wts) w /= sum;
        return DiscreteMeasure(std::move(pts), std::move(wts));
    };
    while (pairs.size() < count) {
        auto a = profile();
        auto b = profile();
        if (wasserstein_distance(a, b, 1.0) > 1e-3) pairs.emplace_back(std::move(a), std::move(b));
    }
    return pairs;
}

std::vector<ProbePair> dirac_probe_pairs(const GridSpec& grid, std::size_t count, Rng& rng) {
    grid.validate();
    const std::size_t dim = grid.box_lo.size();
    std::vector<ProbePair> pairs;
    pairs.reserve(count);
    auto node = [&]() {
        Point x(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            const double h =
                (grid.box_hi[a] - grid.box_lo[a]) / static_cast<double>(grid.spatial_steps - 1);
            x[a] = grid.box_lo[a] + static_cast<double>(rng.index(
                                        static_cast<std::size_t>(grid.spatial_steps))) * h;
        }
        return x;
    };
    while (pairs.size() < count) {
        Point a = node();
        Point b = node();
        if (euclidean(a, b) > 1e-3)
            pairs.emplace_back(DiscreteMeasure::dirac(std::move(a)),
                               DiscreteMeasure::dirac(std::move(b)));
    }
    return pairs;
}

} // namespace masscone
