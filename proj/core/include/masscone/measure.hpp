#pragma once

#include <cstddef>
#include <vector>

#include "masscone/rng.hpp"

namespace masscone {

/// A point of R^n. The dimension is fixed per workspace and must be >= 1.
using Point = std::vector<double>;

double euclidean(const Point& a, const Point& b);
double norm(const Point& a);

/// Axis-aligned box, used both as sampling region and as bounded base domain.
struct Box {
    Point lo;
    Point hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Point& x, double tol = 1e-9) const;
    /// Euclidean diameter (length of the main diagonal).
    double diameter() const;
};

/// Finite non-negative measure with finite support: a list of atoms with
/// non-negative weights. The zero measure is represented by empty lists.
/// Instances are immutable after construction.
class DiscreteMeasure {
public:
    /// Zero measure of the given dimension.
    explicit DiscreteMeasure(int dim);
    DiscreteMeasure(std::vector<Point> points, std::vector<double> weights);

    static DiscreteMeasure zero(int dim) { return DiscreteMeasure(dim); }
    static DiscreteMeasure dirac(Point x, double weight = 1.0);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    bool is_zero() const { return points_.empty(); }

    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const Point& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

private:
    int dim_;
    std::vector<Point> points_;
    std::vector<double> weights_;
};

/// Sum of the weights; exactly 0 for the zero measure.
double total_mass(const DiscreteMeasure& mu);

/// A positive-mass measure split as (mass, probability profile).
struct MassDecomposition {
    double mass;
    DiscreteMeasure profile;
};

/// Splits mu into (|mu|, mu/|mu|). Throws ZeroMassError when |mu| = 0.
MassDecomposition decompose(const DiscreteMeasure& mu);

/// Inverse of decompose: scales every weight of the profile by mass.
DiscreteMeasure recompose(double mass, const DiscreteMeasure& profile);

/// Canonical form: zero weights dropped, atoms within coord_tol of each other
/// merged (weights summed), support sorted lexicographically. Measure
/// equality is defined on canonical forms.
DiscreteMeasure canonicalized(const DiscreteMeasure& mu, double coord_tol = 1e-9);

/// Equality of canonical forms: same support within tol per coordinate and
/// same weights within tol per atom.
bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol = 1e-9);

/// Affine isometry x -> Qx + b with Q orthogonal (row-major n x n).
struct Isometry {
    std::vector<double> rotation;
    Point translation;

    int dim() const { return static_cast<int>(translation.size()); }
    Point apply(const Point& x) const;

    static Isometry identity(int dim);
    static Isometry translate(Point b);
};

/// Throws NotAnIsometryError when Q^T Q deviates from I beyond tol.
void validate_isometry(const Isometry& iso, double tol = 1e-10);

/// Image measure T#mu: every support point mapped through T, weights kept.
/// Validates T first.
DiscreteMeasure pushforward_isometry(const DiscreteMeasure& mu, const Isometry& iso,
                                     double tol = 1e-10);

/// Random orthogonal matrix (Gram-Schmidt on Gaussian columns, may include
/// reflections) plus a translation drawn uniformly from [-shift, shift]^n.
Isometry random_isometry(int dim, Rng& rng, double shift = 1.0);

} // namespace masscone
