#include "masscone/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "masscone/errors.hpp"

namespace masscone {

double euclidean(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double norm(const Point& a) {
    double s = 0.0;
    for (double c : a) s += c * c;
    return std::sqrt(s);
}

bool Box::contains(const Point& x, double tol) const {
    if (x.size() != lo.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    }
    return true;
}

double Box::diameter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const double d = hi[i] - lo[i];
        s += d * d;
    }
    return std::sqrt(s);
}

DiscreteMeasure::DiscreteMeasure(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("measure dimension must be >= 1");
}

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<double> weights)
    : dim_(0), points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.size() != weights_.size())
        throw std::invalid_argument("points and weights must have equal length");
    if (points_.empty())
        throw std::invalid_argument("empty atom list: use DiscreteMeasure::zero(dim)");
    dim_ = static_cast<int>(points_.front().size());
    if (dim_ < 1) throw std::invalid_argument("measure dimension must be >= 1");
    for (const Point& x : points_) {
        if (static_cast<int>(x.size()) != dim_)
            throw std::invalid_argument("all support points must share one dimension");
        for (double c : x) {
            if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
        }
    }
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("weights must be finite and non-negative");
    }
}

DiscreteMeasure DiscreteMeasure::dirac(Point x, double weight) {
    std::vector<Point> pts{std::move(x)};
    return DiscreteMeasure(std::move(pts), {weight});
}

double total_mass(const DiscreteMeasure& mu) {
    return std::accumulate(mu.weights().begin(), mu.weights().end(), 0.0);
}

MassDecomposition decompose(const DiscreteMeasure& mu) {
    const double m = total_mass(mu);
    if (m <= 0.0) throw ZeroMassError("decompose: measure has zero mass");
    std::vector<double> w = mu.weights();
    for (double& wi : w) wi /= m;
    return {m, DiscreteMeasure(mu.points(), std::move(w))};
}

DiscreteMeasure recompose(double mass, const DiscreteMeasure& profile) {
    if (mass <= 0.0) throw ZeroMassError("recompose: mass must be positive");
    std::vector<double> w = profile.weights();
    for (double& wi : w) wi *= mass;
    return DiscreteMeasure(profile.points(), std::move(w));
}

namespace {

bool points_close(const Point& a, const Point& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

} // namespace

DiscreteMeasure canonicalized(const DiscreteMeasure& mu, double coord_tol) {
    if (mu.is_zero()) return mu;

    const std::size_t k = mu.size();
    // Union-find over atoms closer than coord_tol in every coordinate. The
    // pairwise pass is O(k^2) but robust: tolerance-close atoms need not be
    // adjacent in any sort order.
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (points_close(mu.point(i), mu.point(j), coord_tol)) {
                parent[find(j)] = find(i);
            }
        }
    }

    std::vector<Point> pts;
    std::vector<double> wts;
    std::vector<std::ptrdiff_t> slot(k, -1);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::ptrdiff_t>(pts.size());
            pts.push_back(mu.point(root)); // first atom of the cluster is its representative
            wts.push_back(0.0);
        }
        wts[static_cast<std::size_t>(slot[root])] += mu.weight(i);
    }

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pts[a] < pts[b];
    });

    std::vector<Point> out_pts;
    std::vector<double> out_wts;
    for (std::size_t idx : order) {
        if (wts[idx] > 0.0) {
            out_pts.push_back(std::move(pts[idx]));
            out_wts.push_back(wts[idx]);
        }
    }
    if (out_pts.empty()) return DiscreteMeasure::zero(mu.dim());
    return DiscreteMeasure(std::move(out_pts), std::move(out_wts));
}

bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
    if (a.dim() != b.dim()) return false;
    const DiscreteMeasure ca = canonicalized(a, tol);
    const DiscreteMeasure cb = canonicalized(b, tol);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!points_close(ca.point(i), cb.point(i), tol)) return false;
        if (std::abs(ca.weight(i) - cb.weight(i)) > tol) return false;
    }
    return true;
}

Point Isometry::apply(const Point& x) const {
    const int n = dim();
    Point y(translation);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += rotation[static_cast<std::size_t>(i * n + j)] * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] += acc;
    }
    return y;
}

Isometry Isometry::identity(int dim) {
    Isometry iso;
    iso.rotation.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) iso.rotation[static_cast<std::size_t>(i * dim + i)] = 1.0;
    iso.translation.assign(static_cast<std::size_t>(dim), 0.0);
    return iso;
}

Isometry Isometry::translate(Point b) {
    Isometry iso = identity(static_cast<int>(b.size()));
    iso.translation = std::move(b);
    return iso;
}

void validate_isometry(const Isometry& iso, double tol) {
    const int n = iso.dim();
    if (n < 1 || iso.rotation.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw NotAnIsometryError("isometry: rotation block does not match dimension");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // (Q^T Q)_{ij} = sum_k Q_{ki} Q_{kj}
            double acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += iso.rotation[static_cast<std::size_t>(k * n + i)] *
                       iso.rotation[static_cast<std::size_t>(k * n + j)];
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(acc - expected) > tol)
                throw NotAnIsometryError("isometry: Q^T Q deviates from identity");
        }
    }
}

DiscreteMeasure pushforward_isometry(const DiscreteMeasure& mu, const Isometry& iso, double tol) {
    validate_isometry(iso, tol);
    if (mu.is_zero()) return mu;
    if (iso.dim() != mu.dim())
        throw NotAnIsometryError("isometry: dimension does not match the measure");
    std::vector<Point> pts;
    pts.reserve(mu.size());
    for (const Point& x : mu.points()) pts.push_back(iso.apply(x));
    return DiscreteMeasure(std::move(pts), mu.weights());
}

Isometry random_isometry(int dim, Rng& rng, double shift) {
    Isometry iso;
    iso.rotation.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
    // Gram-Schmidt on Gaussian rows; redraw on (numerically) dependent rows.
    std::vector<std::vector<double>> rows;
    while (static_cast<int>(rows.size()) < dim) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        for (double& c : v) c = rng.normal();
        for (const auto& u : rows) {
            double proj = 0.0;
            for (int j = 0; j < dim; ++j) proj += u[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
            for (int j = 0; j < dim; ++j) v[static_cast<std::size_t>(j)] -= proj * u[static_cast<std::size_t>(j)];
        }
        double len = 0.0;
        for (double c : v) len += c * c;
        len = std::sqrt(len);
        if (len < 1e-8) continue;
        for (double& c : v) c /= len;
        rows.push_back(std::move(v));
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            iso.rotation[static_cast<std::size_t>(i * dim + j)] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    iso.translation.assign(static_cast<std::size_t>(dim), 0.0);
    for (double& c : iso.translation) c = rng.uniform(-shift, shift);
    return iso;
}

} // namespace masscone
