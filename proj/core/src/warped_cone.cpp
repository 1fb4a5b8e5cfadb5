#include "masscone/warped_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "masscone/errors.hpp"
#include "masscone/transport.hpp"

namespace masscone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(const DiscreteMeasure& mu, const char* who) {
    if (mu.is_zero() || std::abs(total_mass(mu) - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": expected a probability measure");
}

} // namespace

Point weighted_barycenter(const DiscreteMeasure& mu) {
    if (mu.is_zero()) throw ZeroMassError("weighted_barycenter: zero measure");
    const double m = total_mass(mu);
    Point bary(static_cast<std::size_t>(mu.dim()), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t a = 0; a < bary.size(); ++a)
            bary[a] += mu.weight(i) * mu.point(i)[a] / m;
    return bary;
}

Point weighted_geometric_median(const DiscreteMeasure& mu, double tol, int max_iters) {
    if (mu.is_zero()) throw ZeroMassError("weighted_geometric_median: zero measure");
    if (mu.dim() == 1) {
        // Exact weighted median: first support point where the cumulative
        // weight reaches half the total.
        std::vector<std::size_t> order(mu.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return mu.point(a)[0] < mu.point(b)[0];
        });
        const double half = 0.5 * total_mass(mu);
        double acc = 0.0;
        for (std::size_t i : order) {
            acc += mu.weight(i);
            if (acc >= half) return mu.point(i);
        }
        return mu.point(order.back());
    }

    // Weiszfeld iteration from the barycenter, with a small floor on the
    // distances to step over support points.
    Point x = weighted_barycenter(mu);
    for (int it = 0; it < max_iters; ++it) {
        double denom = 0.0;
        Point next(x.size(), 0.0);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double d = std::max(euclidean(mu.point(i), x), 1e-13);
            const double c = mu.weight(i) / d;
            denom += c;
            for (std::size_t a = 0; a < x.size(); ++a) next[a] += c * mu.point(i)[a];
        }
        for (double& c : next) c /= denom;
        const double moved = euclidean(next, x);
        x = std::move(next);
        if (moved <= tol) break;
    }
    return x;
}

double eval_warping(const WarpingFunction& g, const DiscreteMeasure& profile) {
    switch (g.kind) {
    case WarpKind::constant:
        if (!(g.c > 0.0)) throw std::invalid_argument("constant warping must be positive");
        return g.c;
    case WarpKind::one_plus_wp_to_origin: {
        require_probability(profile, "eval_warping");
        const Point origin(static_cast<std::size_t>(profile.dim()), 0.0);
        return 1.0 + wasserstein_distance(profile, DiscreteMeasure::dirac(origin), g.p);
    }
    case WarpKind::one_plus_inf_wp_to_diracs: {
        require_probability(profile, "eval_warping");
        Point best;
        if (g.p == 2.0) {
            best = weighted_barycenter(profile);
        } else if (g.p == 1.0) {
            best = weighted_geometric_median(profile);
        } else {
            throw UnsupportedExponentError(
                "inf-over-Diracs warping is only evaluated for p in {1, 2}");
        }
        return 1.0 + wasserstein_distance(profile, DiscreteMeasure::dirac(best), g.p);
    }
    case WarpKind::custom: {
        if (!g.custom_eval) throw std::invalid_argument("custom warping without evaluator");
        const double v = g.custom_eval(profile);
        if (!std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument("custom warping returned a non-positive value");
        return v;
    }
    }
    throw std::invalid_argument("unknown warping kind");
}

double path_length(const ConePath& path, const WarpingFunction& g, double p, WarpEval mode) {
    const auto& wp = path.waypoints;
    if (wp.size() < 2) throw std::invalid_argument("cone path needs >= 2 waypoints");
    if (!path.times.empty()) {
        if (path.times.size() != wp.size())
            throw std::invalid_argument("time grid does not match waypoints");
        for (std::size_t k = 0; k < path.times.size(); ++k) {
            if (path.times[k] < 0.0 || path.times[k] > 1.0 ||
                (k > 0 && path.times[k] <= path.times[k - 1]))
                throw std::invalid_argument("time grid must be increasing within [0, 1]");
        }
    }
    for (const auto& w : wp) {
        if (!(w.mass > 0.0)) throw std::invalid_argument("cone path masses must be positive");
        require_probability(w.profile, "path_length");
    }

    double length = 0.0;
    double g_left = eval_warping(g, wp.front().profile);
    for (std::size_t k = 0; k + 1 < wp.size(); ++k) {
        const double g_right = eval_warping(g, wp[k + 1].profile);
        const double g_seg = (mode == WarpEval::left) ? g_left : 0.5 * (g_left + g_right);
        const double dm = wp[k + 1].mass - wp[k].mass;
        const double dw = wasserstein_distance(wp[k].profile, wp[k + 1].profile, p);
        length += std::sqrt(g_seg * g_seg * dm * dm + dw * dw);
        g_left = g_right;
    }
    return length;
}

GridSpec GridSpec::refined(int doublings) const {
    GridSpec out = *this;
    for (int k = 0; k < doublings; ++k) {
        out.mass_steps = 2 * (out.mass_steps - 1) + 1;
        out.spatial_steps = 2 * (out.spatial_steps - 1) + 1;
        out.stencil_radius *= 2;
    }
    return out;
}

void GridSpec::validate() const {
    if (mass_steps < 3 || spatial_steps < 3)
        throw GridTooCoarseError("grid needs at least 3 nodes per axis");
    if (!(mass_min > 0.0) || !(mass_max > mass_min))
        throw std::invalid_argument("grid mass range must satisfy 0 < mass_min < mass_max");
    if (box_lo.empty() || box_lo.size() != box_hi.size())
        throw std::invalid_argument("grid box corners must share a dimension >= 1");
    for (std::size_t a = 0; a < box_lo.size(); ++a) {
        if (!(box_hi[a] > box_lo[a]))
            throw std::invalid_argument("grid box must have positive extent on every axis");
    }
    if (stencil_radius < 1) throw std::invalid_argument("stencil radius must be >= 1");
}

namespace {

/// Node layout: mass level index times flattened spatial index.
struct ConeGrid {
    const GridSpec& spec;
    std::size_t dim;
    std::size_t spatial_nodes;
    double mass_step;
    std::vector<double> spatial_step;

    explicit ConeGrid(const GridSpec& s)
        : spec(s),
          dim(s.box_lo.size()),
          spatial_nodes(1),
          mass_step((s.mass_max - s.mass_min) / static_cast<double>(s.mass_steps - 1)) {
        for (std::size_t a = 0; a < dim; ++a) {
            spatial_step.push_back((s.box_hi[a] - s.box_lo[a]) /
                                   static_cast<double>(s.spatial_steps - 1));
            spatial_nodes *= static_cast<std::size_t>(s.spatial_steps);
        }
    }

    double mass_at(int mi) const { return spec.mass_min + static_cast<double>(mi) * mass_step; }

    Point point_at(std::size_t s) const {
        Point x(dim);
        for (std::size_t a = dim; a-- > 0;) {
            const std::size_t idx = s % static_cast<std::size_t>(spec.spatial_steps);
            s /= static_cast<std::size_t>(spec.spatial_steps);
            x[a] = spec.box_lo[a] + static_cast<double>(idx) * spatial_step[a];
        }
        return x;
    }

    int snap_mass(double m) const {
        const int i = static_cast<int>(std::lround((m - spec.mass_min) / mass_step));
        return std::clamp(i, 0, spec.mass_steps - 1);
    }

    std::size_t snap_point(const Point& x) const {
        std::size_t s = 0;
        for (std::size_t a = 0; a < dim; ++a) {
            const int i = static_cast<int>(std::lround((x[a] - spec.box_lo[a]) / spatial_step[a]));
            s = s * static_cast<std::size_t>(spec.spatial_steps) +
                static_cast<std::size_t>(std::clamp(i, 0, spec.spatial_steps - 1));
        }
        return s;
    }
};

} // namespace

WarpedDistanceResult warped_distance_dirac_cone(const DiracConePoint& src,
                                                const DiracConePoint& dst,
                                                const WarpingFunction& g, double p,
                                                const GridSpec& grid) {
    // W_p between Diracs is |x - y| for every p, so p only needs validating.
    if (!(p >= 1.0)) throw std::invalid_argument("warped distance: p must satisfy p >= 1");
    grid.validate();
    if (src.position.size() != grid.box_lo.size() || dst.position.size() != grid.box_lo.size())
        throw std::invalid_argument("endpoint dimension does not match the grid box");
    const Box box{grid.box_lo, grid.box_hi};
    if (src.mass < grid.mass_min - 1e-9 || src.mass > grid.mass_max + 1e-9 ||
        dst.mass < grid.mass_min - 1e-9 || dst.mass > grid.mass_max + 1e-9)
        throw DomainError("endpoint masses are not covered by the grid mass range");
    if (!box.contains(src.position) || !box.contains(dst.position))
        throw DomainError("endpoint positions are not covered by the grid box");

    const ConeGrid cone(grid);
    const std::size_t spatial = cone.spatial_nodes;
    const std::size_t total = spatial * static_cast<std::size_t>(grid.mass_steps);

    // g depends only on the spatial node for Dirac profiles; precompute it.
    std::vector<double> g_at(spatial);
    for (std::size_t s = 0; s < spatial; ++s) {
        const Point x = cone.point_at(s);
        switch (g.kind) {
        case WarpKind::constant:
            g_at[s] = g.c;
            break;
        case WarpKind::one_plus_wp_to_origin:
            g_at[s] = 1.0 + norm(x);
            break;
        case WarpKind::one_plus_inf_wp_to_diracs:
            g_at[s] = 1.0; // the infimum over Diracs vanishes on a Dirac
            break;
        case WarpKind::custom:
            g_at[s] = eval_warping(g, DiscreteMeasure::dirac(x));
            break;
        }
        if (!(g_at[s] > 0.0) || !std::isfinite(g_at[s]))
            throw std::invalid_argument("warping must be positive and finite on the grid");
    }

    // Stencil offsets: Chebyshev ball of the configured radius in (mass, space)
    // index coordinates, including non-primitive multiples so a coarse edge is
    // also an edge of every refinement.
    struct Offset {
        int dm;
        std::vector<int> dx;
    };
    std::vector<Offset> stencil;
    const int R = grid.stencil_radius;
    std::vector<int> dx(cone.dim, -R);
    for (;;) {
        for (int dm = -R; dm <= R; ++dm) {
            bool all_zero = dm == 0;
            if (all_zero) {
                all_zero = std::all_of(dx.begin(), dx.end(), [](int v) { return v == 0; });
            }
            if (!all_zero) stencil.push_back({dm, dx});
        }
        std::size_t a = 0;
        for (; a < cone.dim; ++a) {
            if (++dx[a] <= R) break;
            dx[a] = -R;
        }
        if (a == cone.dim) break;
    }

    const std::size_t src_id =
        static_cast<std::size_t>(cone.snap_mass(src.mass)) * spatial + cone.snap_point(src.position);
    const std::size_t dst_id =
        static_cast<std::size_t>(cone.snap_mass(dst.mass)) * spatial + cone.snap_point(dst.position);

    WarpedDistanceResult result;
    result.nodes = total;
    result.src_node = {cone.mass_at(static_cast<int>(src_id / spatial)),
                       cone.point_at(src_id % spatial)};
    result.dst_node = {cone.mass_at(static_cast<int>(dst_id / spatial)),
                       cone.point_at(dst_id % spatial)};

    if (src_id == dst_id) return result;

    std::vector<double> dist(total, kInf);
    std::vector<bool> done(total, false);
    using HeapItem = std::pair<double, std::size_t>;
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    dist[src_id] = 0.0;
    heap.push({0.0, src_id});

    std::vector<int> sidx(cone.dim);
    while (!heap.empty()) {
        const auto [d_u, u] = heap.top();
        heap.pop();
        if (done[u]) continue;
        done[u] = true;
        if (u == dst_id) break;

        const int mi = static_cast<int>(u / spatial);
        std::size_t s = u % spatial;
        for (std::size_t a = cone.dim; a-- > 0;) {
            sidx[a] = static_cast<int>(s % static_cast<std::size_t>(grid.spatial_steps));
            s /= static_cast<std::size_t>(grid.spatial_steps);
        }
        const double g_u = g_at[u % spatial];
        const double m_u = cone.mass_at(mi);

        for (const Offset& off : stencil) {
            const int mj = mi + off.dm;
            if (mj < 0 || mj >= grid.mass_steps) continue;
            std::size_t t = 0;
            bool ok = true;
            double space2 = 0.0;
            for (std::size_t a = 0; a < cone.dim; ++a) {
                const int ia = sidx[a] + off.dx[a];
                if (ia < 0 || ia >= grid.spatial_steps) {
                    ok = false;
                    break;
                }
                const double dxa = static_cast<double>(off.dx[a]) * cone.spatial_step[a];
                space2 += dxa * dxa;
                t = t * static_cast<std::size_t>(grid.spatial_steps) + static_cast<std::size_t>(ia);
            }
            if (!ok) continue;
            const std::size_t v = static_cast<std::size_t>(mj) * spatial + t;
            if (done[v]) continue;
            const double dm = cone.mass_at(mj) - m_u;
            const double w = std::sqrt(g_u * g_u * dm * dm + space2);
            ++result.relaxed_edges;
            if (d_u + w < dist[v]) {
                dist[v] = d_u + w;
                heap.push({dist[v], v});
            }
        }
    }

    result.value = dist[dst_id];
    if (!std::isfinite(result.value)) throw Error("warped distance: target unreachable");
    return result;
}

} // namespace masscone
