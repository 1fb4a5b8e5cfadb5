#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "masscone/measure.hpp"

namespace masscone {

enum class WarpKind {
    constant,                  // g = c
    one_plus_wp_to_origin,     // g(mu) = 1 + W_p(mu, delta_0)
    one_plus_inf_wp_to_diracs, // g(mu) = 1 + inf_x W_p(mu, delta_x)
    custom,
};

/// Warping factor applied to the mass component of a cone path's speed.
struct WarpingFunction {
    WarpKind kind = WarpKind::constant;
    double c = 1.0;     // constant value
    double p = 1.0;     // exponent of the underlying W_p
    std::function<double(const DiscreteMeasure&)> custom_eval;
};

/// Evaluates g on a probability measure. The infimum over Diracs is realized
/// by the weighted barycenter for p = 2 and the weighted geometric median for
/// p = 1; other exponents throw UnsupportedExponentError.
double eval_warping(const WarpingFunction& g, const DiscreteMeasure& profile);

/// Mean of the support weighted by the (normalized) weights.
Point weighted_barycenter(const DiscreteMeasure& mu);

/// Minimizer of sum_i w_i |x_i - x| (Weiszfeld; exact weighted median in 1-D).
Point weighted_geometric_median(const DiscreteMeasure& mu, double tol = 1e-11,
                                int max_iters = 512);

/// Piecewise-linear curve in the mass cone given by its waypoints.
struct ConeWaypoint {
    double mass = 1.0;
    DiscreteMeasure profile; // probability measure
};

struct ConePath {
    std::vector<ConeWaypoint> waypoints;
    /// Optional time grid on [0, 1]; uniform when empty. The discrete length
    /// depends only on the waypoint sequence.
    std::vector<double> times;
};

enum class WarpEval {
    left,        // g at the left waypoint of each segment
    trapezoidal, // average of the two endpoint values (restores reversal symmetry)
};

/// Discrete length: sum_k sqrt(g^2(rho_k) (m_{k+1} - m_k)^2 + W_p(rho_k, rho_{k+1})^2).
double path_length(const ConePath& path, const WarpingFunction& g, double p,
                   WarpEval mode = WarpEval::left);

/// Point of the Dirac cone: the measure mass * delta_position.
struct DiracConePoint {
    double mass = 1.0;
    Point position;
};

/// Discretization of the Dirac cone: mass grid times a spatial grid over a
/// box, nodes connected within a Chebyshev stencil. refined() doubles the
/// resolution of every axis and the stencil radius, so every coarse edge is
/// also a fine edge and graph distances can only decrease under refinement.
struct GridSpec {
    double mass_min = 0.5;
    double mass_max = 2.5;
    int mass_steps = 13;
    Point box_lo;
    Point box_hi;
    int spatial_steps = 81;
    int stencil_radius = 1;

    GridSpec refined(int doublings = 1) const;
    void validate() const; // GridTooCoarseError on fewer than 3 nodes per axis
};

struct WarpedDistanceResult {
    double value = 0.0;
    DiracConePoint src_node; // endpoints snapped to grid nodes
    DiracConePoint dst_node;
    std::size_t nodes = 0;
    std::size_t relaxed_edges = 0;
};

/// Shortest path between two Dirac-cone points on the grid graph whose edge
/// weights are one-segment path lengths. The value is an upper bound on the
/// continuum warped distance and is non-increasing under refined().
WarpedDistanceResult warped_distance_dirac_cone(const DiracConePoint& src,
                                                const DiracConePoint& dst,
                                                const WarpingFunction& g, double p,
                                                const GridSpec& grid);

} // namespace masscone
