#pragma once

#include <cstddef>
#include <vector>

#include "masscone/measure.hpp"

namespace masscone {

/// Dense cost matrix, entry (i, j) = |x_i - y_j|^p.
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double p = 1.0;
    std::vector<double> entries; // row-major

    double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

CostMatrix cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Coupling between two measures with prescribed marginals.
struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> couplings;     // row-major, mass units
    std::vector<double> row_marginals; // prescribed source weights
    std::vector<double> col_marginals; // prescribed target weights

    double operator()(std::size_t i, std::size_t j) const { return couplings[i * cols + j]; }
    /// Largest deviation of achieved row/column sums from the prescribed
    /// marginals; feasible plans stay below 1e-10 at desk scale.
    double max_marginal_deviation() const;
    double total_cost(const CostMatrix& cost) const;
};

struct OtResult {
    double distance = 0.0;
    TransportPlan plan;
};

struct OtOptions {
    double p = 1.0;
    /// When set, the target measure is rescaled to the source mass before
    /// solving, so ingestion rounding cannot block a fiber computation.
    bool rescale_to_match = false;
    double mass_tol = 1e-9;
};

/// Exact p-Wasserstein distance between equal-mass measures, solved as a
/// dense transportation LP (successive shortest augmenting paths with node
/// potentials). Single-atom instances bypass the LP and use the closed form
/// W_p(delta_x, delta_y) = |x - y|.
///
/// Throws MassMismatchError when masses differ beyond tolerance and
/// ZeroMassError when either mass is zero.
OtResult wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const OtOptions& opts);
OtResult wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p = 1.0);

/// Distance only.
double wasserstein_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p = 1.0);

/// Independent oracle: minimum over all k! permutation couplings, valid for
/// uniform equal-size supports (Birkhoff extremality). Throws
/// UnsupportedInstanceError for non-uniform weights or k > 8.
double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p = 1.0);

} // namespace masscone
