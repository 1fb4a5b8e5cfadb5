#pragma once

// Shared helpers for the unit suites: terse constructors for small measures
// and a bounded random-measure generator.

#include <utility>
#include <vector>

#include "masscone/measure.hpp"
#include "masscone/rng.hpp"

namespace mct {

using masscone::DiscreteMeasure;
using masscone::Point;
using masscone::Rng;

/// 1-D measure from (position, weight) pairs.
inline DiscreteMeasure m1(std::vector<std::pair<double, double>> atoms) {
    std::vector<Point> pts;
    std::vector<double> wts;
    for (auto& [x, w] : atoms) {
        pts.push_back({x});
        wts.push_back(w);
    }
    return DiscreteMeasure(std::move(pts), std::move(wts));
}

inline DiscreteMeasure dirac1(double x, double w = 1.0) {
    return DiscreteMeasure::dirac({x}, w);
}

/// Random measure with 1..max_atoms atoms in [-box, box]^dim and total mass
/// drawn log-uniformly from [0.1, 10].
inline DiscreteMeasure random_measure(Rng& rng, int dim, std::size_t max_atoms = 5,
                                      double box = 1.0, double mass = -1.0) {
    const std::size_t k = 1 + rng.index(max_atoms);
    std::vector<Point> pts(k);
    std::vector<double> wts(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        Point x(static_cast<std::size_t>(dim));
        for (double& c : x) c = rng.uniform(-box, box);
        pts[i] = std::move(x);
        wts[i] = 0.05 + rng.uniform();
        sum += wts[i];
    }
    const double target = mass > 0.0 ? mass : rng.log_uniform(0.1, 10.0);
    for (double& w : wts) w *= target / sum;
    return DiscreteMeasure(std::move(pts), std::move(wts));
}

/// Random probability measure.
inline DiscreteMeasure random_profile(Rng& rng, int dim, std::size_t max_atoms = 5,
                                      double box = 1.0) {
    return random_measure(rng, dim, max_atoms, box, 1.0);
}

} // namespace mct
