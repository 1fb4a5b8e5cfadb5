#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace masscone {

/// Mass-dependent scaling factor f: (0, inf) -> (0, inf), carried together
/// with the caller's claims about it. The evaluator is a black box; claims
/// are checked against a sampled grid by check_f_admissible.
struct ScalingFunction {
    std::function<double(double)> eval;
    std::string name = "custom";
    std::optional<double> claimed_lipschitz;
    bool claimed_monotone = true;
    std::optional<double> limit_at_zero;

    double operator()(double m) const { return eval(m); }
};

ScalingFunction scaling_identity();                 // f(m) = m
ScalingFunction scaling_ratio();                    // f(m) = m / (1 + m)
ScalingFunction scaling_linear_capped(double cap = 1.0); // f(m) = min(m, cap)
ScalingFunction scaling_constant(double c);
/// Piecewise-linear interpolation of (mass, value) samples, constant outside
/// the sampled range. Masses must be strictly increasing and positive. A
/// table meant to vanish at 0 (as the bounded-space admissibility check requires) should
/// bring its first sample down to (~0, ~0).
ScalingFunction scaling_table(std::vector<double> masses, std::vector<double> values);

/// Sampling grid on (0, m_max]: log-spaced points accumulating at zero plus a
/// uniform sweep, so both the limit at 0 and the global slope are probed.
struct MassGrid {
    double m_min = 1e-9;
    double m_max = 10.0;
    std::size_t samples = 2000;

    std::vector<double> values() const;
};

struct AdmissibilityReport {
    double max_difference_quotient = 0.0;
    double quotient_cap = 0.0; // 1 / diam_bound
    bool quotient_ok = false;
    bool monotone = false;
    double value_near_zero = 0.0;
    bool limit_zero_ok = false;
    double grid_min = 0.0;
    double grid_max = 0.0;
    std::size_t samples = 0;

    bool admissible() const { return quotient_ok && monotone && limit_zero_ok; }
};

/// Samples f on the grid and reports: (a) the maximum difference quotient
/// against 1/diam_bound, (b) monotonicity, (c) the value near zero, which
/// must be consistent with a Lipschitz decay to 0. A claimed analytic
/// Lipschitz constant overrides the sampled slope for (a) but is itself
/// verified against the samples within 1e-6.
AdmissibilityReport check_f_admissible(const ScalingFunction& f, double diam_bound,
                                       const MassGrid& grid = {});

} // namespace masscone
