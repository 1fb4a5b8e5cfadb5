#include "masscone/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace masscone {

ScalingFunction scaling_identity() {
    ScalingFunction f;
    f.eval = [](double m) { return m; };
    f.name = "identity";
    f.claimed_lipschitz = 1.0;
    f.limit_at_zero = 0.0;
    return f;
}

ScalingFunction scaling_ratio() {
    ScalingFunction f;
    f.eval = [](double m) { return m / (1.0 + m); };
    f.name = "ratio";
    f.claimed_lipschitz = 1.0; // sup of 1/(1+m)^2
    f.limit_at_zero = 0.0;
    return f;
}

ScalingFunction scaling_linear_capped(double cap) {
    if (cap <= 0.0) throw std::invalid_argument("linear_capped: cap must be positive");
    ScalingFunction f;
    f.eval = [cap](double m) { return std::min(m, cap); };
    f.name = "linear_capped";
    f.claimed_lipschitz = 1.0;
    f.limit_at_zero = 0.0;
    return f;
}

ScalingFunction scaling_constant(double c) {
    if (c <= 0.0) throw std::invalid_argument("constant scaling must be positive");
    ScalingFunction f;
    f.eval = [c](double) { return c; };
    f.name = "constant";
    f.claimed_lipschitz = 0.0;
    f.limit_at_zero = c;
    return f;
}

ScalingFunction scaling_table(std::vector<double> masses, std::vector<double> values) {
    if (masses.size() != values.size() || masses.size() < 2)
        throw std::invalid_argument("scaling table needs >= 2 (mass, value) samples");
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (masses[i] <= 0.0) throw std::invalid_argument("table masses must be positive");
        if (i > 0 && masses[i] <= masses[i - 1])
            throw std::invalid_argument("table masses must be strictly increasing");
    }
    ScalingFunction f;
    f.name = "table";
    f.eval = [ms = std::move(masses), vs = std::move(values)](double m) {
        if (m <= ms.front()) return vs.front();
        if (m >= ms.back()) return vs.back();
        const auto it = std::upper_bound(ms.begin(), ms.end(), m);
        const std::size_t hi = static_cast<std::size_t>(it - ms.begin());
        const std::size_t lo = hi - 1;
        const double t = (m - ms[lo]) / (ms[hi] - ms[lo]);
        return vs[lo] + t * (vs[hi] - vs[lo]);
    };
    return f;
}

std::vector<double> MassGrid::values() const {
    if (!(m_min > 0.0) || !(m_max > m_min) || samples < 16)
        throw std::invalid_argument("mass grid needs 0 < m_min < m_max and >= 16 samples");
    std::vector<double> out;
    out.reserve(samples);
    const std::size_t log_part = samples / 2;
    const double lmin = std::log(m_min);
    const double lmax = std::log(m_max);
    for (std::size_t i = 0; i < log_part; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(log_part - 1);
        out.push_back(std::exp(lmin + t * (lmax - lmin)));
    }
    const std::size_t lin_part = samples - log_part;
    for (std::size_t i = 0; i < lin_part; ++i) {
        const double t = static_cast<double>(i + 1) / static_cast<double>(lin_part);
        out.push_back(m_min + t * (m_max - m_min));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AdmissibilityReport check_f_admissible(const ScalingFunction& f, double diam_bound,
                                       const MassGrid& grid) {
    if (!(diam_bound > 0.0)) throw std::invalid_argument("diam_bound must be positive");
    const std::vector<double> ms = grid.values();

    AdmissibilityReport rep;
    rep.quotient_cap = 1.0 / diam_bound;
    rep.grid_min = ms.front();
    rep.grid_max = ms.back();
    rep.samples = ms.size();

    std::vector<double> vals(ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) vals[i] = f(ms[i]);

    rep.monotone = true;
    double max_q = 0.0;
    for (std::size_t i = 1; i < ms.size(); ++i) {
        const double q = (vals[i] - vals[i - 1]) / (ms[i] - ms[i - 1]);
        max_q = std::max(max_q, std::abs(q));
        if (vals[i] < vals[i - 1] - 1e-12) rep.monotone = false;
    }
    rep.max_difference_quotient = max_q;

    if (f.claimed_lipschitz) {
        // Trust the analytic constant if the samples do not contradict it.
        const double claimed = *f.claimed_lipschitz;
        const bool claim_consistent = max_q <= claimed + 1e-6 * std::max(1.0, claimed);
        rep.quotient_ok = claim_consistent && claimed <= rep.quotient_cap + 1e-9;
        if (!claim_consistent) rep.max_difference_quotient = max_q;
    } else {
        rep.quotient_ok = max_q <= rep.quotient_cap * (1.0 + 1e-9) + 1e-12;
    }

    // Near zero an admissible f must decay below the Lipschitz cone through
    // the origin; this is what a sampled "limit equals 0" can certify.
    rep.value_near_zero = vals.front();
    rep.limit_zero_ok = rep.value_near_zero <= rep.quotient_cap * ms.front() + 1e-9;

    return rep;
}

} // namespace masscone
