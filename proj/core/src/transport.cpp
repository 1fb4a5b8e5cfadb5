#include "masscone/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "masscone/errors.hpp"

namespace masscone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_valid_exponent(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("wasserstein exponent p must satisfy 1 <= p < inf");
}

/// Dense successive-shortest-path solver for the transportation problem.
/// Nodes 0..n-1 are sources, n..n+m-1 are sinks. Node potentials keep all
/// residual reduced costs non-negative, so plain Dijkstra applies at every
/// phase. Each augmentation saturates a source, a sink, or zeroes a coupling
/// entry; total flow reaches the common mass after finitely many phases.
class TransportSolver {
public:
    TransportSolver(const CostMatrix& cost, std::vector<double> supply, std::vector<double> demand)
        : cost_(cost),
          n_(supply.size()),
          m_(demand.size()),
          supply_(std::move(supply)),
          demand_(std::move(demand)),
          flow_(n_ * m_, 0.0),
          potential_(n_ + m_, 0.0) {}

    std::vector<double> solve() {
        const double total = std::accumulate(supply_.begin(), supply_.end(), 0.0);
        // Rounding in the flow updates can leave a few ulps of mass stranded;
        // anything below this threshold is not worth routing and is orders of
        // magnitude below the 1e-10 marginal feasibility requirement.
        const double eps = total * 1e-13;
        // Safety cap; never reached on well-posed instances.
        const std::size_t max_phases = 4 * (n_ * m_ + n_ + m_) + 64;
        std::size_t phases = 0;
        for (;;) {
            const double remaining = std::accumulate(supply_.begin(), supply_.end(), 0.0);
            if (remaining <= eps) break;
            if (++phases > max_phases)
                throw Error("transport solver failed to converge (degenerate instance?)");
            augment_once();
        }
        return flow_;
    }

private:
    // One Dijkstra phase over the residual graph followed by an augmentation
    // along the cheapest source-to-sink path. Returns the mass pushed.
    double augment_once() {
        const std::size_t total = n_ + m_;
        std::vector<double> dist(total, kInf);
        std::vector<std::ptrdiff_t> parent(total, -1);
        std::vector<bool> done(total, false);

        for (std::size_t i = 0; i < n_; ++i) {
            if (supply_[i] > 0.0) dist[i] = 0.0;
        }

        for (;;) {
            std::size_t best = total;
            double best_d = kInf;
            for (std::size_t v = 0; v < total; ++v) {
                if (!done[v] && dist[v] < best_d) {
                    best_d = dist[v];
                    best = v;
                }
            }
            if (best == total) break;
            done[best] = true;

            if (best < n_) {
                const std::size_t i = best;
                for (std::size_t j = 0; j < m_; ++j) {
                    const std::size_t v = n_ + j;
                    if (done[v]) continue;
                    const double rc = std::max(0.0, cost_(i, j) + potential_[i] - potential_[v]);
                    if (dist[i] + rc < dist[v]) {
                        dist[v] = dist[i] + rc;
                        parent[v] = static_cast<std::ptrdiff_t>(i);
                    }
                }
            } else {
                const std::size_t j = best - n_;
                for (std::size_t i = 0; i < n_; ++i) {
                    if (done[i] || flow_[i * m_ + j] <= 0.0) continue;
                    const double rc = std::max(0.0, -cost_(i, j) + potential_[best] - potential_[i]);
                    if (dist[best] + rc < dist[i]) {
                        dist[i] = dist[best] + rc;
                        parent[i] = static_cast<std::ptrdiff_t>(best);
                    }
                }
            }
        }

        // Cheapest sink that still wants mass.
        std::size_t target = total;
        double target_d = kInf;
        for (std::size_t j = 0; j < m_; ++j) {
            if (demand_[j] > 0.0 && dist[n_ + j] < target_d) {
                target_d = dist[n_ + j];
                target = n_ + j;
            }
        }
        if (target == total)
            throw Error("transport solver: no augmenting path (mass imbalance?)");

        for (std::size_t v = 0; v < total; ++v) {
            if (dist[v] < kInf) potential_[v] += std::min(dist[v], target_d);
        }

        // Walk back to a source, collecting the bottleneck.
        double bottleneck = demand_[target - n_];
        std::size_t v = target;
        while (parent[v] >= 0) {
            const std::size_t u = static_cast<std::size_t>(parent[v]);
            if (u < n_ && v >= n_) {
                // forward arc: unlimited capacity
            } else {
                // backward arc u = sink, v = source: capacity is current flow
                bottleneck = std::min(bottleneck, flow_[v * m_ + (u - n_)]);
            }
            v = u;
        }
        bottleneck = std::min(bottleneck, supply_[v]);

        v = target;
        while (parent[v] >= 0) {
            const std::size_t u = static_cast<std::size_t>(parent[v]);
            if (u < n_ && v >= n_) {
                flow_[u * m_ + (v - n_)] += bottleneck;
            } else {
                flow_[v * m_ + (u - n_)] -= bottleneck;
            }
            v = u;
        }
        supply_[v] -= bottleneck;
        demand_[target - n_] -= bottleneck;
        return bottleneck;
    }

    const CostMatrix& cost_;
    std::size_t n_;
    std::size_t m_;
    std::vector<double> supply_;
    std::vector<double> demand_;
    std::vector<double> flow_;
    std::vector<double> potential_;
};

OtResult dirac_closed_form(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    // When either side is a single atom, the coupling is forced: row i of the
    // plan carries exactly w_i. No LP and no pow/root round trip for the pure
    // Dirac pair, which keeps W_p(delta_x, delta_y) = |x - y| exact.
    TransportPlan plan;
    plan.rows = mu.size();
    plan.cols = nu.size();
    plan.row_marginals = mu.weights();
    plan.col_marginals = nu.weights();
    plan.couplings.assign(plan.rows * plan.cols, 0.0);

    double distance = 0.0;
    if (mu.size() == 1 && nu.size() == 1) {
        plan.couplings[0] = mu.weight(0);
        // (m |x-y|^p)^(1/p) = m^(1/p) |x-y|; exact for probability Diracs.
        distance = std::pow(mu.weight(0), 1.0 / p) * euclidean(mu.point(0), nu.point(0));
    } else if (nu.size() == 1) {
        double cost = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            plan.couplings[i] = mu.weight(i);
            cost += mu.weight(i) * std::pow(euclidean(mu.point(i), nu.point(0)), p);
        }
        distance = std::pow(cost, 1.0 / p);
    } else {
        double cost = 0.0;
        for (std::size_t j = 0; j < nu.size(); ++j) {
            plan.couplings[j] = nu.weight(j);
            cost += nu.weight(j) * std::pow(euclidean(mu.point(0), nu.point(j)), p);
        }
        distance = std::pow(cost, 1.0 / p);
    }
    return {distance, std::move(plan)};
}

} // namespace

CostMatrix cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    require_valid_exponent(p);
    if (mu.dim() != nu.dim())
        throw std::invalid_argument("cost_matrix: measures live in different dimensions");
    CostMatrix c;
    c.rows = mu.size();
    c.cols = nu.size();
    c.p = p;
    c.entries.resize(c.rows * c.cols);
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j)
            c.entries[i * c.cols + j] = std::pow(euclidean(mu.point(i), nu.point(j)), p);
    return c;
}

double TransportPlan::max_marginal_deviation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols; ++j) s += couplings[i * cols + j];
        worst = std::max(worst, std::abs(s - row_marginals[i]));
    }
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += couplings[i * cols + j];
        worst = std::max(worst, std::abs(s - col_marginals[j]));
    }
    return worst;
}

double TransportPlan::total_cost(const CostMatrix& cost) const {
    double total = 0.0;
    for (std::size_t k = 0; k < couplings.size(); ++k) total += couplings[k] * cost.entries[k];
    return total;
}

OtResult wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const OtOptions& opts) {
    require_valid_exponent(opts.p);
    const double mass_mu = total_mass(mu);
    const double mass_nu = total_mass(nu);
    if (mass_mu <= 0.0 || mass_nu <= 0.0)
        throw ZeroMassError("wasserstein_p: zero-mass input");
    if (mu.dim() != nu.dim())
        throw std::invalid_argument("wasserstein_p: measures live in different dimensions");

    DiscreteMeasure target = nu;
    if (std::abs(mass_mu - mass_nu) > opts.mass_tol * std::max(1.0, std::max(mass_mu, mass_nu))) {
        if (!opts.rescale_to_match)
            throw MassMismatchError("wasserstein_p: masses differ beyond tolerance");
        target = recompose(mass_mu, decompose(nu).profile);
    }

    if (mu.size() == 1 || target.size() == 1) return dirac_closed_form(mu, target, opts.p);

    const CostMatrix cost = cost_matrix(mu, target, opts.p);

    // Make supply and demand sums agree exactly in floating point: scale the
    // demand side, then let the largest demand entry absorb the residual.
    std::vector<double> supply = mu.weights();
    std::vector<double> demand = target.weights();
    const double s_sum = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double d_sum = std::accumulate(demand.begin(), demand.end(), 0.0);
    if (d_sum > 0.0 && s_sum != d_sum) {
        const double scale = s_sum / d_sum;
        for (double& d : demand) d *= scale;
    }
    const std::size_t absorber = static_cast<std::size_t>(
        std::max_element(demand.begin(), demand.end()) - demand.begin());
    double others = 0.0;
    for (std::size_t j = 0; j < demand.size(); ++j) {
        if (j != absorber) others += demand[j];
    }
    demand[absorber] = std::max(0.0, s_sum - others);

    TransportSolver solver(cost, supply, demand);
    TransportPlan plan;
    plan.rows = mu.size();
    plan.cols = target.size();
    plan.couplings = solver.solve();
    plan.row_marginals = mu.weights();
    plan.col_marginals = target.weights();

    const double total = plan.total_cost(cost);
    return {std::pow(std::max(0.0, total), 1.0 / opts.p), std::move(plan)};
}

OtResult wasserstein_p(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    OtOptions opts;
    opts.p = p;
    return wasserstein_p(mu, nu, opts);
}

double wasserstein_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    return wasserstein_p(mu, nu, p).distance;
}

double brute_force_wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    require_valid_exponent(p);
    const std::size_t k = mu.size();
    if (k == 0 || nu.size() != k)
        throw UnsupportedInstanceError("brute force oracle needs equal-size supports");
    if (k > 8)
        throw UnsupportedInstanceError("brute force oracle limited to k <= 8");
    const double w = mu.weight(0);
    for (std::size_t i = 0; i < k; ++i) {
        if (std::abs(mu.weight(i) - w) > 1e-12 || std::abs(nu.weight(i) - w) > 1e-12)
            throw UnsupportedInstanceError("brute force oracle needs uniform weights");
    }
    if (w <= 0.0) throw ZeroMassError("brute_force_wasserstein: zero-mass input");

    const CostMatrix cost = cost_matrix(mu, nu, p);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = kInf;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) total += cost(i, perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::pow(w * best, 1.0 / p);
}

} // namespace masscone
