#pragma once

#include <string>

#include "isac/errors.hpp"

namespace isac::model {

/// Physical and network parameters. Lengths are in km, densities per km^2.
/// p_t is carried for completeness; the SIR-based analysis is power-free.
struct NetworkConfig {
    double lambda_b = 1.0; ///< BS density (per km^2)
    int m_t = 20;          ///< transmit antennas per BS
    int m_r = 10;          ///< receive antennas per BS
    double p_t = 1.0;      ///< transmit power (W)
    double alpha = 4.0;    ///< communication pathloss exponent
    double beta = 2.0;     ///< one-way sensing pathloss exponent
    double xi_sq = 0.1;    ///< mean RCS power |xi|^2
    double kappa = 1.0;    ///< receive-filter mismatch factor in [0,1]
    double delta_t = 1.0;  ///< matching-filter gain
    int j_max = 10;        ///< max distinguishable targets per BS

    /// SIR prefactor delta_t * kappa * m_r * xi_sq.
    double sensing_prefactor() const { return delta_t * kappa * m_r * xi_sq; }

    /// Throws DomainError naming the first violated invariant.
    void validate() const;
};

/// Decision 4-tuple: users served, comm cluster size, targets probed,
/// sensing cluster size.
struct Allocation {
    int k = 1;
    int l = 1;
    int j = 1;
    int q = 1;

    /// Spatial DoF consumed by nulling, J(Q-1).
    int sensing_nulls() const { return j * (q - 1); }
    /// Average service requests received per BS, K(L-1) + J(Q-1).
    int request_load() const { return k * (l - 1) + sensing_nulls(); }
};

struct FeasibilityReport {
    bool feasible = true;
    std::string violation;  ///< empty when feasible
    int spare_dof = 0;      ///< m_t - (kl + j(q-1))
    int diversity_order = 0; ///< m_t - kl - j(q-1) + 1
};

/// Checks KL + J(Q-1) <= M_t and J <= J_max; never throws, the report
/// carries the verdict so optimizers can sweep infeasible corners.
FeasibilityReport validate_allocation(const NetworkConfig& cfg, const Allocation& alloc);

/// Geometric probability laws shared by the analytic and Monte Carlo paths.
enum class DistanceLawKind {
    ServingDistance, ///< nearest-BS distance, f(R) = 2 pi lam R exp(-pi lam R^2)
    RatioEtaL,       ///< nearest / L-th nearest ratio, f(x) = 2(L-1) x (1-x^2)^(L-2)
    OrderQDistance,  ///< Q-th nearest distance, f(r) = exp(-lam pi r^2) 2 (lam pi r^2)^Q / (r Gamma(Q))
};

struct DistanceLaw {
    DistanceLawKind kind;
    double lambda_b = 1.0; ///< used by ServingDistance and OrderQDistance
    int order = 1;         ///< L for RatioEtaL, Q for OrderQDistance

    static DistanceLaw serving(double lambda_b) {
        return {DistanceLawKind::ServingDistance, lambda_b, 1};
    }
    static DistanceLaw ratio_eta(int l) { return {DistanceLawKind::RatioEtaL, 0.0, l}; }
    static DistanceLaw order_q(double lambda_b, int q) {
        return {DistanceLawKind::OrderQDistance, lambda_b, q};
    }
};

/// Density value at x. Throws DomainError outside the support and
/// DegenerateLaw for the L = 1 ratio law (point mass at 1).
double pdf_eval(const DistanceLaw& law, double x);

/// CCDF of the hole-clearance ratio, P[r_Q / 2R >= x] = 1 - (1 - 1/(4x^2))^(Q-2).
double ccdf_rq_over_2r(double x, int q);

} // namespace isac::model
