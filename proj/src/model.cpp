#include "isac/model.hpp"

#include <cmath>

namespace isac::model {

void NetworkConfig::validate() const {
    if (!(lambda_b > 0.0)) throw DomainError("NetworkConfig: lambda_b must be > 0");
    if (m_t < 1) throw DomainError("NetworkConfig: m_t must be >= 1");
    if (m_r < 1) throw DomainError("NetworkConfig: m_r must be >= 1");
    if (!(alpha >= 2.0)) throw DomainError("NetworkConfig: alpha must be >= 2");
    if (!(beta >= 2.0)) throw DomainError("NetworkConfig: beta must be >= 2");
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw DomainError("NetworkConfig: kappa must be in [0,1]");
    if (!(xi_sq > 0.0)) throw DomainError("NetworkConfig: xi_sq must be > 0");
    if (!(delta_t > 0.0)) throw DomainError("NetworkConfig: delta_t must be > 0");
    if (j_max < 1) throw DomainError("NetworkConfig: j_max must be >= 1");
    if (!(p_t > 0.0)) throw DomainError("NetworkConfig: p_t must be > 0");
}

FeasibilityReport validate_allocation(const NetworkConfig& cfg, const Allocation& alloc) {
    FeasibilityReport rep;
    const int used = alloc.k * alloc.l + alloc.sensing_nulls();
    rep.spare_dof = cfg.m_t - used;
    rep.diversity_order = cfg.m_t - used + 1;
    if (alloc.k < 1 || alloc.l < 1 || alloc.j < 1 || alloc.q < 1) {
        rep.feasible = false;
        rep.violation = "all of K, L, J, Q must be >= 1";
        return rep;
    }
    if (used > cfg.m_t) {
        rep.feasible = false;
        rep.violation = "KL + J(Q-1) = " + std::to_string(used) + " exceeds M_t = " +
                        std::to_string(cfg.m_t);
        return rep;
    }
    if (alloc.j > cfg.j_max) {
        rep.feasible = false;
        rep.violation = "J = " + std::to_string(alloc.j) + " exceeds J_max = " +
                        std::to_string(cfg.j_max);
        return rep;
    }
    return rep;
}

double pdf_eval(const DistanceLaw& law, double x) {
    switch (law.kind) {
        case DistanceLawKind::ServingDistance: {
            if (!(law.lambda_b > 0.0)) throw DomainError("serving-distance: lambda_b must be > 0");
            if (!(x > 0.0)) throw DomainError("serving-distance: R must be > 0");
            const double s = M_PI * law.lambda_b * x * x;
            return 2.0 * M_PI * law.lambda_b * x * std::exp(-s);
        }
        case DistanceLawKind::RatioEtaL: {
            if (law.order == 1)
                throw DegenerateLaw("ratio-eta-L: L = 1 is a point mass at eta = 1");
            if (law.order < 1) throw DomainError("ratio-eta-L: L must be >= 1");
            if (!(x > 0.0 && x < 1.0)) throw DomainError("ratio-eta-L: x must be in (0,1)");
            return 2.0 * (law.order - 1) * x * std::pow(1.0 - x * x, law.order - 2);
        }
        case DistanceLawKind::OrderQDistance: {
            if (!(law.lambda_b > 0.0)) throw DomainError("order-Q-distance: lambda_b must be > 0");
            if (law.order < 1) throw DomainError("order-Q-distance: Q must be >= 1");
            if (!(x > 0.0)) throw DomainError("order-Q-distance: r must be > 0");
            const double s = law.lambda_b * M_PI * x * x;
            return std::exp(law.order * std::log(s) - s - std::lgamma(law.order)) * 2.0 / x;
        }
    }
    throw DomainError("pdf_eval: unknown law");
}

double ccdf_rq_over_2r(double x, int q) {
    if (!(x >= 1.0)) throw DomainError("ccdf_rq_over_2r: x must be >= 1");
    if (q < 2) throw DomainError("ccdf_rq_over_2r: q must be >= 2");
    // 1 - (1 - 1/(4x^2))^(q-2), evaluated stably for large x.
    return -std::expm1(static_cast<double>(q - 2) * std::log1p(-1.0 / (4.0 * x * x)));
}

} // namespace isac::model
