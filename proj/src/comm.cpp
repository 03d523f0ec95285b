#include "isac/comm.hpp"

#include <cmath>

namespace isac::comm {

namespace {

num::QuadSpec inner_spec(const num::QuadSpec& outer) {
    num::QuadSpec s = outer;
    s.rel_tol = std::max(outer.rel_tol * 0.1, 1e-10);
    return s;
}

} // namespace

double h_kernel(double z, int k, double alpha, double eta) {
    if (!(alpha > 2.0)) throw DomainError("h_kernel: alpha must be > 2");
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("h_kernel: eta must be in (0,1]");
    if (!(z > 0.0)) throw DomainError("h_kernel: z must be > 0");
    if (k < 1) throw DomainError("h_kernel: k must be >= 1");
    const double x = z / (z + std::pow(eta, -alpha));
    const double t1 =
        k * std::pow(z, 2.0 / alpha) * num::incomplete_beta(x, 1.0 - 2.0 / alpha, k + 2.0 / alpha);
    const double t2 = std::expm1(-k * std::log1p(z * std::pow(eta, alpha))) / (eta * eta);
    return t1 + t2;
}

double f_kernel(double z, double alpha) {
    if (!(alpha > 2.0)) throw DomainError("f_kernel: alpha must be > 2");
    if (!(z > 0.0)) throw DomainError("f_kernel: z must be > 0");
    return std::exp(-z) +
           std::pow(z, 2.0 / alpha) * num::lower_incomplete_gamma(1.0 - 2.0 / alpha, z);
}

double misr_gain(int l, double alpha) {
    if (l < 1) throw DomainError("misr_gain: l must be >= 1");
    if (!(alpha > 0.0)) throw DomainError("misr_gain: alpha must be > 0");
    return std::exp(std::lgamma(l + 0.5 * alpha) - std::lgamma(l + 1.0) -
                    std::lgamma(1.0 + 0.5 * alpha));
}

CommRateResult rc_exact(const model::NetworkConfig& cfg, const model::Allocation& alloc,
                        const num::QuadSpec& spec) {
    cfg.validate();
    const auto rep = model::validate_allocation(cfg, alloc);
    if (!rep.feasible) throw InfeasibleAllocation("rc_exact: " + rep.violation);
    if (!(cfg.alpha > 2.0)) throw DomainError("rc_exact: alpha must be > 2");
    const int n = rep.diversity_order;
    const int k = alloc.k;
    const int l = alloc.l;
    const double alpha = cfg.alpha;
    const auto ispec = inner_spec(spec);

    auto eta_expectation = [&](double z) {
        if (l == 1) return 1.0 / (h_kernel(z, k, alpha, 1.0) + 1.0);
        auto g = [&](double x) {
            return 2.0 * (l - 1) * x * std::pow(1.0 - x * x, l - 2) /
                   (h_kernel(z, k, alpha, x) + 1.0);
        };
        return num::integrate(g, 0.0, 1.0, ispec);
    };
    auto outer = [&](double z) {
        const double signal = -std::expm1(-n * std::log1p(z)) / z;
        return signal * eta_expectation(z);
    };
    CommRateResult res;
    res.method = CommMethod::ExactThm1;
    res.rate_nats = num::integrate_semi_infinite(outer, spec);
    res.ase = cfg.lambda_b * k * res.rate_nats;
    res.quad_error = spec.rel_tol * std::abs(res.rate_nats);
    return res;
}

CommRateResult rc_approx(const model::NetworkConfig& cfg, double k, int l, int j, int q,
                         const num::QuadSpec& spec) {
    cfg.validate();
    if (!(cfg.alpha > 2.0)) throw DomainError("rc_approx: alpha must be > 2");
    if (!(k >= 1.0)) throw DomainError("rc_approx: k must be >= 1");
    if (l < 1 || j < 1 || q < 1) throw DomainError("rc_approx: l, j, q must be >= 1");
    const double budget = cfg.m_t - static_cast<double>(j) * (q - 1) + 1.0 - k * l;
    const double y = misr_gain(l, cfg.alpha) * budget / k;
    if (y < 0.0) throw DomainError("rc_approx: relaxed DoF budget Y < 0");
    CommRateResult res;
    res.method = CommMethod::ApproxMisr;
    if (y == 0.0) {
        res.rate_nats = 0.0;
    } else {
        auto f = [&](double z) {
            return -std::expm1(-z * y) / (z * f_kernel(z, cfg.alpha));
        };
        res.rate_nats = num::integrate_semi_infinite(f, spec);
    }
    res.ase = cfg.lambda_b * k * res.rate_nats;
    res.quad_error = spec.rel_tol * std::abs(res.rate_nats);
    return res;
}

} // namespace isac::comm
