#include "isac/sense.hpp"

#include <cmath>

namespace isac::sense {

namespace {

num::QuadSpec child(const num::QuadSpec& s, double factor) {
    num::QuadSpec c = s;
    c.rel_tol = std::max(s.rel_tol / factor, 1e-10);
    return c;
}

void check_exponents(const model::NetworkConfig& cfg) {
    if (!(cfg.alpha > 2.0))
        throw DomainError("sense: alpha must be > 2 (interference integral diverges)");
    if (!(cfg.beta >= 2.0)) throw DomainError("sense: beta must be >= 2");
    if (!(cfg.lambda_b > 0.0)) throw DomainError("sense: lambda_b must be > 0");
}

// 1 - (1 + x)^(-k), stable for small and huge x.
double one_minus_pow(double x, int k) { return -std::expm1(-k * std::log1p(x)); }

// Hole wedge integral int_0^2 2 acos(t/2) (1-(1+c t^-a)^-K) t dt.
double hole_wedge(double c, double alpha, int k, const num::QuadSpec& spec) {
    auto f = [&](double t) {
        return 2.0 * std::acos(0.5 * t) * one_minus_pow(c * std::pow(t, -alpha), k) * t;
    };
    return num::integrate(f, 0.0, 2.0, spec);
}

double serving_pdf(double lambda_b, double r) {
    return 2.0 * M_PI * lambda_b * r * std::exp(-M_PI * lambda_b * r * r);
}

} // namespace

double sense_laplace_conditional(double z, double r_serve, const model::NetworkConfig& cfg,
                                 int k, bool hole_corrected) {
    check_exponents(cfg);
    if (!(z > 0.0)) throw DomainError("sense_laplace_conditional: z must be > 0");
    if (!(r_serve > 0.0)) throw DomainError("sense_laplace_conditional: r_serve must be > 0");
    if (k < 1) throw DomainError("sense_laplace_conditional: k must be >= 1");
    const double a = cfg.alpha;
    const double s = z * std::pow(r_serve, 2.0 * cfg.beta);
    double expo = M_PI * cfg.lambda_b * k * std::pow(s, 2.0 / a) *
                  num::complete_beta(1.0 - 2.0 / a, k + 2.0 / a);
    if (hole_corrected) {
        const double c = z * std::pow(r_serve, 2.0 * cfg.beta - a);
        expo -= cfg.lambda_b * r_serve * r_serve *
                hole_wedge(c, a, k, num::QuadSpec::special_function());
    }
    return std::exp(-expo);
}

double sense_laplace_conditional_direct(double z, double r_serve,
                                        const model::NetworkConfig& cfg, int k,
                                        bool hole_corrected) {
    check_exponents(cfg);
    const double a = cfg.alpha;
    const double s = z * std::pow(r_serve, 2.0 * cfg.beta);
    auto annulus = [&](double x) {
        return one_minus_pow(s * std::pow(x, -a), k) * x;
    };
    double expo = 2.0 * M_PI * cfg.lambda_b *
                  num::integrate_semi_infinite(annulus, num::QuadSpec::special_function());
    if (hole_corrected) {
        auto wedge = [&](double x) {
            return 2.0 * std::acos(x / (2.0 * r_serve)) * one_minus_pow(s * std::pow(x, -a), k) * x;
        };
        expo -= cfg.lambda_b *
                num::integrate(wedge, 0.0, 2.0 * r_serve, num::QuadSpec::special_function());
    }
    return std::exp(-expo);
}

double sense_laplace_cluster(double z, double r_serve, double r_q,
                             const model::NetworkConfig& cfg, int k) {
    check_exponents(cfg);
    const double a = cfg.alpha;
    const double s = z * std::pow(r_serve, 2.0 * cfg.beta);
    const double y0 = s * std::pow(r_q, -a);
    const double t0 = y0 / (1.0 + y0);
    const double expo =
        M_PI * cfg.lambda_b *
        (r_q * r_q * std::expm1(-k * std::log1p(y0)) +
         k * std::pow(s, 2.0 / a) * num::incomplete_beta(t0, 1.0 - 2.0 / a, k + 2.0 / a));
    return std::exp(-expo);
}

SenseRateResult rs_q1(const model::NetworkConfig& cfg, int k, const num::QuadSpec& spec,
                      int j, bool hole_corrected) {
    check_exponents(cfg);
    if (k < 1) throw DomainError("rs_q1: k must be >= 1");
    if (j < 1) throw DomainError("rs_q1: j must be >= 1");
    SenseRateResult res;
    res.method = hole_corrected ? SenseMethod::Prop3Hole : SenseMethod::NoHoleBaseline;
    const double pre = cfg.sensing_prefactor();
    if (pre == 0.0) return res;
    const auto rspec = child(spec, 5.0);
    auto outer = [&](double z) {
        const double num = one_minus_pow(pre * z, k) / z;
        auto marg = [&](double r) {
            return sense_laplace_conditional(z, r, cfg, k, hole_corrected) *
                   serving_pdf(cfg.lambda_b, r);
        };
        return num * num::integrate_semi_infinite(marg, rspec);
    };
    res.rate_nats = num::integrate_semi_infinite(outer, spec);
    res.ase = cfg.lambda_b * j * res.rate_nats;
    res.quad_error = spec.rel_tol * std::abs(res.rate_nats);
    return res;
}

SenseRateResult rs_cluster(const model::NetworkConfig& cfg, int k, int j, int q,
                           const num::QuadSpec& spec) {
    check_exponents(cfg);
    if (q < 2) throw DomainError("rs_cluster: q must be >= 2");
    if (k < 1 || j < 1) throw DomainError("rs_cluster: k, j must be >= 1");
    SenseRateResult res;
    res.method = SenseMethod::Thm3Cluster;
    const double pre = cfg.sensing_prefactor();
    if (pre == 0.0) return res;
    const double lam = cfg.lambda_b;
    const auto rspec = child(spec, 5.0);
    const auto qspec = child(spec, 25.0);
    const model::DistanceLaw rq_law = model::DistanceLaw::order_q(lam, q);
    auto outer = [&](double z) {
        const double num = one_minus_pow(pre * z, k) / z;
        auto marg_r = [&](double r) {
            auto marg_q = [&](double rq) {
                return sense_laplace_cluster(z, r, rq, cfg, k) * model::pdf_eval(rq_law, rq);
            };
            return num::integrate_semi_infinite(marg_q, qspec) * serving_pdf(lam, r);
        };
        return num * num::integrate_semi_infinite(marg_r, rspec);
    };
    res.rate_nats = num::integrate_semi_infinite(outer, spec);
    res.ase = lam * j * res.rate_nats;
    res.quad_error = spec.rel_tol * std::abs(res.rate_nats);
    return res;
}

SenseRateResult ts_alpha_eq_2beta(const model::NetworkConfig& cfg, int k, int j,
                                  const num::QuadSpec& spec) {
    check_exponents(cfg);
    if (std::abs(cfg.alpha - 2.0 * cfg.beta) > 1e-12 * cfg.alpha)
        throw DomainError("ts_alpha_eq_2beta: requires alpha = 2 beta");
    if (k < 1 || j < 1) throw DomainError("ts_alpha_eq_2beta: k, j must be >= 1");
    SenseRateResult res;
    res.method = SenseMethod::Alpha2BetaSpecial;
    const double pre = cfg.sensing_prefactor();
    if (pre == 0.0) return res;
    const double b = cfg.beta;
    const double bc = num::complete_beta(1.0 - 1.0 / b, k + 1.0 / b);
    const auto wspec = child(spec, 25.0);
    auto big_i = [&](double z) {
        return k * std::pow(z, 1.0 / b) * bc - hole_wedge(z, 2.0 * b, k, wspec) / M_PI + 1.0;
    };
    auto outer = [&](double z) {
        return one_minus_pow(pre * z, k) / (z * big_i(z));
    };
    res.rate_nats = num::integrate_semi_infinite(outer, spec);
    res.ase = cfg.lambda_b * j * res.rate_nats;
    res.quad_error = spec.rel_tol * std::abs(res.rate_nats);
    return res;
}

} // namespace isac::sense
