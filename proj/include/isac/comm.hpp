#pragma once

#include <string>

#include "isac/model.hpp"
#include "isac/quad.hpp"

namespace isac::comm {

enum class CommMethod { ExactThm1, ApproxMisr };

inline std::string to_string(CommMethod m) {
    return m == CommMethod::ExactThm1 ? "analytic-exact" : "analytic-approx";
}

/// Average data rate in nats/s/Hz plus the network-level ASE
/// T_c = lambda_b * K * R_c in nats/s/Hz/km^2.
struct CommRateResult {
    double rate_nats = 0.0;
    double ase = 0.0;
    CommMethod method = CommMethod::ExactThm1;
    double quad_error = 0.0;
};

/// Interference exponent kernel of the exact rate expression,
///   H(z,K,alpha,eta) = K z^(2/a) B(z/(z+eta^-a), 1-2/a, K+2/a)
///                      + eta^-2 ((1+z eta^a)^-K - 1).
/// Requires alpha > 2; eta in (0,1].
double h_kernel(double z, int k, double alpha, double eta);

/// Baseline interference kernel F(z,alpha) = e^-z + z^(2/a) * gamma_low(1-2/a, z).
/// F(0) = 1 and F is increasing. Requires alpha > 2.
double f_kernel(double z, double alpha);

/// MISR gain of nulling the L-1 nearest interferers,
/// G_L = Gamma(L+a/2) / (Gamma(L+1) Gamma(1+a/2)); G_1 = 1.
double misr_gain(int l, double alpha);

/// Exact average rate: outer z-integral of the signal MGF factor against the
/// distance-ratio expectation of 1/(H+1). L = 1 uses the point mass eta = 1.
CommRateResult rc_exact(const model::NetworkConfig& cfg, const model::Allocation& alloc,
                        const num::QuadSpec& spec = num::QuadSpec::single_integral());

/// MISR approximation with continuous K >= 1 allowed. Throws DomainError if
/// the relaxed DoF budget Y < 0.
CommRateResult rc_approx(const model::NetworkConfig& cfg, double k, int l, int j, int q,
                         const num::QuadSpec& spec = num::QuadSpec::single_integral());

} // namespace isac::comm
