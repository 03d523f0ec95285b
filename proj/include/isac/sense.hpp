#pragma once

#include <string>

#include "isac/model.hpp"
#include "isac/quad.hpp"

namespace isac::sense {

enum class SenseMethod { Prop3Hole, Thm3Cluster, NoHoleBaseline, Alpha2BetaSpecial };

inline std::string to_string(SenseMethod m) {
    switch (m) {
        case SenseMethod::Prop3Hole: return "prop3-hole";
        case SenseMethod::Thm3Cluster: return "thm3-cluster";
        case SenseMethod::NoHoleBaseline: return "no-hole-baseline";
        case SenseMethod::Alpha2BetaSpecial: return "alpha-2beta-special";
    }
    return "?";
}

/// Average radar information rate in nats/s/Hz and sensing ASE
/// T_s = lambda_b * J * R_s in nats/s/Hz/km^2.
struct SenseRateResult {
    double rate_nats = 0.0;
    double ase = 0.0;
    SenseMethod method = SenseMethod::Prop3Hole;
    double quad_error = 0.0;
};

// The echo SIR has round-trip signal pathloss R^(-2 beta) over the serving
// distance and one-way interference pathloss x^(-alpha) over BS-to-BS
// distances, so the conditional Laplace transform of the normalized
// interference z * I * R^(2 beta) is
//   exp( -pi lam K (z R^(2b))^(2/a) B(1, 1-2/a, K+2/a)
//        + lam R^2 int_0^2 2 acos(t/2) (1-(1+z R^(2b-a) t^-a)^-K) t dt )
// where the second term removes the interference-free hole of radius R
// around the target. The closed Beta form needs alpha > 2.

/// Conditional Laplace transform of sensing interference at normalized
/// distance r_serve; value in (0, 1]. Without hole correction the second
/// term is omitted (the baseline used for the underestimation comparison).
double sense_laplace_conditional(double z, double r_serve, const model::NetworkConfig& cfg,
                                 int k, bool hole_corrected);

/// Same quantity evaluated from the defining annulus integral by quadrature
/// (no Beta closed form); regression route for the analytic expression.
double sense_laplace_conditional_direct(double z, double r_serve,
                                        const model::NetworkConfig& cfg, int k,
                                        bool hole_corrected);

/// Conditional Laplace transform for the cluster case: interferers form the
/// PPP outside the disk of radius r_q around the serving BS (hole neglected).
double sense_laplace_cluster(double z, double r_serve, double r_q,
                             const model::NetworkConfig& cfg, int k);

/// Q = 1 radar information rate (no sensing nulling), hole-corrected by
/// default. j only enters the ASE prefactor.
SenseRateResult rs_q1(const model::NetworkConfig& cfg, int k,
                      const num::QuadSpec& spec = num::QuadSpec::nested(), int j = 1,
                      bool hole_corrected = true);

/// Q >= 2 rate: triple integral over z and the joint (R, r_Q) distance laws.
SenseRateResult rs_cluster(const model::NetworkConfig& cfg, int k, int j, int q,
                           const num::QuadSpec& spec = num::QuadSpec::nested());

/// Special case alpha = 2 beta, where the BS density cancels out of the rate
/// and the sensing ASE is exactly linear in lambda_b.
SenseRateResult ts_alpha_eq_2beta(const model::NetworkConfig& cfg, int k, int j,
                                  const num::QuadSpec& spec = num::QuadSpec::nested());

} // namespace isac::sense
