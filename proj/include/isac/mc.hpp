#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "isac/model.hpp"
#include "isac/rng.hpp"

namespace isac::mc {

/// One sampled PPP field in a disk window centered on the typical point.
struct NetworkRealization {
    Eigen::Matrix2Xd bs_positions; ///< one BS per column (km)
    int serving_index = -1;        ///< nearest BS to the origin
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    int resamples = 0; ///< empty draws discarded before this realization
};

/// ZF precoder of the serving BS plus its accepted-request ledger.
struct PrecoderSet {
    Eigen::MatrixXcd columns; ///< M_t x K, unit-norm columns
    int accepted_comm_rows = 0;
    int accepted_sense_rows = 0;
    int offered_comm_rows = 0;
    int offered_sense_rows = 0;
    double max_null_residual = 0.0; ///< max |h^H w|^2 over accepted nulling rows
};

struct McEstimate {
    double mean = 0.0;
    double half_width_95 = 0.0;
    long n_realizations = 0;
    std::uint64_t seed = 0;
};

struct McOptions {
    long n = 20000;
    std::uint64_t seed = 1;
    double r_window_km = 0.0; ///< 0 selects the default window (>= 300 BSs expected)
    int jobs = 1;
};

/// Window radius such that the expected BS count is at least 300.
double default_window_km(const model::NetworkConfig& cfg);

/// Expected truncated interference power beyond the window,
/// 2 pi lambda K r^(2-alpha) / (alpha - 2); reported as a bias diagnostic.
double interference_tail_bound(const model::NetworkConfig& cfg, int k, double r_window_km);

/// Samples a PPP realization; empty draws are resampled on incremented
/// substreams (counted) and DegenerateRealization is thrown if the field
/// stays empty, e.g. for vanishing density.
NetworkRealization sample_network(const model::NetworkConfig& cfg, double r_window_km,
                                  std::uint64_t seed, std::uint64_t stream = 0);

/// Zero-forcing precoder from the stacked own/interference/sensing channels
/// (one channel vector per column). Offered nulling rows beyond the DoF
/// budget m_t - K are abandoned as a seeded uniform random subset. Throws
/// RankDeficiency when the stack is numerically singular or a nulling
/// residual exceeds 1e-20; callers resample channels.
PrecoderSet build_zf_precoder(int m_t, const Eigen::MatrixXcd& own_user_channels,
                              const Eigen::MatrixXcd& comm_null_rows,
                              const Eigen::MatrixXcd& sense_null_rows, rng::Philox& gen);

/// Channel-level estimate of the typical user's E[ln(1 + SIR_c)].
McEstimate mc_comm_rate(const model::NetworkConfig& cfg, const model::Allocation& alloc,
                        const McOptions& opt);

/// Channel-level estimate of the typical target's E[ln(1 + SIR_s)].
McEstimate mc_sense_rate(const model::NetworkConfig& cfg, const model::Allocation& alloc,
                         const McOptions& opt);

// Draw-level sample generators backing the distributional checks.

/// ZF effective gains |h_k^H w_k|^2 for the typical user.
std::vector<double> zf_gain_samples(int m_t, int k, int l, int j, int q, long n,
                                    std::uint64_t seed, int jobs = 1);

/// Aggregate gain sum_j |h^H w_j|^2 of an isotropic orthonormal K-column
/// precoder against an independent CN(0, I) channel (explicit construction).
std::vector<double> interferer_gain_samples(int m_t, int k, long n, std::uint64_t seed,
                                            int jobs = 1);

/// Transmit beamforming gain at the target direction, sum_k |a^H(theta) w_k|^2.
std::vector<double> target_gain_samples(int m_t, int k, long n, std::uint64_t seed,
                                        int jobs = 1);

/// Order-independent compensated mean/CI reduction used by all estimators.
McEstimate reduce_estimate(const std::vector<double>& values, std::uint64_t seed);

/// Deterministic index-chunked parallel map; fn(i) must only write state
/// owned by index i.
void parallel_for(long n, int jobs, const std::function<void(long)>& fn);

} // namespace isac::mc
