#include "isac/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace isac::mc {

namespace {

// Stream layout per realization index i: geometry attempts use substreams
// (i << 8) + a, channel/gain/angle draws use (i << 8) + 255.
constexpr std::uint64_t kStreamStride = 256;
constexpr std::uint64_t kDrawSub = 255;
constexpr int kMaxGeomAttempts = 200;
constexpr int kMaxZfRetries = 100;
constexpr double kNullResidualTol = 1e-20;

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

Eigen::MatrixXcd draw_channels(rng::Philox& gen, int m_t, int cols) {
    Eigen::MatrixXcd h(m_t, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < m_t; ++r) h(r, c) = gen.cnormal();
    return h;
}

NetworkRealization sample_with_min(const model::NetworkConfig& cfg, double r_window_km,
                                   std::uint64_t seed, std::uint64_t base, int min_count) {
    int consumed = 0;
    for (;;) {
        NetworkRealization net = sample_network(cfg, r_window_km, seed, base + consumed);
        consumed += net.resamples + 1;
        if (net.bs_positions.cols() >= min_count) {
            net.resamples = consumed - 1;
            return net;
        }
        if (consumed >= kMaxGeomAttempts)
            throw DegenerateRealization("sample_with_min: window too small for requested ranks");
    }
}

struct ZfDraw {
    PrecoderSet ps;
    Eigen::MatrixXcd own;
};

ZfDraw zf_with_retries(rng::Philox& gen, int m_t, int k, int n_comm, int n_sense) {
    for (int attempt = 0; attempt < kMaxZfRetries; ++attempt) {
        Eigen::MatrixXcd own = draw_channels(gen, m_t, k);
        Eigen::MatrixXcd comm = draw_channels(gen, m_t, n_comm);
        Eigen::MatrixXcd sens = draw_channels(gen, m_t, n_sense);
        try {
            PrecoderSet ps = build_zf_precoder(m_t, own, comm, sens, gen);
            return {std::move(ps), std::move(own)};
        } catch (const RankDeficiency&) {
            continue;
        }
    }
    throw RankDeficiency("zf_with_retries: persistent rank deficiency");
}

} // namespace

void parallel_for(long n, int jobs, const std::function<void(long)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<long>(jobs, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

McEstimate reduce_estimate(const std::vector<double>& values, std::uint64_t seed) {
    McEstimate est;
    est.seed = seed;
    est.n_realizations = static_cast<long>(values.size());
    if (values.empty()) return est;
    KahanSum s;
    for (double v : values) s.add(v);
    est.mean = s.sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        KahanSum sq;
        for (double v : values) {
            const double d = v - est.mean;
            sq.add(d * d);
        }
        const double var = sq.sum / static_cast<double>(values.size() - 1);
        est.half_width_95 = 1.96 * std::sqrt(var / static_cast<double>(values.size()));
    }
    return est;
}

double default_window_km(const model::NetworkConfig& cfg) {
    return std::sqrt(300.0 / (cfg.lambda_b * M_PI));
}

double interference_tail_bound(const model::NetworkConfig& cfg, int k, double r_window_km) {
    if (!(cfg.alpha > 2.0)) throw DomainError("interference_tail_bound: alpha must be > 2");
    return 2.0 * M_PI * cfg.lambda_b * k * std::pow(r_window_km, 2.0 - cfg.alpha) /
           (cfg.alpha - 2.0);
}

NetworkRealization sample_network(const model::NetworkConfig& cfg, double r_window_km,
                                  std::uint64_t seed, std::uint64_t stream) {
    const double mean = cfg.lambda_b * M_PI * r_window_km * r_window_km;
    if (!(mean > 0.0))
        throw DegenerateRealization("sample_network: empty field (lambda_b * window = 0)");
    for (int attempt = 0; attempt < kMaxGeomAttempts; ++attempt) {
        rng::Philox gen(seed, stream + attempt);
        const long npts = gen.poisson(mean);
        if (npts == 0) continue;
        NetworkRealization net;
        net.seed = seed;
        net.stream = stream + attempt;
        net.resamples = attempt;
        net.bs_positions.resize(2, npts);
        int serving = 0;
        double best = std::numeric_limits<double>::infinity();
        for (long i = 0; i < npts; ++i) {
            const double r = r_window_km * std::sqrt(gen.uniform());
            const double th = 2.0 * M_PI * gen.uniform();
            net.bs_positions(0, i) = r * std::cos(th);
            net.bs_positions(1, i) = r * std::sin(th);
            if (r < best) {
                best = r;
                serving = static_cast<int>(i);
            }
        }
        net.serving_index = serving;
        return net;
    }
    throw DegenerateRealization("sample_network: zero BSs after retry budget");
}

PrecoderSet build_zf_precoder(int m_t, const Eigen::MatrixXcd& own_user_channels,
                              const Eigen::MatrixXcd& comm_null_rows,
                              const Eigen::MatrixXcd& sense_null_rows, rng::Philox& gen) {
    const int k = static_cast<int>(own_user_channels.cols());
    if (k < 1 || k > m_t) throw DomainError("build_zf_precoder: need 1 <= K <= m_t");
    if (own_user_channels.rows() != m_t || (comm_null_rows.cols() > 0 && comm_null_rows.rows() != m_t) ||
        (sense_null_rows.cols() > 0 && sense_null_rows.rows() != m_t))
        throw DomainError("build_zf_precoder: channel dimension mismatch");

    PrecoderSet ps;
    ps.offered_comm_rows = static_cast<int>(comm_null_rows.cols());
    ps.offered_sense_rows = static_cast<int>(sense_null_rows.cols());
    const int offered = ps.offered_comm_rows + ps.offered_sense_rows;
    const int capacity = m_t - k;

    // Abandon offered requests beyond the DoF budget as a uniform random
    // subset (seeded draw order: partial Fisher-Yates over the pool).
    std::vector<int> pick(offered);
    for (int i = 0; i < offered; ++i) pick[i] = i;
    int accepted = offered;
    if (offered > capacity) {
        for (int i = 0; i < capacity; ++i) {
            const int j = i + static_cast<int>(gen.uniform() * (offered - i));
            std::swap(pick[i], pick[std::min(j, offered - 1)]);
        }
        accepted = capacity;
    }

    Eigen::MatrixXcd stack(m_t, k + accepted);
    stack.leftCols(k) = own_user_channels;
    for (int i = 0; i < accepted; ++i) {
        const int idx = pick[i];
        if (idx < ps.offered_comm_rows) {
            stack.col(k + i) = comm_null_rows.col(idx);
            ++ps.accepted_comm_rows;
        } else {
            stack.col(k + i) = sense_null_rows.col(idx - ps.offered_comm_rows);
            ++ps.accepted_sense_rows;
        }
    }

    const Eigen::MatrixXcd gram = stack.adjoint() * stack;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw RankDeficiency("build_zf_precoder: stacked channel matrix numerically singular");
    const Eigen::MatrixXcd pseudo =
        stack * llt.solve(Eigen::MatrixXcd::Identity(stack.cols(), stack.cols()));

    ps.columns.resize(m_t, k);
    for (int c = 0; c < k; ++c) ps.columns.col(c) = pseudo.col(c).normalized();

    for (int i = 0; i < accepted; ++i) {
        const auto h = stack.col(k + i);
        for (int c = 0; c < k; ++c) {
            const double res = std::norm(h.dot(ps.columns.col(c)));
            ps.max_null_residual = std::max(ps.max_null_residual, res);
        }
    }
    if (ps.max_null_residual >= kNullResidualTol)
        throw RankDeficiency("build_zf_precoder: nulling residual above tolerance");
    return ps;
}

McEstimate mc_comm_rate(const model::NetworkConfig& cfg, const model::Allocation& alloc,
                        const McOptions& opt) {
    cfg.validate();
    const auto rep = model::validate_allocation(cfg, alloc);
    if (!rep.feasible) throw InfeasibleAllocation("mc_comm_rate: " + rep.violation);
    if (opt.n < 100) throw DomainError("mc_comm_rate: need n >= 100");
    const double rw = opt.r_window_km > 0.0 ? opt.r_window_km : default_window_km(cfg);
    const int n_comm = alloc.k * (alloc.l - 1);
    const int n_sense = alloc.sensing_nulls();
    std::vector<double> vals(opt.n);

    parallel_for(opt.n, opt.jobs, [&](long i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * kStreamStride;
        NetworkRealization net = sample_with_min(cfg, rw, opt.seed, base, alloc.l + 2);
        const long npts = net.bs_positions.cols();
        std::vector<double> dist(npts);
        for (long p = 0; p < npts; ++p) dist[p] = net.bs_positions.col(p).norm();
        std::sort(dist.begin(), dist.end());

        rng::Philox gen(opt.seed, base + kDrawSub);
        ZfDraw zf = zf_with_retries(gen, cfg.m_t, alloc.k, n_comm, n_sense);
        const double g_sig = std::norm(zf.own.col(0).dot(zf.ps.columns.col(0)));

        KahanSum interf;
        for (long p = alloc.l; p < npts; ++p)
            interf.add(gen.gamma_int(alloc.k) * std::pow(dist[p], -cfg.alpha));
        const double sir = g_sig * std::pow(dist[0], -cfg.alpha) / interf.sum;
        vals[i] = std::log1p(sir);
    });
    return reduce_estimate(vals, opt.seed);
}

McEstimate mc_sense_rate(const model::NetworkConfig& cfg, const model::Allocation& alloc,
                         const McOptions& opt) {
    cfg.validate();
    const auto rep = model::validate_allocation(cfg, alloc);
    if (!rep.feasible) throw InfeasibleAllocation("mc_sense_rate: " + rep.violation);
    if (opt.n < 100) throw DomainError("mc_sense_rate: need n >= 100");
    const double rw = opt.r_window_km > 0.0 ? opt.r_window_km : default_window_km(cfg);
    const double pre = cfg.sensing_prefactor();
    const int n_comm = alloc.k * (alloc.l - 1);
    const int n_sense = alloc.sensing_nulls();
    std::vector<double> vals(opt.n);

    parallel_for(opt.n, opt.jobs, [&](long i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * kStreamStride;
        NetworkRealization net = sample_with_min(cfg, rw, opt.seed, base, alloc.q + 2);
        const long npts = net.bs_positions.cols();
        const Eigen::Vector2d serving = net.bs_positions.col(net.serving_index);
        const double r_serve = serving.norm();

        rng::Philox gen(opt.seed, base + kDrawSub);
        ZfDraw zf = zf_with_retries(gen, cfg.m_t, alloc.k, n_comm, n_sense);

        // Transmit gain toward the target direction (half-wavelength array).
        const double theta = 2.0 * M_PI * gen.uniform();
        Eigen::VectorXcd steer(cfg.m_t);
        for (int m = 0; m < cfg.m_t; ++m) {
            const double phase = M_PI * m * std::cos(theta);
            steer(m) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
        double h_t = 0.0;
        for (int c = 0; c < alloc.k; ++c) h_t += std::norm(steer.dot(zf.ps.columns.col(c)));

        // Interferers ranked by distance from the serving BS; the Q-1
        // nearest are nulled by the cooperative cluster.
        std::vector<double> dd;
        dd.reserve(npts - 1);
        for (long p = 0; p < npts; ++p) {
            if (p == net.serving_index) continue;
            dd.push_back((net.bs_positions.col(p) - serving).norm());
        }
        std::sort(dd.begin(), dd.end());
        KahanSum interf;
        for (std::size_t p = alloc.q - 1; p < dd.size(); ++p)
            interf.add(gen.gamma_int(alloc.k) * std::pow(dd[p], -cfg.alpha));

        const double sir = pre * h_t * std::pow(r_serve, -2.0 * cfg.beta) / interf.sum;
        vals[i] = std::log1p(sir);
    });
    return reduce_estimate(vals, opt.seed);
}

std::vector<double> zf_gain_samples(int m_t, int k, int l, int j, int q, long n,
                                    std::uint64_t seed, int jobs) {
    std::vector<double> out(n);
    const int n_comm = k * (l - 1);
    const int n_sense = j * (q - 1);
    parallel_for(n, jobs, [&](long i) {
        rng::Philox gen(seed, static_cast<std::uint64_t>(i) * kStreamStride + kDrawSub);
        ZfDraw zf = zf_with_retries(gen, m_t, k, n_comm, n_sense);
        out[i] = std::norm(zf.own.col(0).dot(zf.ps.columns.col(0)));
    });
    return out;
}

std::vector<double> interferer_gain_samples(int m_t, int k, long n, std::uint64_t seed,
                                            int jobs) {
    std::vector<double> out(n);
    parallel_for(n, jobs, [&](long i) {
        rng::Philox gen(seed, static_cast<std::uint64_t>(i) * kStreamStride + kDrawSub);
        Eigen::MatrixXcd raw = draw_channels(gen, m_t, k);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
        const Eigen::MatrixXcd frame =
            qr.householderQ() * Eigen::MatrixXcd::Identity(m_t, k);
        Eigen::VectorXcd h(m_t);
        for (int r = 0; r < m_t; ++r) h(r) = gen.cnormal();
        out[i] = (frame.adjoint() * h).squaredNorm();
    });
    return out;
}

std::vector<double> target_gain_samples(int m_t, int k, long n, std::uint64_t seed, int jobs) {
    std::vector<double> out(n);
    parallel_for(n, jobs, [&](long i) {
        rng::Philox gen(seed, static_cast<std::uint64_t>(i) * kStreamStride + kDrawSub);
        ZfDraw zf = zf_with_retries(gen, m_t, k, 0, 0);
        const double theta = 2.0 * M_PI * gen.uniform();
        Eigen::VectorXcd steer(m_t);
        for (int m = 0; m < m_t; ++m) {
            const double phase = M_PI * m * std::cos(theta);
            steer(m) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
        double h_t = 0.0;
        for (int c = 0; c < k; ++c) h_t += std::norm(steer.dot(zf.ps.columns.col(c)));
        out[i] = h_t;
    });
    return out;
}

} // namespace isac::mc
