#include "isac/region.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace isac::opt {

namespace {

double load_derivative(double v, int l, double alpha, const num::QuadSpec& spec) {
    const double gl = comm::misr_gain(l, alpha);
    const double w = 1.0 / v - l;
    auto f = [&](double z) {
        const double a = z * gl * w;
        return (-std::expm1(-a) - (z * gl / v) * std::exp(-a)) / (z * comm::f_kernel(z, alpha));
    };
    return num::integrate_semi_infinite(f, spec);
}

/// Memoizing evaluator for the sensing rate, which depends on (K, Q) only.
class SenseRateCache {
  public:
    SenseRateCache(const model::NetworkConfig& cfg, const num::QuadSpec& spec)
        : cfg_(cfg), spec_(spec) {}

    double rate(int k, int q) {
        const auto key = std::make_pair(k, q);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double r = q == 1 ? sense::rs_q1(cfg_, k, spec_).rate_nats
                                : sense::rs_cluster(cfg_, k, 1, q, spec_).rate_nats;
        cache_.emplace(key, r);
        return r;
    }

  private:
    const model::NetworkConfig& cfg_;
    num::QuadSpec spec_;
    std::map<std::pair<int, int>, double> cache_;
};

/// Factorizations m = J(Q-1) with J <= j_max and Q >= max(2, q_min);
/// m = 0 maps to the single pair (J = j_max, Q = 1) when q_min allows it.
std::vector<std::pair<int, int>> factorizations(int m, int j_max, int q_min) {
    std::vector<std::pair<int, int>> out;
    if (m == 0) {
        if (q_min <= 1) out.emplace_back(j_max, 1);
        return out;
    }
    for (int d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        const int j = m / d;
        const int q = d + 1;
        if (j <= j_max && q >= q_min) out.emplace_back(j, q);
    }
    return out;
}

struct CommChoice {
    bool valid = false;
    int k = 0;
    int l = 0;
    double ase = 0.0;
};

/// Best (K, L) for the comm ASE given the nulling load m, using the
/// continuous optimum v*(L) re-integerized through both rounding candidates.
CommChoice best_comm_kl(const model::NetworkConfig& cfg, int m, int l_min,
                        std::map<int, double>& vstar_cache, const num::QuadSpec& spec) {
    CommChoice best;
    const int budget = cfg.m_t - m;
    if (budget < l_min) return best;
    for (int l = l_min; l <= budget; ++l) {
        auto it = vstar_cache.find(l);
        if (it == vstar_cache.end())
            it = vstar_cache.emplace(l, optimal_user_load(l, cfg.alpha, spec)).first;
        const double kc = it->second * (budget + 1);
        const int k_hi = std::min(static_cast<int>(std::ceil(kc)), budget / l);
        const int k_lo = std::max(static_cast<int>(std::floor(kc)), 1);
        for (int k : {k_lo, k_hi}) {
            if (k < 1 || k * l > budget) continue;
            const double ase = comm::rc_approx(cfg, k, l, 1, m + 1, spec).ase;
            if (!best.valid || ase > best.ase) best = {true, k, l, ase};
        }
    }
    return best;
}

std::vector<RegionPoint> pareto_filter(std::vector<RegionPoint> pts) {
    std::stable_sort(pts.begin(), pts.end(), [](const RegionPoint& a, const RegionPoint& b) {
        if (a.comm_ase != b.comm_ase) return a.comm_ase > b.comm_ase;
        return a.sense_ase > b.sense_ase;
    });
    std::vector<RegionPoint> keep;
    double best_sense = -1.0;
    for (const auto& p : pts) {
        if (p.sense_ase > best_sense) {
            keep.push_back(p);
            best_sense = p.sense_ase;
        }
    }
    std::reverse(keep.begin(), keep.end()); // ascending comm ASE
    return keep;
}

} // namespace

double optimal_user_load(int l, double alpha, const num::QuadSpec& spec) {
    if (l < 1) throw DomainError("optimal_user_load: l must be >= 1");
    if (!(alpha > 2.0)) throw DomainError("optimal_user_load: alpha must be > 2");
    double lo = 1e-3;
    double hi = (1.0 - 1e-3) / l;
    const double flo = load_derivative(lo, l, alpha, spec);
    const double fhi = load_derivative(hi, l, alpha, spec);
    if (!(flo > 0.0) || !(fhi < 0.0))
        throw ConvergenceError("optimal_user_load: no sign change on bracket (" +
                                   std::to_string(flo) + ", " + std::to_string(fhi) + ")",
                               flo, fhi);
    // The integral vanishes at the root, so a pure relative tolerance is
    // unattainable there; anchor an absolute floor to the bracket scale.
    num::QuadSpec dspec = spec;
    dspec.abs_tol = std::max(spec.abs_tol,
                             spec.rel_tol * std::max(std::abs(flo), std::abs(fhi)));
    for (int i = 0; i < 100 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        (load_derivative(mid, l, alpha, dspec) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

RegionPoint comm_corner(const model::NetworkConfig& cfg, const num::QuadSpec& spec) {
    cfg.validate();
    std::map<int, double> vcache;
    const auto comm_spec = num::QuadSpec::single_integral();
    CommChoice best = best_comm_kl(cfg, 0, 1, vcache, comm_spec);
    if (!best.valid) throw DomainError("comm_corner: no feasible allocation");
    RegionPoint pt;
    pt.alloc = {best.k, best.l, cfg.j_max, 1};
    pt.comm_ase = best.ase;
    pt.sense_ase = sense::rs_q1(cfg, best.k, spec, cfg.j_max).ase;
    pt.provenance = Provenance::CornerComm;
    return pt;
}

RegionPoint sense_corner(const model::NetworkConfig& cfg, const num::QuadSpec& spec) {
    cfg.validate();
    SenseRateCache rates(cfg, spec);
    RegionPoint best;
    bool found = false;
    const int q_max = cfg.m_t; // K = L = 1 leaves m_t - 1 DoF, so Q - 1 <= m_t - 1
    for (int q = 1; q <= q_max; ++q) {
        const int j = q == 1 ? cfg.j_max
                             : std::min(cfg.j_max, (cfg.m_t - 1) / (q - 1));
        if (j < 1) break;
        const double ase = cfg.lambda_b * j * rates.rate(1, q);
        if (!found || ase > best.sense_ase) {
            best.sense_ase = ase;
            best.alloc = {1, 1, j, q};
            found = true;
        }
    }
    best.comm_ase =
        comm::rc_approx(cfg, 1, 1, best.alloc.j, best.alloc.q, num::QuadSpec::single_integral())
            .ase;
    best.provenance = Provenance::CornerSense;
    return best;
}

RegionBoundary boundary_sweep(const model::NetworkConfig& cfg, const num::QuadSpec& spec,
                              const SweepConstraints& constraints) {
    cfg.validate();
    if (constraints.l_min < 1 || constraints.q_min < 1)
        throw DomainError("boundary_sweep: constraints must be >= 1");
    RegionBoundary out;
    SenseRateCache rates(cfg, spec);
    std::map<int, double> vcache;
    const auto comm_spec = num::QuadSpec::single_integral();

    for (int m = 0; m < cfg.m_t; ++m) {
        const auto facts = factorizations(m, cfg.j_max, constraints.q_min);
        if (facts.empty()) continue;
        const CommChoice comm_best = best_comm_kl(cfg, m, constraints.l_min, vcache, comm_spec);
        if (!comm_best.valid) continue;

        BoundaryEntry entry;
        entry.m = m;

        // Comm-optimal allocation; the (J, Q) split only affects the paired
        // sensing ASE, so pick the factorization that maximizes it.
        entry.comm_best.provenance = Provenance::Boundary;
        entry.comm_best.comm_ase = comm_best.ase;
        double best_pair = -1.0;
        for (const auto& [j, q] : facts) {
            const double s = cfg.lambda_b * j * rates.rate(comm_best.k, q);
            if (s > best_pair) {
                best_pair = s;
                entry.comm_best.alloc = {comm_best.k, comm_best.l, j, q};
            }
        }
        entry.comm_best.sense_ase = best_pair;

        // Sense-optimal allocation at this m: the minimal comm load K = 1,
        // L = l_min maximizes the sensing feasible set; search the
        // factorizations. comm_best.valid already guarantees l_min <= budget.
        entry.sense_best.provenance = Provenance::Boundary;
        double best_sense = -1.0;
        for (const auto& [j, q] : facts) {
            const double s = cfg.lambda_b * j * rates.rate(1, q);
            if (s > best_sense) {
                best_sense = s;
                entry.sense_best.alloc = {1, constraints.l_min, j, q};
            }
        }
        entry.sense_best.sense_ase = best_sense;
        entry.sense_best.comm_ase =
            comm::rc_approx(cfg, 1, constraints.l_min, entry.sense_best.alloc.j,
                            entry.sense_best.alloc.q, comm_spec)
                .ase;
        out.diagnostics.push_back(entry);
    }

    std::vector<RegionPoint> pool;
    for (const auto& e : out.diagnostics) {
        pool.push_back(e.comm_best);
        pool.push_back(e.sense_best);
    }
    if (constraints.l_min == 1 && constraints.q_min == 1) {
        pool.push_back(comm_corner(cfg, spec));
        pool.push_back(sense_corner(cfg, spec));
    }
    out.frontier = pareto_filter(std::move(pool));
    return out;
}

RegionBoundary time_share_bound(const RegionPoint& corner_c, const RegionPoint& corner_s,
                                int steps) {
    if (steps < 1) throw DomainError("time_share_bound: steps must be >= 1");
    RegionBoundary out;
    out.frontier.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        RegionPoint p;
        p.comm_ase = (1.0 - t) * corner_c.comm_ase + t * corner_s.comm_ase;
        p.sense_ase = (1.0 - t) * corner_c.sense_ase + t * corner_s.sense_ase;
        p.alloc = corner_c.alloc;
        p.provenance = Provenance::TimeShare;
        out.frontier.push_back(p);
    }
    return out;
}

SumAseResult solve_p1(const RegionBoundary& boundary, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("solve_p1: rho must be in [0,1]");
    if (boundary.frontier.empty()) throw DomainError("solve_p1: empty boundary");
    SumAseResult res;
    res.rho = rho;
    bool first = true;
    for (const auto& p : boundary.frontier) {
        const double t = rho * p.comm_ase + (1.0 - rho) * p.sense_ase;
        if (first || t > res.t_ase) {
            res.t_ase = t;
            res.best_point = p;
            first = false;
        }
    }
    return res;
}

SumAseResult solve_p1(const model::NetworkConfig& cfg, double rho, const num::QuadSpec& spec) {
    return solve_p1(boundary_sweep(cfg, spec), rho);
}

} // namespace isac::opt
