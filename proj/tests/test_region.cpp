#include <doctest.h>

#include <cmath>
#include <vector>

#include "isac/region.hpp"

using namespace isac;

namespace {

model::NetworkConfig defaults() { return {}; }

// Small configuration keeping the sweep cheap.
model::NetworkConfig small_cfg() {
    auto cfg = defaults();
    cfg.m_t = 8;
    cfg.j_max = 4;
    return cfg;
}

// Eq.-20-style objective: G(v) = v * int (1 - exp(-z G_L (1/v - L))) / (z F) dz.
double load_objective(double v, int l, double alpha) {
    const double gl = comm::misr_gain(l, alpha);
    const double w = 1.0 / v - l;
    auto f = [&](double z) {
        return -std::expm1(-z * gl * w) / (z * comm::f_kernel(z, alpha));
    };
    return v * num::integrate_semi_infinite(f, num::QuadSpec::single_integral());
}

bool weakly_dominated_by(const opt::RegionPoint& p, const std::vector<opt::RegionPoint>& set) {
    for (const auto& q : set) {
        if (q.comm_ase >= p.comm_ase - 1e-9 && q.sense_ase >= p.sense_ase - 1e-9) return true;
    }
    return false;
}

} // namespace

TEST_CASE("optimal_user_load") {
    SUBCASE("L = 1, alpha = 4 lands near the 60% ratio") {
        const double v = opt::optimal_user_load(1, 4.0);
        CHECK(v > 0.5);
        CHECK(v < 0.7);
    }
    SUBCASE("matches a fine grid argmax of the load objective at L = 2") {
        const double v = opt::optimal_user_load(2, 4.0);
        double best_v = 0.0, best = -1.0;
        for (double g = 1e-3; g < 0.5; g += 1e-3) {
            const double val = load_objective(g, 2, 4.0);
            if (val > best) {
                best = val;
                best_v = g;
            }
        }
        CHECK(std::abs(v - best_v) <= 1e-3);
    }
    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(opt::optimal_user_load(0, 4.0), DomainError);
        CHECK_THROWS_AS(opt::optimal_user_load(1, 2.0), DomainError);
    }
}

TEST_CASE("load objective is unimodal on a fine grid") {
    for (int l : {1, 2, 3}) {
        int sign_changes = 0;
        double prev = load_objective(1e-3, l, 4.0);
        bool rising = true;
        for (double v = 2e-3; v < 1.0 / l - 1e-3; v += 1e-3) {
            const double cur = load_objective(v, l, 4.0);
            const bool now_rising = cur >= prev;
            if (rising && !now_rising) ++sign_changes;
            if (!rising && now_rising) sign_changes += 100; // re-rise breaks unimodality
            rising = now_rising;
            prev = cur;
        }
        CHECK(sign_changes == 1);
    }
}

TEST_CASE("comm_corner at the reference defaults") {
    const auto cfg = defaults();
    const auto pt = opt::comm_corner(cfg);
    CHECK(pt.alloc.l == 1);
    CHECK(pt.alloc.q == 1);
    CHECK(pt.alloc.j == cfg.j_max);
    // v* ~ 0.592 -> K in {12, 13}
    CHECK(pt.alloc.k >= 12);
    CHECK(pt.alloc.k <= 13);
    CHECK(pt.comm_ase > 0.0);
    CHECK(pt.sense_ase > 0.0);
    CHECK(pt.provenance == opt::Provenance::CornerComm);
}

TEST_CASE("comm_corner stays feasible when j_max exceeds m_t") {
    auto cfg = defaults();
    cfg.j_max = 25; // Q = 1 means no sensing nulling, so any J is feasible
    const auto pt = opt::comm_corner(cfg);
    CHECK(pt.alloc.j == 25);
    CHECK(model::validate_allocation(cfg, pt.alloc).feasible);
}

TEST_CASE("sense_corner picks interference nulling when receive gain is high") {
    auto cfg = defaults();
    cfg.m_r = 40;
    const auto pt = opt::sense_corner(cfg);
    CHECK(pt.alloc.k == 1);
    CHECK(pt.alloc.l == 1);
    CHECK(pt.alloc.q >= 2);
    CHECK(model::validate_allocation(cfg, pt.alloc).feasible);
}

TEST_CASE("sense_corner equals the exhaustive search") {
    auto cfg = small_cfg();
    cfg.m_r = 4;
    const auto pt = opt::sense_corner(cfg, num::QuadSpec::nested());
    // brute force over every feasible (J, Q) with K = L = 1
    double best = -1.0;
    int bj = 0, bq = 0;
    for (int q = 1; q <= cfg.m_t; ++q) {
        for (int j = 1; j <= cfg.j_max; ++j) {
            if (1 + j * (q - 1) > cfg.m_t) continue;
            const double rate = q == 1
                                    ? sense::rs_q1(cfg, 1, num::QuadSpec::nested()).rate_nats
                                    : sense::rs_cluster(cfg, 1, 1, q, num::QuadSpec::nested())
                                          .rate_nats;
            const double ase = cfg.lambda_b * j * rate;
            if (ase > best) {
                best = ase;
                bj = j;
                bq = q;
            }
        }
    }
    CHECK(pt.sense_ase == doctest::Approx(best).epsilon(1e-9));
    CHECK(pt.alloc.j == bj);
    CHECK(pt.alloc.q == bq);
}

TEST_CASE("boundary_sweep frontier structure") {
    const auto cfg = small_cfg();
    const auto spec = num::QuadSpec::nested();
    const auto boundary = opt::boundary_sweep(cfg, spec);
    REQUIRE(!boundary.frontier.empty());
    REQUIRE(!boundary.diagnostics.empty());

    SUBCASE("sorted by comm ASE with nonincreasing sense ASE") {
        for (std::size_t i = 1; i < boundary.frontier.size(); ++i) {
            CHECK(boundary.frontier[i].comm_ase >= boundary.frontier[i - 1].comm_ase);
            CHECK(boundary.frontier[i].sense_ase <= boundary.frontier[i - 1].sense_ase + 1e-12);
        }
    }
    SUBCASE("nondominated") {
        for (std::size_t i = 0; i < boundary.frontier.size(); ++i) {
            for (std::size_t j = 0; j < boundary.frontier.size(); ++j) {
                if (i == j) continue;
                const auto& a = boundary.frontier[i];
                const auto& b = boundary.frontier[j];
                const bool dominates = a.comm_ase >= b.comm_ase && a.sense_ase >= b.sense_ase &&
                                       (a.comm_ase > b.comm_ase || a.sense_ase > b.sense_ase);
                CHECK_FALSE(dominates);
            }
        }
    }
    SUBCASE("contains both corner points") {
        const auto cc = opt::comm_corner(cfg, spec);
        const auto sc = opt::sense_corner(cfg, spec);
        bool has_cc = false, has_sc = false;
        for (const auto& p : boundary.frontier) {
            if (std::abs(p.comm_ase - cc.comm_ase) < 1e-9 &&
                std::abs(p.sense_ase - cc.sense_ase) < 1e-9)
                has_cc = true;
            if (std::abs(p.comm_ase - sc.comm_ase) < 1e-9 &&
                std::abs(p.sense_ase - sc.sense_ase) < 1e-9)
                has_sc = true;
        }
        CHECK(has_cc);
        CHECK(has_sc);
    }
    SUBCASE("allocations feasible") {
        for (const auto& p : boundary.frontier)
            CHECK(model::validate_allocation(cfg, p.alloc).feasible);
    }
    SUBCASE("time-share segment is weakly dominated by the frontier") {
        const auto cc = opt::comm_corner(cfg, spec);
        const auto sc = opt::sense_corner(cfg, spec);
        const auto ts = opt::time_share_bound(cc, sc, 10);
        for (const auto& p : ts.frontier) CHECK(weakly_dominated_by(p, boundary.frontier));
    }
}

TEST_CASE("time_share_bound endpoints and midpoint") {
    opt::RegionPoint a;
    a.comm_ase = 10.0;
    a.sense_ase = 2.0;
    opt::RegionPoint b;
    b.comm_ase = 4.0;
    b.sense_ase = 8.0;
    const auto ts = opt::time_share_bound(a, b, 2);
    REQUIRE(ts.frontier.size() == 3);
    CHECK(ts.frontier.front().comm_ase == doctest::Approx(10.0));
    CHECK(ts.frontier.front().sense_ase == doctest::Approx(2.0));
    CHECK(ts.frontier[1].comm_ase == doctest::Approx(7.0));
    CHECK(ts.frontier[1].sense_ase == doctest::Approx(5.0));
    CHECK(ts.frontier.back().comm_ase == doctest::Approx(4.0));
    CHECK(ts.frontier.back().sense_ase == doctest::Approx(8.0));
    CHECK_THROWS_AS(opt::time_share_bound(a, b, 0), DomainError);
}

TEST_CASE("service-quality constraints shrink the region") {
    const auto cfg = small_cfg();
    const auto spec = num::QuadSpec::nested();
    const auto free_sweep = opt::boundary_sweep(cfg, spec, {1, 1});
    const auto l2q2 = opt::boundary_sweep(cfg, spec, {2, 2});
    const auto l2q4 = opt::boundary_sweep(cfg, spec, {2, 4});
    for (const auto& p : l2q2.frontier) CHECK(weakly_dominated_by(p, free_sweep.frontier));
    for (const auto& p : l2q4.frontier) CHECK(weakly_dominated_by(p, l2q2.frontier));
}

TEST_CASE("solve_p1 weight degeneracies and consistency") {
    const auto cfg = small_cfg();
    const auto spec = num::QuadSpec::nested();
    const auto boundary = opt::boundary_sweep(cfg, spec);
    const auto cc = opt::comm_corner(cfg, spec);
    const auto sc = opt::sense_corner(cfg, spec);

    const auto at1 = opt::solve_p1(boundary, 1.0);
    CHECK(at1.t_ase == doctest::Approx(cc.comm_ase).epsilon(1e-9));
    const auto at0 = opt::solve_p1(boundary, 0.0);
    CHECK(at0.t_ase == doctest::Approx(sc.sense_ase).epsilon(1e-9));

    const auto mid = opt::solve_p1(boundary, 0.5);
    CHECK(mid.t_ase == doctest::Approx(0.5 * mid.best_point.comm_ase +
                                       0.5 * mid.best_point.sense_ase));
    CHECK(mid.t_ase <= std::max(cc.comm_ase, sc.sense_ase) + 1e-12);

    // linear scalarization on a fixed finite set: nondecreasing in rho when
    // the comm corner's comm ASE dominates the sense corner's sense ASE
    if (cc.comm_ase >= sc.sense_ase) {
        double prev = -1.0;
        for (double rho = 0.0; rho <= 1.0 + 1e-12; rho += 0.1) {
            const double t = opt::solve_p1(boundary, rho).t_ase;
            CHECK(t >= prev - 1e-9);
            prev = t;
        }
    }
    CHECK_THROWS_AS(opt::solve_p1(boundary, 1.5), DomainError);
}
