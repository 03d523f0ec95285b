#pragma once

#include <vector>

#include "isac/comm.hpp"
#include "isac/model.hpp"
#include "isac/sense.hpp"

namespace isac::opt {

enum class Provenance { CornerComm, CornerSense, Boundary, TimeShare };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::CornerComm: return "corner-comm";
        case Provenance::CornerSense: return "corner-sense";
        case Provenance::Boundary: return "boundary";
        case Provenance::TimeShare: return "time-share";
    }
    return "?";
}

/// One achievable (comm ASE, sense ASE) pair and the allocation behind it.
/// Time-share points interpolate two allocations; alloc then holds the
/// comm-corner allocation by convention.
struct RegionPoint {
    double comm_ase = 0.0;
    double sense_ase = 0.0;
    model::Allocation alloc;
    Provenance provenance = Provenance::Boundary;
};

/// Per-m diagnostics of the sweep over m = J(Q-1).
struct BoundaryEntry {
    int m = 0;
    RegionPoint comm_best;  ///< comm-ASE-optimal allocation at this m
    RegionPoint sense_best; ///< sense-ASE-optimal allocation at this m
};

struct RegionBoundary {
    std::vector<RegionPoint> frontier; ///< nondominated, sorted by comm ASE ascending
    std::vector<BoundaryEntry> diagnostics;
};

struct SumAseResult {
    double rho = 0.0;
    RegionPoint best_point;
    double t_ase = 0.0;
};

/// Minimum service-quality constraints L >= l_min, Q >= q_min.
struct SweepConstraints {
    int l_min = 1;
    int q_min = 1;
};

/// Root of the load derivative: the optimal user fraction
/// v* = K / (M_t - J(Q-1) + 1) in (0, 1/L), found by bisection.
/// Throws ConvergenceError (carrying the bracket values) if the bracket
/// endpoints do not change sign.
double optimal_user_load(int l, double alpha,
                         const num::QuadSpec& spec = num::QuadSpec::single_integral());

/// Comm-optimal corner: J = J_max, Q = 1, L by small-grid search with
/// K = round(v* (M_t+1)) projected feasible; sensing ASE evaluated at the
/// returned allocation. Scoring uses the tractable approximation path.
RegionPoint comm_corner(const model::NetworkConfig& cfg,
                        const num::QuadSpec& spec = num::QuadSpec::nested());

/// Sense-optimal corner: K = L = 1, exhaustive feasible (J, Q) search.
RegionPoint sense_corner(const model::NetworkConfig& cfg,
                         const num::QuadSpec& spec = num::QuadSpec::nested());

/// Full sweep of m = J(Q-1) in {0, ..., M_t-1}: per m the comm-best and
/// sense-best single allocations, plus the nondominated frontier of all
/// emitted points (both corner points included by construction).
RegionBoundary boundary_sweep(const model::NetworkConfig& cfg,
                              const num::QuadSpec& spec = num::QuadSpec::nested(),
                              const SweepConstraints& constraints = {});

/// Convex-combination segment between the two corners, sampled at steps+1
/// points (endpoints equal the corners).
RegionBoundary time_share_bound(const RegionPoint& corner_c, const RegionPoint& corner_s,
                                int steps);

/// Weighted-sum problem: maximize rho*T_c + (1-rho)*T_s over the swept
/// boundary points (corners included).
SumAseResult solve_p1(const model::NetworkConfig& cfg, double rho,
                      const num::QuadSpec& spec = num::QuadSpec::nested());
SumAseResult solve_p1(const RegionBoundary& boundary, double rho);

} // namespace isac::opt
