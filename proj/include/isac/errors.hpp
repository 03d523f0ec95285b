#pragma once

#include <stdexcept>
#include <string>

namespace isac {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Adaptive quadrature ran out of subdivision budget. Carries the best
/// estimate reached and its error bound so callers can decide whether the
/// partial result is still usable.
struct ConvergenceError : Error {
    double best_estimate;
    double error_bound;
    ConvergenceError(const std::string& what, double best, double err)
        : Error(what), best_estimate(best), error_bound(err) {}
};

/// Requested allocation violates the spatial DoF or target-count constraint.
struct InfeasibleAllocation : Error {
    using Error::Error;
};

/// The L = 1 distance-ratio law is a point mass at 1, not a density.
struct DegenerateLaw : Error {
    using Error::Error;
};

/// Stacked channel matrix is numerically singular; caller should resample.
struct RankDeficiency : Error {
    using Error::Error;
};

/// A network realization came up empty (zero BSs after retries).
struct DegenerateRealization : Error {
    using Error::Error;
};

} // namespace isac
