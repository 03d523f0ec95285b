#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isac/model.hpp"

namespace isac::io {

/// Malformed config text; carries the 1-based source location.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& what, int line_, int column_)
        : Error(what + " (line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                ")"),
          line(line_),
          column(column_) {}
};

/// Well-formed config violating a model invariant.
struct ValidationError : Error {
    using Error::Error;
};

struct RunSettings {
    long n_realizations = 20000;
    std::uint64_t seed = 1;
    double r_window_km = 0.0; ///< 0 selects the default window
    double rel_tol = 0.0;     ///< 0 keeps the per-operation defaults
};

struct LoadedConfig {
    model::NetworkConfig network;
    model::Allocation alloc;
    RunSettings run;
    std::vector<std::string> defaulted_keys; ///< keys that kept their defaults
};

/// Parses flat key=value text with [network], [allocation] and [run]
/// sections. Unknown keys, duplicate keys and malformed lines raise
/// ParseError; violated invariants raise ValidationError. Unspecified keys
/// keep the reference defaults (m_t=20, m_r=10, p_t=1, alpha=4, beta=2,
/// xi_sq=0.1, kappa=1, delta_t=1, lambda_b=1, j_max=10).
LoadedConfig parse_config(const std::string& text);

/// parse_config over the contents of path.
LoadedConfig load_config(const std::string& path);

/// Canonical key=value rendering (fixed key order, full precision); two
/// configs hash equal iff they are value-identical.
std::string canonical_text(const LoadedConfig& cfg);

/// FNV-1a 64-bit digest of canonical_text, as lowercase hex.
std::string config_hash(const LoadedConfig& cfg);

} // namespace isac::io
