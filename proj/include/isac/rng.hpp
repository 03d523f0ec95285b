#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace isac::rng {

/// Philox4x32-10 counter-based generator. Streams derived from
/// (seed, stream) are statistically independent, so parallel workers can
/// draw from per-realization substreams without coordination and results
/// do not depend on the worker count.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 to spread low-entropy seeds over the key space
        std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        x ^= x >> 31;
        key_[0] = static_cast<std::uint32_t>(x);
        key_[1] = static_cast<std::uint32_t>(x >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            generate_block();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe operand for log.
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform_pos()); }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double t = 2.0 * M_PI * uniform();
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

    /// Circularly symmetric complex normal CN(0, 1).
    std::complex<double> cnormal() {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        const double re = normal();
        const double im = normal();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    /// Gamma(k, 1) for integer shape as a sum of exponentials.
    double gamma_int(int k) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += exponential();
        return s;
    }

    /// Exact Poisson sampling (Knuth's product method, chunked so the
    /// acceptance threshold never underflows).
    long poisson(double mean) {
        long total = 0;
        while (mean > 0.0) {
            const double chunk = mean > 60.0 ? 60.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            double p = 1.0;
            long k = 0;
            do {
                ++k;
                p *= uniform_pos();
            } while (p > limit);
            total += k - 1;
        }
        return total;
    }

  private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void generate_block() {
        std::uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, c0, hi0, lo0);
            mulhilo(0xCD9E8D57u, c2, hi1, lo1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0;
        out_[1] = c1;
        out_[2] = c2;
        out_[3] = c3;
        // advance the 64-bit block counter
        if (++ctr_[0] == 0) ++ctr_[1];
    }

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int idx_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace isac::rng
