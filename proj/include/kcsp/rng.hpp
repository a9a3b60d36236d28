#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace kcsp {

// splitmix64 finalizer; used for seed mixing and substream derivation.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seedable PRNG with documented substream derivation.
//
// The engine is std::mt19937_64 (fully specified by the standard, so streams
// are reproducible across platforms).  Uniform doubles are built from the top
// 53 bits; bounded integers use rejection sampling; normals use the Marsaglia
// polar method.  A substream is a fresh generator whose seed is derived from
// the root seed and two labels:
//
//     child_seed = mix64(mix64(mix64(seed) ^ label_a) ^ label_b)
//
// Substreams derived from the same (seed, labels) are identical regardless of
// how much the parent has been consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : seed_(seed), engine_(mix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng substream(std::uint64_t label_a, std::uint64_t label_b = 0) const {
        return Rng(mix64(mix64(mix64(seed_) ^ label_a) ^ label_b));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n); unbiased via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    bool coin() { return uniform() < 0.5; }

    // Standard normal via Marsaglia polar; caches the spare deviate.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace kcsp
