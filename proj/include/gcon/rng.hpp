#pragma once

#include <cstdint>
#include <cmath>

namespace gcon {

// Counter-based generator state expansion (splitmix64). Used both as the
// core generator and to derive independent child streams, so a run is
// reproducible regardless of how many streams are consumed in between.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent child stream. Streams with different tags are
    // decorrelated by the splitmix64 mixing of (seed, tag).
    Rng child(std::uint64_t tag) const {
        std::uint64_t s = state_ ^ (0x5851f42d4c957f2dULL * (tag + 1));
        std::uint64_t mixed = s;
        splitmix64(mixed);
        return Rng(mixed);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1); redraw on exact zero.
    double uniform_open() {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return u;
    }

    // Symmetric uniform in [-a, a].
    double uniform_symmetric(double a) { return a * (2.0 * uniform() - 1.0); }

    // Standard normal via the Marsaglia polar method. Hand-rolled so output
    // is identical across standard library implementations.
    double normal() {
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

    // Exponential with rate beta via inversion.
    double exponential(double beta) { return -std::log(uniform_open()) / beta; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection to avoid modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do { r = next_u64(); } while (r >= limit);
        return r % n;
    }

    std::uint64_t seed_state() const { return state_; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace gcon
