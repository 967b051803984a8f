#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace wsnids {

// Self-contained splitmix64 generator. Every random draw in the project goes
// through this class so that results are reproducible across platforms and do
// not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) without modulo bias. n must be > 0.
    std::size_t below(std::size_t n) {
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t threshold = (0ULL - un) % un;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<std::size_t>(r % un);
        }
    }

    // Standard normal via Box-Muller (used by test data generators).
    double normal() {
        double u1 = unit();
        while (u1 <= 0.0) u1 = unit();
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Derives an independent stream from a base seed and up to two tags, so that
// parallel units (per tree, per fold, per class) consume disjoint sequences
// no matter how work is scheduled across threads.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t tag0, std::uint64_t tag1 = 0) {
    std::uint64_t s = detail::mix64(seed + 0x9E3779B97F4A7C15ULL);
    s = detail::mix64(s ^ (tag0 + 0xD1B54A32D192ED03ULL));
    s = detail::mix64(s ^ (tag1 + 0x8CB92BA72F3D8DD7ULL));
    return Rng(s);
}

}  // namespace wsnids
