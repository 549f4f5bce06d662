#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace locopath::rng {

// SplitMix64 step; used to derive substream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic seed for substream `index` of stream `master`.
// Used everywhere a parallel loop needs per-iteration randomness that must
// not depend on execution order.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

// Random stream with self-contained samplers. std::mt19937_64's raw output
// is fully specified by the standard, and the samplers below avoid the
// implementation-defined std::*_distribution classes, so sequences are
// byte-identical across compilers and platforms.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t bound = n == 0 ? 0 : (~std::uint64_t{0} - ~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= bound);
        return x % n;
    }

    // Standard normal via the Marsaglia polar method (exact, no cached pair).
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform() - 1.0;
            const double v = 2.0 * uniform() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

    // In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(i))]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace locopath::rng
