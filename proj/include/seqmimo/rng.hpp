#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "seqmimo/common.hpp"

namespace seqmimo {

// All randomness flows through this wrapper so that results are reproducible
// across platforms: mt19937_64 output is pinned by the standard, and the
// uniform/gaussian conversions below avoid the library-defined distributions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; draws come in deterministic pairs.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly symmetric complex normal with unit total variance.
    Cplx cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return Cplx(re * M_SQRT1_2, im * M_SQRT1_2);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Splittable seed derivation: children of a seed are independent streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a) {
    return splitmix64(splitmix64(base) ^ a);
}
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return splitmix64(mix_seed(base, a) ^ b);
}

}  // namespace seqmimo
