#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace eigensense {

// SplitMix64 finalizer, used as the documented stream-derivation mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-run stream seed: stream(seed, run_index) = sm64(sm64(seed) ^ sm64(~run_index)).
// Independent of worker count and evaluation order.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t run_index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(~run_index));
}

// Seedable random stream: mt19937_64 engine (output sequence is fixed by the
// C++ standard) with a Marsaglia polar Gaussian transform, so draws are
// bit-reproducible across platforms and standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    static RandomStream for_run(std::uint64_t seed, std::uint64_t run_index) {
        return RandomStream(derive_stream_seed(seed, run_index));
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Standard normal, Marsaglia polar method (exact, not CLT-approximate).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Circularly symmetric CN(0,1): each part N(0, 1/2).
    std::complex<double> cgaussian() {
        const double a = gaussian();
        const double b = gaussian();
        return {a * M_SQRT1_2, b * M_SQRT1_2};
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace eigensense
