#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace surveyq {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// One independent engine per (seed, stream) pair. Streams are derived by
/// mixing rather than by jumping, so replications can be evaluated in any
/// order (or in parallel) and still reproduce bit-identical results.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix64(s);
    std::uint64_t t = stream ^ 0xD1B54A32D192ED03ULL;
    const std::uint64_t b = splitmix64(t);
    std::uint64_t mixed = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return std::mt19937_64(splitmix64(mixed));
}

/// Uniform in [0,1) from the top 53 bits; avoids distribution objects so the
/// draw sequence is identical across standard library implementations.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Box-Muller standard normal sampler with one cached value.
class NormalSampler {
public:
    explicit NormalSampler(std::mt19937_64& eng) : eng_(eng) {}

    double operator()() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01(eng_);
        while (u1 <= 0.0) u1 = uniform01(eng_);
        const double u2 = uniform01(eng_);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64& eng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace surveyq
