// Counter-based deterministic RNG for the simulation generators.
//
// The generator is SplitMix64: the state advances by a fixed odd constant
// (a counter in disguise) and each output is an avalanche mix of the state.
// Streams are split by seeding; replication r of a study uses the stream
// seed `base_seed ^ r`. The algorithm is fixed for the lifetime of a major
// version; golden tests depend on the exact draw sequence.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rankscreen {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via the Marsaglia polar method; the spare deviate of
    // each accepted pair is cached, so draws come in a fixed per-stream order.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double cauchy() { return std::tan(std::numbers::pi * (uniform01() - 0.5)); }

    // Student t with 3 degrees of freedom: N(0,1) / sqrt(chi2_3 / 3).
    double student_t3() {
        const double z = normal();
        const double a = normal(), b = normal(), c = normal();
        return z / std::sqrt((a * a + b * b + c * c) / 3.0);
    }

    // Double exponential (Laplace) with location 0 and scale 1 via inverse CDF.
    double laplace() {
        const double u = uniform01() - 0.5;
        return (u < 0.0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream for replication `rep` of a study rooted at `base_seed`.
inline SplitMix64 replication_stream(std::uint64_t base_seed, std::uint64_t rep) {
    return SplitMix64(base_seed ^ rep);
}

}  // namespace rankscreen
