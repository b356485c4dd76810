#pragma once

#include <cstdint>
#include <random>

namespace dcopt {

// Deterministic random source: mt19937_64 with fixed output transforms, so
// the same seed yields the same stream on every platform and standard
// library. normal() uses Box-Muller and consumes exactly two engine draws
// per value.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // strictly inside (lo, hi)
    double uniform_open(double lo, double hi) {
        double u = unit();
        while (u == 0.0) u = unit();
        return lo + (hi - lo) * u;
    }

    double normal(double mean, double stddev);

    std::uint64_t next_u64() { return engine_(); }

private:
    // 53-bit uniform in [0, 1)
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

// Seeded distribution description; generators are pure functions of it.
struct RngSpec {
    enum class Dist { Normal, Uniform };

    std::uint64_t seed = 0;
    Dist dist = Dist::Normal;
    double a = 0.0; // mean | lo
    double b = 1.0; // stddev | hi

    static RngSpec normal(std::uint64_t seed, double mean, double stddev) {
        return {seed, Dist::Normal, mean, stddev};
    }
    static RngSpec uniform(std::uint64_t seed, double lo, double hi) {
        return {seed, Dist::Uniform, lo, hi};
    }

    double sample(Rng& rng) const;
};

} // namespace dcopt
