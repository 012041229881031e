#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace amh {

// Seeded generator with a platform-independent double conversion, so that
// sampled families reproduce bit-for-bit across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer in [lo, hi].
    int integer(int lo, int hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(engine_() % span);
    }

    // Standard normal via Box-Muller.
    double normal()
    {
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    bool coin() { return (engine_() >> 63) != 0; }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace amh
