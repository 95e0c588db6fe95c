#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace graspkit {

// Deterministic RNG: mt19937_64 (fully specified by the standard) plus
// hand-rolled uniform/Gaussian transforms so streams are reproducible
// across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; caches the second deviate.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    // Uniform integer in [lo, hi] via rejection sampling.
    int uniform_int(int lo, int hi) {
        uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<int>(x % range);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(uniform_int(0, i))]);
    }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace graspkit
