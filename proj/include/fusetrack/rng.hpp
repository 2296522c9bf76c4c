#pragma once

#include <cmath>
#include <cstdint>

namespace fusetrack {

// Counter-based 64-bit generator (splitmix64). Chosen over std::mt19937 +
// std::*_distribution because the distribution implementations are not
// portable across standard libraries; fixtures generated here must be
// bitwise reproducible everywhere.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Derives an independent per-frame stream from (seed, frame_id).
    static SplitMix64 for_frame(std::uint64_t seed, std::int64_t frame_id) {
        SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL *
                             (static_cast<std::uint64_t>(frame_id) + 1)));
        g.next();  // decorrelate nearby seeds
        return g;
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller, cosine branch only so one call consumes exactly two draws.
    double normal(double sigma) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return sigma * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Knuth's method; fine for the small rates used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        double limit = std::exp(-lambda);
        double prod = uniform01();
        int n = 0;
        while (prod > limit) {
            prod *= uniform01();
            ++n;
        }
        return n;
    }

  private:
    std::uint64_t state_;
};

}  // namespace fusetrack
