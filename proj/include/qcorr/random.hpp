#pragma once

#include <cstdint>
#include <vector>

#include "qcorr/core.hpp"

namespace qcorr {

// SplitMix64: tiny, statistically solid, and trivially splittable -- each
// consumer derives an independent stream from (seed, stream index), so
// sampling stays deterministic under any parallel partition of the work.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [-1, 1)
    double next_symmetric() { return 2.0 * next_double() - 1.0; }
};

inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0xA0761D6478BD642Full * (index + 1)));
    return SplitMix64(mixer.next());
}

// One Bell-diagonal sample, uniform over the physical tetrahedron, by
// rejection from the cube [-1,1]^3 (acceptance ratio 1/3).
inline CorrelationVector sample_physical_one(SplitMix64& rng, std::uint64_t* attempts = nullptr) {
    for (;;) {
        CorrelationVector c{rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};
        if (attempts) ++*attempts;
        if (is_physical(c)) return c;
    }
}

struct SampleStats {
    std::vector<CorrelationVector> samples;
    std::uint64_t attempts = 0;

    double acceptance_ratio() const {
        return attempts == 0 ? 0.0 : static_cast<double>(samples.size()) / static_cast<double>(attempts);
    }
};

inline SampleStats sample_physical_stats(std::uint64_t seed, std::size_t count) {
    SampleStats out;
    out.samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SplitMix64 rng = stream_for(seed, i);
        out.samples.push_back(sample_physical_one(rng, &out.attempts));
    }
    return out;
}

inline std::vector<CorrelationVector> sample_physical(std::uint64_t seed, std::size_t count) {
    return sample_physical_stats(seed, count).samples;
}

}  // namespace qcorr
