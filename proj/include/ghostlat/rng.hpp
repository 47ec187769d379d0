#pragma once
// Splittable, reproducible RNG streams.  All draws go through explicit
// conversions so sequences are bit-identical across platforms.

#include <cstdint>
#include <random>

namespace ghostlat {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
        : seed_(master_seed), index_(stream_index) {
        std::uint64_t s = master_seed ^ (stream_index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
        std::seed_seq seq{(std::uint32_t)(s >> 32), (std::uint32_t)s,
                          (std::uint32_t)(splitmix64(s) >> 32), (std::uint32_t)s};
        eng_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t index() const { return index_; }

    RngStream substream(std::uint64_t i) const {
        std::uint64_t mix = seed_ ^ (0x9e3779b97f4a7c15ull * (index_ + 1));
        return RngStream(mix, i + 1);
    }

    std::uint64_t bits() { return eng_(); }

    // uniform in [0,1) with 53 random bits
    double u01() { return (double)(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return u01() < p; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t seed_, index_;
    std::mt19937_64 eng_;
};

}  // namespace ghostlat
