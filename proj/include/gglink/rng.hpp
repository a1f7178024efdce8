#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gglink {

// All randomness in the library flows through this wrapper. The engine is
// std::mt19937_64 (its output sequence is fixed by the standard) and every
// distribution below is hand-rolled, so a (seed, call sequence) pair gives
// the same stream on any platform. Child streams are derived from the seed
// with splitmix64 rather than by consuming engine state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic child seed for a named stream, e.g. (seed, kStreamShuffle, epoch).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(base ^ splitmix64(stream)) ^ index);
}

class Rng {
public:
    static constexpr const char* kAlgorithmId = "mt19937_64+splitmix64";

    explicit Rng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound), unbiased via masked rejection. bound must be > 0.
    std::uint64_t uniform_int(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t mask = mask_for(bound - 1);
        std::uint64_t x;
        do {
            x = next_u64() & mask;
        } while (x >= bound);
        return x;
    }

    // Standard normal, Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    // Smallest all-ones mask covering max_value.
    static std::uint64_t mask_for(std::uint64_t max_value) {
        std::uint64_t mask = max_value;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        return mask;
    }

    std::mt19937_64 gen_;
    std::uint64_t seed_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream tags for derive_seed. Values are arbitrary but frozen; changing
// them would change every seeded result.
namespace rng_stream {
constexpr std::uint64_t kSplitShuffle = 1;
constexpr std::uint64_t kValNegatives = 2;
constexpr std::uint64_t kTestNegatives = 3;
constexpr std::uint64_t kEpochNegatives = 4;
constexpr std::uint64_t kEpochShuffle = 5;
constexpr std::uint64_t kParamInit = 6;
}  // namespace rng_stream

}  // namespace gglink
