#ifndef ANNEAL_RNG_HPP
#define ANNEAL_RNG_HPP

#include <cstdint>
#include <random>

namespace anneal {

/// One round of the SplitMix64 mixing function (Steele/Lea/Flood).  Used to
/// spread (seed, stream) pairs into independent generator states.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4a2ca9f13d525ULL;
    return z ^ (z >> 31);
}

/// Seeded random stream.  A (seed, stream) pair names a reproducible
/// substream: the pair is hashed through SplitMix64 into the state of a
/// Mersenne Twister, so parallel workers can each own a distinct stream of
/// one experiment seed without coordination.  The algorithm is fixed; results
/// for a given (seed, stream) never depend on worker count or call site.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL);
        std::uint64_t init[4];
        for (auto& w : init) w = splitmix64(s);
        std::seed_seq seq{static_cast<std::uint32_t>(init[0]), static_cast<std::uint32_t>(init[0] >> 32),
                          static_cast<std::uint32_t>(init[1]), static_cast<std::uint32_t>(init[1] >> 32),
                          static_cast<std::uint32_t>(init[2]), static_cast<std::uint32_t>(init[2] >> 32),
                          static_cast<std::uint32_t>(init[3]), static_cast<std::uint32_t>(init[3] >> 32)};
        engine_.seed(seq);
    }

    /// Uniform real in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Uniform real in [a, b).
    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(engine_);
    }

    /// Uniform integer in [0, n-1].
    std::uint64_t integer(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    /// Standard normal deviate.
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace anneal

#endif
