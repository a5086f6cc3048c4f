#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

namespace due {

/// Deterministic pseudo-random stream (xoshiro256**, seeded through
/// SplitMix64). All derived quantities are computed with integer arithmetic
/// or basic IEEE operations so the stream is reproducible across platforms.
///
/// Streams are splittable: `derive` hashes the root seed together with a key
/// path, so a per-(household, person, day) stream does not depend on how many
/// numbers other streams have consumed.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    /// Independent stream for the given key path; does not advance *this.
    RandomSource derive(std::initializer_list<std::uint64_t> keys) const;

    std::uint64_t next_u64();
    /// Uniform in the open interval (0, 1).
    double uniform();
    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);
    bool bernoulli(double p);
    /// Box-Muller normal deviate.
    double normal(double mean, double stddev);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

/// SplitMix64 finaliser, exposed for hashing keys.
std::uint64_t mix64(std::uint64_t x);

}  // namespace due
