#include "due/random.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace due {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
        s += 0x9E3779B97F4A7C15ULL;
        word = mix64(s);
    }
}

RandomSource RandomSource::derive(std::initializer_list<std::uint64_t> keys) const {
    std::uint64_t h = mix64(seed_ ^ 0x6A09E667F3BCC908ULL);
    for (auto k : keys) h = mix64(h ^ mix64(k + 0x3C6EF372FE94F82BULL));
    return RandomSource(h);
}

std::uint64_t RandomSource::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomSource::uniform() {
    // 53 random bits centred in their cell: never exactly 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t RandomSource::uniform_index(std::size_t n) {
    // Lemire's nearly-divisionless rejection method.
    const auto range = static_cast<std::uint64_t>(n);
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next_u64()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

bool RandomSource::bernoulli(double p) { return uniform() < p; }

double RandomSource::normal(double mean, double stddev) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

}  // namespace due
