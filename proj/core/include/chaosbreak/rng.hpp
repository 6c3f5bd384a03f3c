#pragma once

#include <cstdint>
#include <vector>

#include "chaosbreak/image.hpp"
#include "chaosbreak/keystream.hpp"
#include "chaosbreak/permutation.hpp"

namespace chaosbreak {

/// Deterministic fixture generator: xoshiro256** seeded through splitmix64.
/// Fixed constants, no platform dependence; `split` derives independent streams so
/// fixtures stay stable when one consumer draws more values.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    /// Independent child stream; distinct `stream` ids give distinct sequences.
    Rng split(std::uint64_t stream) const {
        Rng child(0);
        std::uint64_t x = state_[0] ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& s : child.state_) s = splitmix64(x);
        return child;
    }

    std::uint64_t next_u64() {
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

    std::uint8_t next_byte() { return static_cast<std::uint8_t>(next_u64() >> 56); }

    /// Uniform in [0, n) by rejection; n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4] = {};
};

Permutation random_permutation(Rng& rng, std::size_t n);
KeyStream random_keystream(Rng& rng, std::size_t n);
ByteImage random_image(Rng& rng, std::size_t width, std::size_t height);

} // namespace chaosbreak
