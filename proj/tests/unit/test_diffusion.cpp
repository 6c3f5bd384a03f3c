#include <doctest.h>

#include <vector>

#include "chaosbreak/diffusion.hpp"
#include "chaosbreak/rng.hpp"

using namespace chaosbreak;

namespace {

DiffusionStage mod_sub_stage(std::vector<std::uint8_t> key, int taps = 1) {
    return DiffusionStage(DiffusionFamily::mod_sub(taps), KeyStream{std::move(key), {}});
}

DiffusionStage pdcc_stage(std::vector<std::uint8_t> key) {
    return DiffusionStage(DiffusionFamily::mod_add_xor(), KeyStream{std::move(key), {}});
}

} // namespace

TEST_CASE("mod_sub zero fixed point") {
    const auto stage = mod_sub_stage(std::vector<std::uint8_t>(5, 0));
    const std::vector<std::uint8_t> zeros(5, 0);
    CHECK(diffuse_forward(stage, zeros) == zeros);
    CHECK(diffuse_inverse(stage, zeros) == zeros);
}

TEST_CASE("mod_sub scalar hand evaluation") {
    const auto stage = mod_sub_stage({3, 4});
    CHECK(diffuse_forward(stage, std::vector<std::uint8_t>{10, 20}) ==
          std::vector<std::uint8_t>{7, 9});
    CHECK(diffuse_inverse(stage, std::vector<std::uint8_t>{7, 9}) ==
          std::vector<std::uint8_t>{10, 20});
}

TEST_CASE("mod_sub round-trips on random data") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto stage = mod_sub_stage(random_keystream(rng, 32).values);
        std::vector<std::uint8_t> plain(32);
        for (auto& v : plain) v = rng.next_byte();
        CHECK(diffuse_inverse(stage, diffuse_forward(stage, plain)) == plain);
    }
}

TEST_CASE("mod_sub decryption locality: one tap reaches positions j and j+1") {
    Rng rng(12);
    const std::size_t n = 9;
    for (int trial = 0; trial < 20; ++trial) {
        const auto stage = mod_sub_stage(random_keystream(rng, n).values);
        std::vector<std::uint8_t> cipher(n);
        for (auto& v : cipher) v = rng.next_byte();
        const auto base = diffuse_inverse(stage, cipher);
        for (std::size_t j = 0; j < n; ++j) {
            for (int delta = 1; delta < 256; ++delta) {
                auto perturbed = cipher;
                perturbed[j] = static_cast<std::uint8_t>(perturbed[j] + delta);
                const auto plain = diffuse_inverse(stage, perturbed);
                for (std::size_t k = 0; k < n; ++k) {
                    const bool within = k == j || k == j + 1;
                    if (!within) CHECK(plain[k] == base[k]);
                }
                CHECK(plain[j] != base[j]);
            }
        }
    }
}

TEST_CASE("mod_sub decryption is sensitive in every argument") {
    Rng rng(17);
    const std::size_t n = 9;
    const auto key = random_keystream(rng, n);
    const auto stage = mod_sub_stage(key.values);
    std::vector<std::uint8_t> cipher(n);
    for (auto& v : cipher) v = rng.next_byte();
    const auto base = diffuse_inverse(stage, cipher);
    for (std::size_t k = 1; k <= n; ++k) {
        auto bumped_key = key.values;
        bumped_key[k - 1] = static_cast<std::uint8_t>(bumped_key[k - 1] + 1);
        const auto plain = diffuse_inverse(mod_sub_stage(bumped_key), cipher);
        CHECK(plain[k - 1] != base[k - 1]);
    }
}

TEST_CASE("mod_sub locality generalizes to deeper memory") {
    Rng rng(13);
    for (int taps = 1; taps <= 3; ++taps) {
        const std::size_t n = 12;
        const auto stage = mod_sub_stage(random_keystream(rng, n).values, taps);
        std::vector<std::uint8_t> cipher(n);
        for (auto& v : cipher) v = rng.next_byte();
        const auto base = diffuse_inverse(stage, cipher);
        for (std::size_t j = 0; j < n; ++j) {
            auto perturbed = cipher;
            perturbed[j] = static_cast<std::uint8_t>(perturbed[j] + 1);
            const auto plain = diffuse_inverse(stage, perturbed);
            for (std::size_t k = 0; k < n; ++k) {
                if (k < j || k > j + static_cast<std::size_t>(taps))
                    CHECK(plain[k] == base[k]);
            }
        }
    }
}

TEST_CASE("plaintext-delayed stage: zero fixed point and round-trip") {
    const auto zero_stage = pdcc_stage(std::vector<std::uint8_t>(8, 0));
    const std::vector<std::uint8_t> zeros(8, 0);
    CHECK(diffuse_forward(zero_stage, zeros) == zeros);

    Rng rng(14);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto stage = pdcc_stage(random_keystream(rng, 64).values);
        std::vector<std::uint8_t> plain(64);
        for (auto& v : plain) v = rng.next_byte();
        CHECK(pdcc_diffuse(stage, pdcc_diffuse(stage, plain, DiffuseDirection::forward),
                           DiffuseDirection::inverse) == plain);
    }
}

namespace {

std::uint8_t rotl1(std::uint8_t v) { return static_cast<std::uint8_t>((v << 1) | (v >> 7)); }

// Monochrome-base perturbation deltas of the plaintext-delayed decryption: the
// change at the flipped position, and the constant carried to every later one.
std::uint8_t pdcc_first_delta(std::uint8_t v1, std::uint8_t v2, bool at_position_one) {
    if (at_position_one) return static_cast<std::uint8_t>(v2 - v1);
    return static_cast<std::uint8_t>(static_cast<std::uint8_t>(v2 ^ rotl1(v1)) -
                                     static_cast<std::uint8_t>(v1 ^ rotl1(v1)));
}

std::uint8_t pdcc_suffix_delta(std::uint8_t v1, std::uint8_t v2, bool at_position_one) {
    const std::uint8_t step = static_cast<std::uint8_t>(
        static_cast<std::uint8_t>(v1 ^ rotl1(v2)) - static_cast<std::uint8_t>(v1 ^ rotl1(v1)));
    return static_cast<std::uint8_t>(pdcc_first_delta(v1, v2, at_position_one) + step);
}

} // namespace

TEST_CASE("plaintext-delayed decryption: full-suffix propagation matches the predicate") {
    // Monochrome base V1, single position flipped to V2. The change at the flipped
    // position is always nonzero; every later position carries a constant delta, so
    // the response is either the full suffix or (in the enumerable wrap-out classes)
    // that single position.
    Rng rng(15);
    const std::size_t n = 16;
    for (int trial = 0; trial < 3; ++trial) {
        const auto stage = pdcc_stage(random_keystream(rng, n).values);
        for (int v1 : {0, 64, 129, 255}) {
            const std::vector<std::uint8_t> base(n, static_cast<std::uint8_t>(v1));
            const auto base_plain = diffuse_inverse(stage, base);
            for (int v2 = 0; v2 < 256; ++v2) {
                if (v2 == v1) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    const bool full = pdcc_suffix_delta(static_cast<std::uint8_t>(v1),
                                                        static_cast<std::uint8_t>(v2),
                                                        j == 0) != 0;
                    auto cipher = base;
                    cipher[j] = static_cast<std::uint8_t>(v2);
                    const auto plain = diffuse_inverse(stage, cipher);
                    for (std::size_t k = 0; k < n; ++k) {
                        const bool changed = plain[k] != base_plain[k];
                        const bool expect = k == j || (full && k > j);
                        if (changed != expect) {
                            CAPTURE(v1); CAPTURE(v2); CAPTURE(j); CAPTURE(k);
                            CHECK(changed == expect);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("default probe values always propagate to the full suffix") {
    // V1 = 0 has no wrap-out partner: V2 + rotl(V2,1) never hits 0 mod 256.
    for (int v2 = 1; v2 < 256; ++v2) {
        CHECK(pdcc_suffix_delta(0, static_cast<std::uint8_t>(v2), false) != 0);
        CHECK(pdcc_suffix_delta(0, static_cast<std::uint8_t>(v2), true) != 0);
    }
}

TEST_CASE("stage validation rejects mismatched shapes") {
    CHECK_THROWS_AS(diffuse_forward(mod_sub_stage({1, 2, 3}), std::vector<std::uint8_t>(4, 0)),
                    DimensionError);
    DiffusionStage bad(DiffusionFamily::mod_sub(2), KeyStream{{1, 2}, {}},
                      {0}, {}); // one initial value for two taps
    CHECK_THROWS_AS(diffuse_forward(bad, std::vector<std::uint8_t>(2, 0)), DimensionError);
    CHECK_THROWS_AS(pdcc_diffuse(mod_sub_stage({1}), std::vector<std::uint8_t>(1, 0),
                                 DiffuseDirection::forward),
                    DimensionError);
}
