#pragma once

// The 9-pixel five-stage conformance instance: permutations, association tables and
// expected recoveries, frozen from hand evaluation of the stage conventions.

#include <cstdint>
#include <vector>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/permutation.hpp"
#include "chaosbreak/pipeline.hpp"
#include "chaosbreak/rng.hpp"

namespace worked {

using chaosbreak::Permutation;

// Decryption-side maps of the conformance instance.
inline Permutation pre_inverse()  { return Permutation({4, 5, 2, 9, 8, 7, 6, 3, 1}); }
inline Permutation mid_inverse()  { return Permutation({9, 2, 4, 5, 1, 6, 3, 8, 7}); }
inline Permutation mid_forward()  { return Permutation({5, 2, 7, 3, 4, 6, 9, 8, 1}); }
inline Permutation post_inverse() { return Permutation({3, 6, 7, 8, 2, 1, 9, 4, 5}); }

// Ciphertext-position -> plaintext-position association sets of the instance.
inline std::vector<std::vector<std::uint32_t>> cipher_to_plain() {
    return {{4, 6, 7}, {1, 2, 6, 7}, {2, 3, 7, 8}, {3, 4, 5, 9}, {3, 9},
            {3, 5, 6, 8}, {1, 5, 6, 8}, {1, 2, 8}, {4, 5}};
}

// Transpose of the above.
inline std::vector<std::vector<std::uint32_t>> plain_to_cipher() {
    return {{2, 7, 8}, {2, 3, 8}, {3, 4, 5, 6}, {1, 4, 9}, {4, 6, 7, 9},
            {1, 2, 6, 7}, {1, 2, 3}, {3, 6, 7, 8}, {4, 5}};
}

// Ciphertext-position -> serial-position sets after the first layer is peeled.
inline std::vector<std::vector<std::uint32_t>> cipher_to_serial() {
    return {{6, 7, 9}, {4, 5, 6, 7}, {2, 3, 5, 6}, {1, 2, 8, 9}, {1, 2},
            {2, 3, 7, 8}, {3, 4, 7, 8}, {3, 4, 5}, {8, 9}};
}

/// Encryption-order five-stage pipeline using the instance permutations and the
/// given key streams.
inline chaosbreak::CipherPipeline pipeline(chaosbreak::Rng& rng) {
    using namespace chaosbreak;
    std::vector<Permutation> perms{pre_inverse().inverted(), mid_forward(),
                                   post_inverse().inverted()};
    std::vector<KeyStream> keys{random_keystream(rng, 9), random_keystream(rng, 9)};
    return build_pndcc(StagePattern("PDPDP"), std::move(perms), std::move(keys), 1);
}

} // namespace worked
