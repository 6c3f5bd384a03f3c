#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chaosbreak/keystream.hpp"

namespace chaosbreak {

enum class DiffusionKind : std::uint8_t {
    /// C(k) = (P(k) - C(k-1) - ... - C(k-m) - K(k)) mod 256. No plaintext delay.
    mod_sub,
    /// Heterogeneous composite with one plaintext delay tap:
    /// C(k) = ((P(k) - P(k-1) + K(k)) mod 256) xor rotl(C(k-1), 1).
    mod_add_xor,
};

/// Diffusion family: the recurrence kind plus its memory depths. Plaintext-non-delayed
/// families have memory_depth_plain == 0; plaintext-delayed families have >= 1.
struct DiffusionFamily {
    DiffusionKind kind = DiffusionKind::mod_sub;
    int memory_depth_cipher = 1; // m: ciphertext feedback taps, >= 1
    int memory_depth_plain = 0;  // n: plaintext delay taps, 0 for PNDCC

    static DiffusionFamily mod_sub(int cipher_taps = 1);
    static DiffusionFamily mod_add_xor();

    bool plaintext_delayed() const { return memory_depth_plain > 0; }
    bool operator==(const DiffusionFamily&) const = default;
};

/// One diffusion stage: family, key stream, and initial conditions. initial_ciphertext
/// holds C(0), C(-1), ..., C(1-m); initial_plaintext holds P(0), ..., P(1-n). Both
/// default to all-zero at the declared depth.
struct DiffusionStage {
    DiffusionFamily family;
    KeyStream key;
    std::vector<std::uint8_t> initial_ciphertext;
    std::vector<std::uint8_t> initial_plaintext;

    DiffusionStage() = default;
    DiffusionStage(DiffusionFamily fam, KeyStream k);
    DiffusionStage(DiffusionFamily fam, KeyStream k,
                   std::vector<std::uint8_t> init_c, std::vector<std::uint8_t> init_p);

    void validate(std::size_t length) const;
    bool operator==(const DiffusionStage&) const = default;
};

/// Plaintext -> ciphertext over one stage; length must equal the key length.
std::vector<std::uint8_t> diffuse_forward(const DiffusionStage& stage,
                                          std::span<const std::uint8_t> plain);

/// Exact inverse of diffuse_forward.
std::vector<std::uint8_t> diffuse_inverse(const DiffusionStage& stage,
                                          std::span<const std::uint8_t> cipher);

enum class DiffuseDirection : std::uint8_t { forward, inverse };

/// Named entry point for the plaintext-delayed family; rejects stages without a
/// plaintext delay tap.
std::vector<std::uint8_t> pdcc_diffuse(const DiffusionStage& stage,
                                       std::span<const std::uint8_t> data,
                                       DiffuseDirection direction);

} // namespace chaosbreak
