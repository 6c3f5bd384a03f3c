#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chaosbreak/diffusion.hpp"
#include "chaosbreak/image.hpp"
#include "chaosbreak/permutation.hpp"

namespace chaosbreak {

/// Stage pattern in encryption order, leftmost applied to the plaintext first:
/// "PDP" (3-stage), "PDPDP" (5-stage), "DPDP" (4-stage). Stages must alternate.
class StagePattern {
public:
    StagePattern() = default;
    explicit StagePattern(std::string tokens);

    const std::string& tokens() const { return tokens_; }
    std::size_t permutation_count() const;
    std::size_t diffusion_count() const;
    bool leading_permutation() const { return !tokens_.empty() && tokens_.front() == 'P'; }
    bool trailing_permutation() const { return !tokens_.empty() && tokens_.back() == 'P'; }

    bool operator==(const StagePattern&) const = default;

private:
    std::string tokens_;
};

struct PermStage {
    /// Gather map used during encryption: out[j] = in[perm(j)]; decryption gathers
    /// with the inverse.
    Permutation perm;
    bool operator==(const PermStage&) const = default;
};

struct DiffStage {
    DiffusionStage diff;
    bool operator==(const DiffStage&) const = default;
};

using PipelineStage = std::variant<PermStage, DiffStage>;

/// Ordered stage list over a linearized image of fixed length, repeated `rounds`
/// times with the same keys and permutations. decrypt is the exact inverse of
/// encrypt: inverted stages in reverse order, rounds times.
class CipherPipeline {
public:
    CipherPipeline() = default;
    CipherPipeline(std::size_t length, std::vector<PipelineStage> stages, int rounds = 1);

    std::size_t length() const { return length_; }
    int rounds() const { return rounds_; }
    const std::vector<PipelineStage>& stages() const { return stages_; }

    std::vector<std::uint8_t> encrypt(std::span<const std::uint8_t> plain) const;
    std::vector<std::uint8_t> decrypt(std::span<const std::uint8_t> cipher) const;

    ByteImage encrypt(const ByteImage& plain) const;
    ByteImage decrypt(const ByteImage& cipher) const;

    bool operator==(const CipherPipeline&) const = default;

private:
    std::size_t length_ = 0;
    std::vector<PipelineStage> stages_;
    int rounds_ = 1;
};

/// Builds a plaintext-non-delayed pipeline from a pattern. Permutations and key
/// streams are consumed in pattern order; counts must match the pattern. Permutations
/// are encryption-side gather maps.
CipherPipeline build_pndcc(const StagePattern& pattern,
                           std::vector<Permutation> perms,
                           std::vector<KeyStream> keys,
                           int rounds = 1);

/// Same shape, but every diffusion uses the plaintext-delayed mod_add_xor family.
CipherPipeline build_pdcc(const StagePattern& pattern,
                          std::vector<Permutation> perms,
                          std::vector<KeyStream> keys,
                          int rounds = 1);

} // namespace chaosbreak
