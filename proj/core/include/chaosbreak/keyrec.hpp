#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/keystream.hpp"
#include "chaosbreak/oracle.hpp"
#include "chaosbreak/permutation.hpp"
#include "chaosbreak/pipeline.hpp"

namespace chaosbreak {

/// One known chosen-ciphertext pair (linearized).
struct KnownPair {
    std::vector<std::uint8_t> cipher;
    std::vector<std::uint8_t> plain;
};

struct RecoveredKeys {
    KeyStream outer_key;          // diffusion nearest the plaintext
    KeyStream inner_key;          // diffusion nearest the ciphertext; empty if only one
    bool gauge_free = false;      // every candidate byte survived at some position
    std::uint64_t extra_decrypt_queries = 0;
};

/// Solves the per-position systems for the mod_sub diffusions once every permutation
/// layer is known. Positions are solved sequentially (k depends only on k-1); at each
/// position the inner-key byte is enumerated (<= 256 candidates), the outer-key byte
/// follows in closed form from the first pair, and the remaining pairs act as checks.
/// Zero survivors raises an AttackError (model mismatch); several survivors are
/// resolved by the deterministic smallest byte and flagged gauge_free.
///
/// `pairs` needs at least three known pairs; when absent, the three monochrome
/// ciphertexts 0, v1, v2 are queried from the oracle (the standalone path).
RecoveredKeys recover_diffusion_keys(const StagePattern& pattern,
                                     const std::vector<RecoveredLayer>& layers,
                                     const std::vector<KnownPair>& pairs);

RecoveredKeys recover_diffusion_keys(AttackOracle& oracle, const StagePattern& pattern,
                                     const std::vector<RecoveredLayer>& layers,
                                     std::uint8_t v1 = 85, std::uint8_t v2 = 170);

/// Assembles the encryption-order pipeline from recovered layers and keys.
CipherPipeline assemble_pipeline(const StagePattern& pattern,
                                 const std::vector<RecoveredLayer>& layers,
                                 const KeyStream& outer_key, const KeyStream& inner_key,
                                 std::size_t length);

struct EquivalenceReport {
    bool equivalent = false;
    std::uint64_t trials = 0;
    std::optional<std::size_t> first_mismatch_position; // 1-based, in the first failing trial
    std::string detail;
};

/// Compares candidate.decrypt against the oracle on `trials` seeded random
/// ciphertexts plus structured probes (all-zero, all-255, single impulses at the
/// first and last positions).
EquivalenceReport verify_equivalence(const CipherPipeline& candidate, AttackOracle& oracle,
                                     std::uint64_t trials, std::uint64_t seed = 0x5eed);

} // namespace chaosbreak
