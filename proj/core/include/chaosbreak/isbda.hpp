#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chaosbreak/keystream.hpp"
#include "chaosbreak/oracle.hpp"
#include "chaosbreak/permutation.hpp"
#include "chaosbreak/pipeline.hpp"

namespace chaosbreak {

/// Probe values for the impulse scan: the base plaintext is all base_value, each
/// impulse image flips one position to impulse_value. base_value != impulse_value.
struct ImpulsePair {
    std::uint8_t base_value = 0;
    std::uint8_t impulse_value = 1;

    /// Differential step height (impulse_value - base_value) mod 256.
    std::uint8_t diff() const {
        return static_cast<std::uint8_t>(impulse_value - base_value);
    }
};

struct IsbdaOptions {
    ImpulsePair probe;
    /// Positions probed for the step condition before committing to the full scan.
    std::size_t probe_sample = 4;
    /// Extra encrypt queries allowed to split duplicate response columns.
    std::size_t ambiguity_budget = 8;
};

/// Decides whether a ciphertext differential is a permuted step. The nonzero entries
/// of a true step of height d are ceil(c/2) copies of d and floor(c/2) copies of
/// 256-d (counted over c = #nonzero), invariant under the post-permutation. Returns
/// the step onset k1 = M*N + 1 - c, or nullopt when the pattern is violated.
std::optional<std::size_t> check_step_output(std::span<const std::uint8_t> delta_c,
                                             std::uint8_t diff);

/// Base response plus one impulse response per position, all against the encrypt
/// oracle: exactly M*N + 1 queries.
struct ImpulseScan {
    ImpulsePair probe;
    std::vector<std::uint8_t> base_cipher;               // C for the all-base plaintext
    std::vector<std::vector<std::uint8_t>> impulse_cipher; // [k0-1] = C for impulse at k0
    Permutation pre_map;                                 // k0 -> k1, decryption-side pre-permutation
};

/// Runs the impulse scan and recovers the pre-permutation as the map k0 -> k1.
/// Sampled positions are checked first; a step-condition violation aborts the scan
/// with an AttackError naming the offending position.
ImpulseScan run_impulse_scan(AttackOracle& oracle, std::size_t width, std::size_t height,
                             const IsbdaOptions& opts = {});

Permutation recover_pre_permutation(AttackOracle& oracle, std::size_t width,
                                    std::size_t height, const IsbdaOptions& opts = {});

/// One decrypt query on the all-zero ciphertext; closed form for the mod_sub family.
/// Cross-checks the byte multiset of the scan's base response and raises an
/// AttackError on family mismatch.
KeyStream recover_diffusion_key(AttackOracle& oracle, const Permutation& pre_perm,
                                const ImpulseScan& scan);

/// Matches each output position's response column against the recomputed
/// pre-post-permutation intermediates; duplicate columns are split with extra
/// targeted queries (none are needed for the mod_sub family).
Permutation recover_post_permutation(AttackOracle& oracle, const Permutation& pre_perm,
                                     const KeyStream& key, const ImpulseScan& scan,
                                     const IsbdaOptions& opts = {});

/// Recovered three-stage cipher. Both permutations are the decryption-side gather
/// maps (pre_perm sends plaintext position k0 to intermediate position k1).
struct RecoveredCipher {
    Permutation pre_perm;
    KeyStream diffusion_key;
    Permutation post_perm;

    /// Encryption-order pipeline equivalent to the recovered stages.
    CipherPipeline assemble() const;
};

struct IsbdaResult {
    RecoveredCipher recovered;
    std::uint64_t scan_encrypt_queries = 0;  // M*N + 1 on success
    std::uint64_t extra_encrypt_queries = 0; // ambiguity resolution, normally 0
    std::uint64_t decrypt_queries = 0;       // 1: the all-zero ciphertext
};

IsbdaResult isbda_attack(AttackOracle& oracle, std::size_t width, std::size_t height,
                         const IsbdaOptions& opts = {});

} // namespace chaosbreak
