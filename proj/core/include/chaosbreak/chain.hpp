#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chaosbreak/keystream.hpp"
#include "chaosbreak/oracle.hpp"
#include "chaosbreak/permutation.hpp"
#include "chaosbreak/pipeline.hpp"

namespace chaosbreak {

/// Positional sensitivity map gathered by chosen-ciphertext perturbations.
/// cipher_to_plain[i-1] lists the 1-based plaintext positions whose decryption changes
/// when ciphertext position i is perturbed; plain_to_cipher is the transpose.
struct AssociationTable {
    std::size_t length = 0;
    std::vector<std::vector<std::uint32_t>> cipher_to_plain;
    std::vector<std::vector<std::uint32_t>> plain_to_cipher;

    static AssociationTable from_cipher_sets(std::size_t length,
                                             std::vector<std::vector<std::uint32_t>> c2p);

    bool transpose_consistent() const;
    std::size_t max_plain_set_size() const;
    double mean_cipher_set_size() const;
};

/// Extraction transcript: the association table plus the decrypted responses, kept so
/// later stages (layer reduction, key recovery, verification) reuse the same
/// M*N + 1 chosen-ciphertext pairs instead of querying again.
struct ExtractionResult {
    std::uint8_t base_value = 0;
    std::uint8_t impulse_value = 1;
    AssociationTable table;
    std::vector<std::uint8_t> base_plain;                 // decryption of the all-base ciphertext
    std::vector<std::vector<std::uint8_t>> impulse_plain; // [i-1] = decryption of e^(i)
};

/// M*N + 1 decrypt queries: the monochrome base and one basis image per position.
/// An empty association set raises an AttackError (diffusion not sensitive).
/// impulse_value - base_value must be odd so that doubled perturbation paths stay
/// visible mod 256.
ExtractionResult extract_associations(AttackOracle& oracle, std::uint8_t base_value = 0,
                                      std::uint8_t impulse_value = 1);

/// A complete chain: node_order[s-1] is the node id occupying serial position s, and
/// link_blocks[s-1] the ciphertext elements introduced by that node (the dashed-circle
/// contents; adjacent nodes overlap in the previous block).
struct Chain {
    std::vector<std::uint32_t> node_order;
    std::vector<std::vector<std::uint32_t>> link_blocks;

    std::size_t size() const { return node_order.size(); }
};

struct ChainSearchStats {
    std::uint64_t steps = 0;
    std::uint64_t backtracks = 0;
    std::uint32_t chains_tried = 0; // candidate chains enumerated before acceptance
};

/// First complete chain over the table's plain_to_cipher sets, deterministic
/// (lowest-index-first branching). Throws NoChainError when none exists — the
/// expected outcome against plaintext-delayed targets.
Chain build_chain(const AssociationTable& table, ChainSearchStats* stats = nullptr);

/// Serial index of every node: map[p] = s for the node (plaintext position) p sitting
/// at chain position s — the decryption-side map of the outer permutation.
Permutation recover_outer_permutation(const Chain& chain);

/// Re-keys plain_to_cipher by serial index: set s belongs to the plaintext position at
/// chain position s. The transpose of the result is the association mapping of the
/// remaining (one-permutation-shorter) structure.
AssociationTable reindex_by_serial(const AssociationTable& table,
                                   const Permutation& outer);

/// Intersection of serially adjacent sets: entry s is table[s] n table[s+1] (last
/// entry: the set minus the previous intersection). Cardinalities drop from 4 toward
/// 2 for single-tap diffusions. `table` must already be serial-indexed.
AssociationTable reduce_layer(const AssociationTable& serial_table);

/// reduce_layer(reindex_by_serial(table, recovered)).
AssociationTable reduce_layer(const AssociationTable& table, const Permutation& recovered);

/// Result of the second chain pass over a serial-indexed table: the node order
/// (order_map[x] = serial index at chain position x, the encryption-side gather map
/// of the interior permutation) and the overlap elements (element_map[x] = ciphertext
/// position, the decryption-side map of the ciphertext-side permutation). Both layers
/// come out of one pass, which is why they are recovered simultaneously.
struct LayerPair {
    Permutation order_map;
    Permutation element_map;
};

/// Second chain pass: derives window bounds from the serial-indexed table (the
/// reduction plus a pruning fixpoint) and orders the windows. Throws NoChainError
/// when no consistent ordering exists.
LayerPair solve_window_layer(const AssociationTable& serial_table,
                             ChainSearchStats* stats = nullptr);

struct ChainAttackOptions {
    std::uint8_t base_value = 0;
    std::uint8_t impulse_value = 1;
    std::uint32_t max_candidates = 64;   // candidate chains examined per pass
    std::uint64_t step_budget = 50'000'000;
};

/// One recovered permutation layer. `role` is one of "pre_inverse" (decryption-side
/// outer map, plaintext side), "mid" (encryption-side gather map of an interior
/// permutation), "post_inverse" (decryption-side ciphertext-side map).
struct RecoveredLayer {
    std::string role;
    Permutation perm;
};

struct ChainAttackResult {
    std::vector<RecoveredLayer> layers;
    KeyStream outer_key;                  // plaintext-side diffusion
    KeyStream inner_key;                  // ciphertext-side diffusion (empty if only one)
    bool keys_gauge_free = false;         // multiple equivalent key streams existed
    ChainSearchStats stats;
    std::uint64_t decrypt_queries = 0;    // M*N + 1
    CipherPipeline assembled;             // encryption-order equivalent pipeline

    const Permutation* layer(const std::string& role) const;
};

/// Full chain attack for alternating patterns with one or two single-tap diffusions
/// ("PDP", "PDPDP", "DPDP", ...). Extracts associations once, peels permutation
/// layers from the plaintext side inward, recovers the diffusion keys from the same
/// transcript, and verifies every candidate against all stored pairs before
/// accepting it. Total decrypt queries: M*N + 1.
ChainAttackResult chain_attack(AttackOracle& oracle, const StagePattern& pattern,
                               std::size_t width, std::size_t height,
                               const ChainAttackOptions& opts = {});

} // namespace chaosbreak
