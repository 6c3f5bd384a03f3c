#include <doctest.h>

#include <set>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/keyrec.hpp"
#include "chaosbreak/rng.hpp"
#include "chaosbreak/testdata.hpp"
#include "worked_example.hpp"

using namespace chaosbreak;

namespace {

CipherPipeline identity_pipeline(std::size_t n) {
    std::vector<PipelineStage> stages;
    stages.emplace_back(PermStage{Permutation::identity(n)});
    return CipherPipeline(n, std::move(stages), 1);
}

} // namespace

TEST_CASE("extraction against an identity pipeline maps each position to itself") {
    AttackOracle oracle(identity_pipeline(9), 3, 3);
    const auto ex = extract_associations(oracle);
    for (std::size_t i = 1; i <= 9; ++i)
        CHECK(ex.table.cipher_to_plain[i - 1] ==
              std::vector<std::uint32_t>{static_cast<std::uint32_t>(i)});
    CHECK(oracle.decrypt_queries() == 10);
}

TEST_CASE("worked example: extraction reproduces the published association sets") {
    Rng rng(61);
    AttackOracle oracle(worked::pipeline(rng), 9, 1);
    const auto ex = extract_associations(oracle);
    CHECK(ex.table.cipher_to_plain == worked::cipher_to_plain());
    CHECK(ex.table.plain_to_cipher == worked::plain_to_cipher());
    CHECK(ex.table.transpose_consistent());
    CHECK(oracle.decrypt_queries() == 10);
}

TEST_CASE("worked example: chain and outer permutation") {
    const auto table = AssociationTable::from_cipher_sets(9, worked::cipher_to_plain());
    const Chain chain = build_chain(table);
    CHECK(chain.size() == 9);
    CHECK(recover_outer_permutation(chain) == worked::pre_inverse());
}

TEST_CASE("worked example: serial re-indexing matches the published reduced mapping") {
    const auto table = AssociationTable::from_cipher_sets(9, worked::cipher_to_plain());
    const auto serial = reindex_by_serial(table, worked::pre_inverse());
    CHECK(serial.cipher_to_plain == worked::cipher_to_serial());
}

TEST_CASE("worked example: second pass recovers mid and post permutations exactly") {
    const auto table = AssociationTable::from_cipher_sets(9, worked::cipher_to_plain());
    const auto serial = reindex_by_serial(table, worked::pre_inverse());
    const LayerPair pair = solve_window_layer(serial);
    CHECK(pair.order_map == worked::mid_forward());
    CHECK(pair.element_map == worked::post_inverse());
}

TEST_CASE("single-node table yields the trivial chain") {
    const auto table = AssociationTable::from_cipher_sets(1, {{1}});
    const Chain chain = build_chain(table);
    CHECK(chain.size() == 1);
    CHECK(chain.node_order == std::vector<std::uint32_t>{1});
}

TEST_CASE("reduction on identity permutations gives consecutive pairs") {
    Rng rng(62);
    const std::size_t n = 16;
    std::vector<Permutation> perms{Permutation::identity(n), Permutation::identity(n),
                                   Permutation::identity(n)};
    std::vector<KeyStream> keys{random_keystream(rng, n), random_keystream(rng, n)};
    AttackOracle oracle(build_pndcc(StagePattern("PDPDP"), std::move(perms), std::move(keys)),
                        4, 4);
    const auto ex = extract_associations(oracle);
    const auto serial = reindex_by_serial(ex.table, Permutation::identity(n));
    const auto reduced = reduce_layer(serial);
    for (std::size_t k = 2; k + 1 <= n; ++k)
        CHECK(reduced.plain_to_cipher[k - 1] ==
              std::vector<std::uint32_t>{static_cast<std::uint32_t>(k - 1),
                                         static_cast<std::uint32_t>(k)});
    CHECK(reduced.plain_to_cipher[0] == std::vector<std::uint32_t>{1});
}

TEST_CASE("association invariants on random five-stage instances") {
    Rng rng(63);
    for (std::size_t n : {std::size_t{9}, std::size_t{64}, std::size_t{256}}) {
        for (int trial = 0; trial < (n == 256 ? 5 : 20); ++trial) {
            AttackOracle oracle(random_pndcc(rng, StagePattern("PDPDP"), n), n, 1);
            const auto ex = extract_associations(oracle);
            CHECK(ex.table.transpose_consistent());
            CHECK(ex.table.max_plain_set_size() <= 4);
            std::size_t small_sets = 0;
            for (const auto& s : ex.table.plain_to_cipher)
                if (s.size() < 3) ++small_sets;
            CHECK(small_sets >= 1);
        }
    }
}

TEST_CASE("chain existence on random five-stage instances") {
    Rng rng(64);
    for (std::size_t n : {std::size_t{9}, std::size_t{64}, std::size_t{256}}) {
        const int trials = n == 256 ? 20 : 40;
        for (int trial = 0; trial < trials; ++trial) {
            AttackOracle oracle(random_pndcc(rng, StagePattern("PDPDP"), n), n, 1);
            const auto ex = extract_associations(oracle);
            const Chain chain = build_chain(ex.table);
            CHECK(chain.size() == n);
            std::set<std::uint32_t> nodes(chain.node_order.begin(), chain.node_order.end());
            CHECK(nodes.size() == n);
        }
    }
}

TEST_CASE("full chain attack on a five-stage 16x16 instance") {
    Rng rng(65);
    const auto pipe = random_pndcc(rng, StagePattern("PDPDP"), 256);
    AttackOracle oracle(pipe, 16, 16);
    const auto result = chain_attack(oracle, StagePattern("PDPDP"), 16, 16);
    CHECK(result.decrypt_queries == 257);
    CHECK(oracle.decrypt_queries() == 257);
    REQUIRE(result.layer("pre_inverse") != nullptr);
    for (int trial = 0; trial < 200; ++trial) {
        const ByteImage c = random_image(rng, 16, 16);
        CHECK(result.assembled.decrypt(c) == pipe.decrypt(c));
    }
}

TEST_CASE("chain attack recovers the exact outer layer on random instances") {
    Rng rng(66);
    for (int trial = 0; trial < 10; ++trial) {
        const Permutation pre_enc = random_permutation(rng, 64);
        std::vector<Permutation> perms{pre_enc, random_permutation(rng, 64),
                                       random_permutation(rng, 64)};
        std::vector<KeyStream> keys{random_keystream(rng, 64), random_keystream(rng, 64)};
        const auto pipe = build_pndcc(StagePattern("PDPDP"), perms, keys);
        AttackOracle oracle(pipe, 8, 8);
        const auto result = chain_attack(oracle, StagePattern("PDPDP"), 8, 8);
        REQUIRE(result.layer("pre_inverse") != nullptr);
        CHECK(*result.layer("pre_inverse") == pre_enc.inverted());
    }
}

TEST_CASE("four-stage diffusion-first pattern is recovered") {
    Rng rng(67);
    const auto pipe = random_pndcc(rng, StagePattern("DPDP"), 256);
    AttackOracle oracle(pipe, 16, 16);
    const auto result = chain_attack(oracle, StagePattern("DPDP"), 16, 16);
    CHECK(result.decrypt_queries == 257);
    for (int trial = 0; trial < 200; ++trial) {
        const ByteImage c = random_image(rng, 16, 16);
        CHECK(result.assembled.decrypt(c) == pipe.decrypt(c));
    }
}

TEST_CASE("three-stage pattern falls to the chain attack as well") {
    Rng rng(68);
    const auto pipe = random_pndcc(rng, StagePattern("PDP"), 256);
    AttackOracle oracle(pipe, 16, 16);
    const auto result = chain_attack(oracle, StagePattern("PDP"), 16, 16);
    for (int trial = 0; trial < 100; ++trial) {
        const ByteImage c = random_image(rng, 16, 16);
        CHECK(result.assembled.decrypt(c) == pipe.decrypt(c));
    }
}

TEST_CASE("plaintext-delayed target produces no chain") {
    Rng rng(69);
    const auto pipe = random_pdcc(rng, StagePattern("PDPDP"), 256);
    AttackOracle oracle(pipe, 16, 16);
    const auto ex = extract_associations(oracle);
    CHECK(ex.table.mean_cipher_set_size() > 128.0);
    CHECK_THROWS_AS(build_chain(ex.table), NoChainError);

    AttackOracle oracle2(pipe, 16, 16);
    CHECK_THROWS_AS(chain_attack(oracle2, StagePattern("PDPDP"), 16, 16), NoChainError);
}
