#include <doctest.h>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/keyrec.hpp"
#include "chaosbreak/rng.hpp"
#include "chaosbreak/testdata.hpp"
#include "worked_example.hpp"

using namespace chaosbreak;

namespace {

std::vector<RecoveredLayer> truth_layers(const CipherPipeline& pipe,
                                         const StagePattern& pattern) {
    std::vector<RecoveredLayer> layers;
    std::size_t diff_seen = 0;
    const std::size_t diff_count = pattern.diffusion_count();
    std::size_t stage_idx = 0;
    for (char c : pattern.tokens()) {
        const auto& stage = pipe.stages()[stage_idx++];
        if (c == 'P') {
            const auto& p = std::get<PermStage>(stage).perm;
            if (diff_seen == 0)
                layers.push_back({"pre_inverse", p.inverted()});
            else if (diff_seen == diff_count)
                layers.push_back({"post_inverse", p.inverted()});
            else
                layers.push_back({"mid", p});
        }
        if (c == 'D') ++diff_seen;
    }
    return layers;
}

std::vector<KnownPair> mono_pairs(const CipherPipeline& pipe, std::size_t n,
                                  std::initializer_list<std::uint8_t> values) {
    std::vector<KnownPair> pairs;
    for (std::uint8_t v : values) {
        KnownPair p;
        p.cipher.assign(n, v);
        p.plain = pipe.decrypt(p.cipher);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

} // namespace

TEST_CASE("all-zero hidden keys recover as all-zero streams") {
    Rng rng(71);
    const std::size_t n = 16;
    std::vector<Permutation> perms{random_permutation(rng, n), random_permutation(rng, n),
                                   random_permutation(rng, n)};
    std::vector<KeyStream> zero{KeyStream{std::vector<std::uint8_t>(n, 0), {}},
                                KeyStream{std::vector<std::uint8_t>(n, 0), {}}};
    const auto pipe = build_pndcc(StagePattern("PDPDP"), perms, zero);
    const auto keys = recover_diffusion_keys(StagePattern("PDPDP"),
                                             truth_layers(pipe, StagePattern("PDPDP")),
                                             mono_pairs(pipe, n, {0, 85, 170}));
    CHECK(keys.outer_key.values == std::vector<std::uint8_t>(n, 0));
    CHECK(keys.inner_key.values == std::vector<std::uint8_t>(n, 0));
    CHECK(keys.gauge_free); // every inner byte has a compensating outer shift
}

TEST_CASE("recovered keys decrypt like the hidden worked-example pipeline") {
    Rng rng(72);
    const auto pipe = worked::pipeline(rng);
    const StagePattern pattern("PDPDP");
    const auto keys = recover_diffusion_keys(pattern, truth_layers(pipe, pattern),
                                             mono_pairs(pipe, 9, {0, 85, 170}));
    const auto candidate = assemble_pipeline(pattern, truth_layers(pipe, pattern),
                                             keys.outer_key, keys.inner_key, 9);
    for (int trial = 0; trial < 100; ++trial) {
        const ByteImage c = random_image(rng, 9, 1);
        CHECK(candidate.decrypt(c) == pipe.decrypt(c));
    }
}

TEST_CASE("sequential solve matches a brute-force pair enumeration at one position") {
    Rng rng(73);
    const std::size_t n = 9;
    const auto pipe = worked::pipeline(rng);
    const StagePattern pattern("PDPDP");
    const auto layers = truth_layers(pipe, pattern);
    const auto pairs = mono_pairs(pipe, n, {0, 85, 170});
    const auto keys = recover_diffusion_keys(pattern, layers, pairs);

    // Independent check at k = 1: enumerate all (inner, outer) byte pairs against
    // the three systems directly.
    const Permutation* post_inv = nullptr;
    const Permutation* mid = nullptr;
    const Permutation* pre_inv = nullptr;
    for (const auto& l : layers) {
        if (l.role == "post_inverse") post_inv = &l.perm;
        if (l.role == "mid") mid = &l.perm;
        if (l.role == "pre_inverse") pre_inv = &l.perm;
    }
    REQUIRE((post_inv && mid && pre_inv));
    const Permutation mid_inv = mid->inverted();
    const std::size_t j1 = mid_inv.at(1);

    std::vector<std::pair<int, int>> survivors;
    for (int inner = 0; inner < 256; ++inner) {
        for (int outer = 0; outer < 256; ++outer) {
            bool ok = true;
            for (const auto& pair : pairs) {
                const auto c2 = post_inv->apply(pair.cipher);
                const auto p1 = pre_inv->inverted().apply(pair.plain);
                const std::uint8_t prev = j1 >= 2 ? c2[j1 - 2] : 0;
                const std::uint8_t p2 = static_cast<std::uint8_t>(
                    c2[j1 - 1] + prev + static_cast<std::uint8_t>(inner));
                if (static_cast<std::uint8_t>(p2 + outer) != p1[0]) {
                    ok = false;
                    break;
                }
            }
            if (ok) survivors.emplace_back(inner, outer);
        }
    }
    CHECK(survivors.size() == 256); // one outer byte per inner byte: pure gauge
    CHECK(survivors.front() ==
          std::pair<int, int>(0, int(keys.outer_key.values[0])));
    CHECK(keys.inner_key.values[j1 - 1] == 0);
}

TEST_CASE("model mismatch is reported") {
    Rng rng(74);
    const std::size_t n = 16;
    const auto pdcc = random_pdcc(rng, StagePattern("PDPDP"), n);
    const StagePattern pattern("PDPDP");
    const auto layers = truth_layers(pdcc, pattern);
    CHECK_THROWS_AS(recover_diffusion_keys(pattern, layers, mono_pairs(pdcc, n, {0, 85, 170})),
                    AttackError);
}

TEST_CASE("verify_equivalence accepts the hidden pipeline and rejects mutants") {
    Rng rng(75);
    const std::size_t n = 64;
    const auto pipe = random_pndcc(rng, StagePattern("PDP"), n);
    AttackOracle oracle(pipe, 8, 8);
    CHECK(verify_equivalence(pipe, oracle, 50).equivalent);

    auto stages = pipe.stages();
    auto& diff = std::get<DiffStage>(stages[1]).diff;
    diff.key.values[10] = static_cast<std::uint8_t>(diff.key.values[10] + 1);
    const CipherPipeline mutant(n, std::move(stages), 1);
    const auto report = verify_equivalence(mutant, oracle, 50);
    CHECK_FALSE(report.equivalent);
    CHECK(report.first_mismatch_position.has_value());
}

TEST_CASE("equivalent key representations verify as equivalent") {
    Rng rng(76);
    const std::size_t n = 64;
    const Permutation pre = random_permutation(rng, n);
    const Permutation post = random_permutation(rng, n);
    const KeyStream key = random_keystream(rng, n);

    // K(1) and C(0) trade off in the single-tap family.
    DiffusionStage a(DiffusionFamily::mod_sub(), key, {37}, {});
    KeyStream shifted = key;
    shifted.values[0] = static_cast<std::uint8_t>(shifted.values[0] + 37);
    DiffusionStage b(DiffusionFamily::mod_sub(), shifted, {0}, {});

    std::vector<PipelineStage> sa{PermStage{pre}, DiffStage{a}, PermStage{post}};
    std::vector<PipelineStage> sb{PermStage{pre}, DiffStage{b}, PermStage{post}};
    AttackOracle oracle(CipherPipeline(n, std::move(sa), 1), 8, 8);
    CHECK(verify_equivalence(CipherPipeline(n, std::move(sb), 1), oracle, 100).equivalent);
}

TEST_CASE("standalone recovery issues exactly three monochrome queries") {
    Rng rng(77);
    const std::size_t n = 64;
    const auto pipe = random_pndcc(rng, StagePattern("PDPDP"), n);
    AttackOracle oracle(pipe, 8, 8);
    const StagePattern pattern("PDPDP");
    const auto keys =
        recover_diffusion_keys(oracle, pattern, truth_layers(pipe, pattern));
    CHECK(keys.extra_decrypt_queries == 3);
    const auto candidate = assemble_pipeline(pattern, truth_layers(pipe, pattern),
                                             keys.outer_key, keys.inner_key, n);
    for (int trial = 0; trial < 100; ++trial) {
        const ByteImage c = random_image(rng, 8, 8);
        CHECK(candidate.decrypt(c) == pipe.decrypt(c));
    }
}
