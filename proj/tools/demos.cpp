#include "demos.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

#include "chaosbreak/chain.hpp"
#include "chaosbreak/isbda.hpp"
#include "chaosbreak/keyrec.hpp"
#include "chaosbreak/oracle.hpp"
#include "chaosbreak/pgm.hpp"
#include "chaosbreak/pipeline_json.hpp"
#include "chaosbreak/rng.hpp"
#include "chaosbreak/testdata.hpp"

namespace chaosbreak::demos {

namespace {

using Sets = std::vector<std::vector<std::uint32_t>>;

// Conformance values of the 9-pixel five-stage walkthrough.
const std::vector<std::uint32_t> kPreInverse{4, 5, 2, 9, 8, 7, 6, 3, 1};
const std::vector<std::uint32_t> kMidInverse{9, 2, 4, 5, 1, 6, 3, 8, 7};
const std::vector<std::uint32_t> kMidForward{5, 2, 7, 3, 4, 6, 9, 8, 1};
const std::vector<std::uint32_t> kPostInverse{3, 6, 7, 8, 2, 1, 9, 4, 5};
const Sets kCipherToPlain{{4, 6, 7}, {1, 2, 6, 7}, {2, 3, 7, 8}, {3, 4, 5, 9}, {3, 9},
                          {3, 5, 6, 8}, {1, 5, 6, 8}, {1, 2, 8}, {4, 5}};
const Sets kPlainToCipher{{2, 7, 8}, {2, 3, 8}, {3, 4, 5, 6}, {1, 4, 9}, {4, 6, 7, 9},
                          {1, 2, 6, 7}, {1, 2, 3}, {3, 6, 7, 8}, {4, 5}};
const Sets kCipherToSerial{{6, 7, 9}, {4, 5, 6, 7}, {2, 3, 5, 6}, {1, 2, 8, 9}, {1, 2},
                           {2, 3, 7, 8}, {3, 4, 7, 8}, {3, 4, 5}, {8, 9}};

void print_sets(const char* lhs, const char* rhs, const Sets& sets) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::cout << "  {" << lhs << "(" << i + 1 << ")} -> {";
        for (std::size_t j = 0; j < sets[i].size(); ++j) {
            if (j) std::cout << ",";
            std::cout << rhs << "(" << sets[i][j] << ")";
        }
        std::cout << "}\n";
    }
}

void print_pairs(const char* name, const Permutation& p) {
    std::cout << "  " << name << ":";
    for (std::size_t a = 1; a <= p.size(); ++a) std::cout << " (" << a << "," << p.at(a) << ")";
    std::cout << "\n";
}

bool check(const char* what, bool ok, int& failures) {
    std::cout << "  [" << (ok ? "ok" : "MISMATCH") << "] " << what << "\n";
    if (!ok) ++failures;
    return ok;
}

} // namespace

int worked_example(std::uint64_t seed, nlohmann::json& report) {
    int failures = 0;
    Rng rng(seed);

    std::vector<Permutation> perms{Permutation(kPreInverse).inverted(),
                                   Permutation(kMidForward),
                                   Permutation(kPostInverse).inverted()};
    std::vector<KeyStream> keys{random_keystream(rng, 9), random_keystream(rng, 9)};
    const auto pipe = build_pndcc(StagePattern("PDPDP"), std::move(perms), std::move(keys), 1);
    AttackOracle oracle(pipe, 9, 1);

    std::cout << "nine-pixel five-stage walkthrough (seed " << seed << ")\n\n";
    std::cout << "association sets from " << 9 + 1 << " chosen ciphertexts:\n";
    const auto ex = extract_associations(oracle);
    print_sets("C", "P", ex.table.cipher_to_plain);
    check("association sets match the expected mapping",
          ex.table.cipher_to_plain == kCipherToPlain, failures);

    std::cout << "\ntransposed (plaintext to ciphertext) sets:\n";
    print_sets("P", "C", ex.table.plain_to_cipher);
    check("transpose matches the expected mapping",
          ex.table.plain_to_cipher == kPlainToCipher, failures);

    std::cout << "\ncomplete chain and outer permutation:\n";
    const Chain chain = build_chain(ex.table);
    const Permutation outer = recover_outer_permutation(chain);
    print_pairs("outer inverse", outer);
    check("outer permutation is recovered exactly", outer == Permutation(kPreInverse),
          failures);

    std::cout << "\nassociations re-indexed by serial position:\n";
    const auto serial = reindex_by_serial(ex.table, outer);
    print_sets("C", "P1", serial.cipher_to_plain);
    check("serial mapping matches the expected reduced table",
          serial.cipher_to_plain == kCipherToSerial, failures);

    std::cout << "\nsecond chain pass over the reduced windows:\n";
    const LayerPair second = solve_window_layer(serial);
    print_pairs("mid", second.order_map);
    print_pairs("post inverse", second.element_map);
    check("mid permutation is recovered exactly",
          second.order_map == Permutation(kMidForward), failures);
    check("post permutation is recovered exactly",
          second.element_map == Permutation(kPostInverse), failures);

    std::cout << "\ndiffusion key recovery from the same transcript:\n";
    std::vector<RecoveredLayer> layers{{"pre_inverse", outer},
                                       {"mid", second.order_map},
                                       {"post_inverse", second.element_map}};
    std::vector<KnownPair> pairs;
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{2}}) {
        KnownPair p;
        p.cipher.assign(9, ex.base_value);
        if (i >= 1) p.cipher[i - 1] = ex.impulse_value;
        p.plain = i == 0 ? ex.base_plain : ex.impulse_plain[i - 1];
        pairs.push_back(std::move(p));
    }
    const RecoveredKeys rec = recover_diffusion_keys(StagePattern("PDPDP"), layers, pairs);
    const auto candidate =
        assemble_pipeline(StagePattern("PDPDP"), layers, rec.outer_key, rec.inner_key, 9);
    bool equal = true;
    for (int trial = 0; trial < 256 && equal; ++trial) {
        std::vector<std::uint8_t> c(9);
        for (auto& v : c) v = rng.next_byte();
        equal = candidate.decrypt(c) == pipe.decrypt(c);
    }
    check("assembled pipeline decrypts identically to the target", equal, failures);
    std::cout << "  decrypt queries used: " << oracle.decrypt_queries() << " (expected "
              << 9 + 1 << ")\n";
    check("query budget is M*N+1", oracle.decrypt_queries() == 10, failures);

    report["recovered"] = {{"pre_inverse", outer.to_one_based()},
                           {"mid", second.order_map.to_one_based()},
                           {"post_inverse", second.element_map.to_one_based()}};
    report["decrypt_queries"] = oracle.decrypt_queries();
    report["success"] = failures == 0;
    std::cout << (failures == 0 ? "\nall intermediates match\n"
                                : "\nWALKTHROUGH FAILED\n");
    return failures == 0 ? 0 : 1;
}

int break3(std::size_t width, std::size_t height, std::uint64_t seed,
           const std::string& image_path, const std::string& outdir,
           nlohmann::json& report) {
    namespace fs = std::filesystem;
    const std::size_t n = width * height;
    Rng rng(seed);

    const ByteImage plain = image_path.empty() ? natural_test_image(width, height)
                                               : load_pgm(image_path);
    if (plain.width() != width || plain.height() != height)
        throw DimensionError("break3: image does not match --width/--height");

    const auto pipe = random_pndcc(rng, StagePattern("PDP"), n, 1);
    const ByteImage cipher = pipe.encrypt(plain);

    AttackOracle oracle(pipe, width, height);
    const auto start = std::chrono::steady_clock::now();
    const IsbdaResult result = isbda_attack(oracle, width, height);
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    const ByteImage deciphered = result.recovered.assemble().decrypt(cipher);
    const bool success = deciphered == plain;

    fs::create_directories(outdir);
    const auto out = [&](const char* name) { return (fs::path(outdir) / name).string(); };
    save_pgm(plain, out("plain.pgm"));
    save_pgm(cipher, out("cipher.pgm"));
    save_pgm(deciphered, out("deciphered.pgm"));
    save_pipeline(pipe, out("pipeline.json"));

    std::cout << "three-stage break at " << width << "x" << height << " (seed " << seed
              << ")\n";
    std::cout << "  chosen-plaintext queries: " << result.scan_encrypt_queries
              << " (expected " << n + 1 << ")\n";
    std::cout << "  extra queries: " << result.extra_encrypt_queries
              << ", decrypt queries: " << result.decrypt_queries << "\n";
    std::cout << "  wall time: " << elapsed << " ms\n";
    std::cout << "  deciphered == plaintext: " << (success ? "yes" : "NO") << "\n";
    std::cout << "  wrote plain.pgm, cipher.pgm, deciphered.pgm, pipeline.json under "
              << outdir << "\n";

    report["width"] = width;
    report["height"] = height;
    report["scan_encrypt_queries"] = result.scan_encrypt_queries;
    report["extra_encrypt_queries"] = result.extra_encrypt_queries;
    report["decrypt_queries"] = result.decrypt_queries;
    report["wall_ms"] = elapsed;
    report["outputs"] = {out("plain.pgm"), out("cipher.pgm"), out("deciphered.pgm"),
                         out("pipeline.json")};
    report["success"] = success;
    return success ? 0 : 1;
}

} // namespace chaosbreak::demos
