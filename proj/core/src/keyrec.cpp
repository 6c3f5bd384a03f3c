#include "chaosbreak/keyrec.hpp"

#include <algorithm>
#include <string>

#include "chaosbreak/errors.hpp"
#include "chaosbreak/rng.hpp"

namespace chaosbreak {

namespace {

const Permutation* find_layer(const std::vector<RecoveredLayer>& layers,
                              const std::string& role) {
    for (const auto& l : layers)
        if (l.role == role) return &l.perm;
    return nullptr;
}

struct SolveView {
    // Per pair: ciphertext after the ciphertext-side permutation (decryption order)
    // and the plaintext re-indexed to the level just after the outer permutation.
    std::vector<std::vector<std::uint8_t>> c2;
    std::vector<std::vector<std::uint8_t>> p1;
};

SolveView make_view(const StagePattern& pattern, const std::vector<RecoveredLayer>& layers,
                    const std::vector<KnownPair>& pairs, std::size_t n) {
    const Permutation* pre_inv = find_layer(layers, "pre_inverse");
    const Permutation* post_inv = find_layer(layers, "post_inverse");
    if (pattern.leading_permutation() && !pre_inv)
        throw AttackError("key recovery: missing pre_inverse layer");
    if (pattern.trailing_permutation() && !post_inv)
        throw AttackError("key recovery: missing post_inverse layer");

    SolveView view;
    for (const auto& pair : pairs) {
        if (pair.cipher.size() != n || pair.plain.size() != n)
            throw DimensionError("key recovery: pair length mismatch");
        view.c2.push_back(post_inv ? post_inv->apply(pair.cipher) : pair.cipher);
        view.p1.push_back(pre_inv ? pre_inv->inverted().apply(pair.plain) : pair.plain);
    }
    return view;
}

} // namespace

RecoveredKeys recover_diffusion_keys(const StagePattern& pattern,
                                     const std::vector<RecoveredLayer>& layers,
                                     const std::vector<KnownPair>& pairs) {
    if (pairs.size() < 3)
        throw AttackError("key recovery: needs three chosen-ciphertext pairs");
    const std::size_t n = pairs[0].cipher.size();
    const std::size_t npairs = pairs.size();
    const SolveView view = make_view(pattern, layers, pairs, n);

    RecoveredKeys out;

    if (pattern.diffusion_count() == 1) {
        // P1(k) = C2(k) + C2(k-1) + K(k); the first pair gives K directly, the
        // others must agree.
        out.outer_key.values.resize(n);
        for (std::size_t k = 1; k <= n; ++k) {
            const std::uint8_t prev0 = k >= 2 ? view.c2[0][k - 2] : 0;
            const std::uint8_t key = static_cast<std::uint8_t>(
                view.p1[0][k - 1] - view.c2[0][k - 1] - prev0);
            for (std::size_t q = 1; q < npairs; ++q) {
                const std::uint8_t prev = k >= 2 ? view.c2[q][k - 2] : 0;
                if (static_cast<std::uint8_t>(view.c2[q][k - 1] + prev + key) !=
                    view.p1[q][k - 1])
                    throw AttackError("key recovery: pair disagreement at position " +
                                      std::to_string(k) + " (model mismatch)");
            }
            out.outer_key.values[k - 1] = key;
        }
        return out;
    }

    if (pattern.diffusion_count() != 2)
        throw AttackError("key recovery: unsupported diffusion count");

    const Permutation* mid = find_layer(layers, "mid");
    if (!mid) throw AttackError("key recovery: missing mid layer");
    const Permutation mid_inv = mid->inverted(); // u(k): decryption-side interior map

    // P1(k) = P2(u(k)) + P2(u(k-1)) + K1(k), P1(1) = P2(u(1)) + K1(1),
    // P2(j)  = C2(j) + C2(j-1) + K2(j), with zero initial conditions. At step k the
    // only fresh inner unknown is K2(u(k)); enumerate it, derive K1(k) from the
    // first pair, and let the other pairs prune.
    out.outer_key.values.resize(n);
    out.inner_key.values.resize(n);
    std::vector<bool> inner_known(n + 1, false);

    auto partial_sum = [&](std::size_t q, std::size_t j) -> std::uint8_t {
        // C2(j) + C2(j-1), the key-free part of P2(j).
        const std::uint8_t prev = j >= 2 ? view.c2[q][j - 2] : 0;
        return static_cast<std::uint8_t>(view.c2[q][j - 1] + prev);
    };

    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t jk = mid_inv.at(k);
        std::vector<std::uint8_t> fixed(npairs); // everything except K2(u(k)) and K1(k)
        for (std::size_t q = 0; q < npairs; ++q) {
            std::uint8_t acc = partial_sum(q, jk);
            if (k >= 2) {
                const std::size_t jprev = mid_inv.at(k - 1);
                acc = static_cast<std::uint8_t>(acc + partial_sum(q, jprev) +
                                                out.inner_key.values[jprev - 1]);
            }
            fixed[q] = acc;
        }

        int survivors = 0;
        std::uint8_t chosen_inner = 0, chosen_outer = 0;
        for (int candidate = 0; candidate < 256; ++candidate) {
            const std::uint8_t kappa = static_cast<std::uint8_t>(candidate);
            const std::uint8_t k1 =
                static_cast<std::uint8_t>(view.p1[0][k - 1] - fixed[0] - kappa);
            bool ok = true;
            for (std::size_t q = 1; q < npairs; ++q) {
                if (static_cast<std::uint8_t>(fixed[q] + kappa + k1) != view.p1[q][k - 1]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                if (survivors == 0) {
                    chosen_inner = kappa;
                    chosen_outer = k1;
                }
                ++survivors;
            }
        }
        if (survivors == 0)
            throw AttackError("key recovery: no inner-key candidate at position " +
                              std::to_string(k) + " (model mismatch)");
        if (survivors > 1) out.gauge_free = true;

        out.inner_key.values[jk - 1] = chosen_inner;
        out.outer_key.values[k - 1] = chosen_outer;
        inner_known[jk] = true;
    }

    for (std::size_t j = 1; j <= n; ++j)
        if (!inner_known[j])
            throw AttackError("key recovery: inner key position " + std::to_string(j) +
                              " never visited (mid layer is not a bijection?)");
    return out;
}

RecoveredKeys recover_diffusion_keys(AttackOracle& oracle, const StagePattern& pattern,
                                     const std::vector<RecoveredLayer>& layers,
                                     std::uint8_t v1, std::uint8_t v2) {
    if (v1 == v2 || v1 == 0 || v2 == 0)
        throw std::invalid_argument("key recovery: monochrome values must be distinct and nonzero");
    const std::size_t n = oracle.length();
    std::vector<KnownPair> pairs;
    const std::uint64_t before = oracle.decrypt_queries();
    for (std::uint8_t v : {std::uint8_t{0}, v1, v2}) {
        KnownPair p;
        p.cipher.assign(n, v);
        p.plain = oracle.query_decrypt(ByteImage::filled(oracle.width(), oracle.height(), v)).data();
        pairs.push_back(std::move(p));
    }
    RecoveredKeys keys = recover_diffusion_keys(pattern, layers, pairs);
    keys.extra_decrypt_queries = oracle.decrypt_queries() - before;
    return keys;
}

CipherPipeline assemble_pipeline(const StagePattern& pattern,
                                 const std::vector<RecoveredLayer>& layers,
                                 const KeyStream& outer_key, const KeyStream& inner_key,
                                 std::size_t length) {
    const Permutation* pre_inv = find_layer(layers, "pre_inverse");
    const Permutation* mid = find_layer(layers, "mid");
    const Permutation* post_inv = find_layer(layers, "post_inverse");

    std::vector<PipelineStage> stages;
    std::size_t diff_index = 0;
    const std::size_t diff_count = pattern.diffusion_count();
    bool seen_diffusion = false;
    for (char c : pattern.tokens()) {
        if (c == 'P') {
            const bool leading = !seen_diffusion;
            const bool trailing = diff_index == diff_count;
            const Permutation* p = leading && pattern.leading_permutation() ? pre_inv
                                   : trailing                               ? post_inv
                                                                            : mid;
            if (!p) throw AttackError("assemble_pipeline: missing permutation layer");
            // pre/post layers are decryption-side maps, the interior layer is already
            // the encryption-side gather map.
            stages.emplace_back(PermStage{p == mid ? *p : p->inverted()});
        } else {
            seen_diffusion = true;
            const KeyStream& key = diff_index == 0 ? outer_key : inner_key;
            stages.emplace_back(DiffStage{DiffusionStage(DiffusionFamily::mod_sub(), key)});
            ++diff_index;
        }
    }
    return CipherPipeline(length, std::move(stages), 1);
}

EquivalenceReport verify_equivalence(const CipherPipeline& candidate, AttackOracle& oracle,
                                     std::uint64_t trials, std::uint64_t seed) {
    const std::size_t w = oracle.width();
    const std::size_t h = oracle.height();
    const std::size_t n = w * h;

    EquivalenceReport report;
    auto check = [&](const ByteImage& cipher, const char* what) {
        ++report.trials;
        const ByteImage want = oracle.query_decrypt(cipher);
        const ByteImage got = candidate.decrypt(cipher);
        if (want == got) return true;
        for (std::size_t k = 1; k <= n; ++k) {
            if (want.pixel(k) != got.pixel(k)) {
                report.first_mismatch_position = k;
                break;
            }
        }
        report.detail = std::string("mismatch on ") + what;
        return false;
    };

    ByteImage probe = ByteImage::filled(w, h, 0);
    if (!check(probe, "all-zero ciphertext")) return report;
    probe = ByteImage::filled(w, h, 255);
    if (!check(probe, "all-255 ciphertext")) return report;
    probe = ByteImage::filled(w, h, 0);
    probe.pixel(1) = 1;
    if (!check(probe, "impulse at first position")) return report;
    probe = ByteImage::filled(w, h, 0);
    probe.pixel(n) = 1;
    if (!check(probe, "impulse at last position")) return report;

    Rng rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (!check(random_image(rng, w, h), "random ciphertext")) return report;
    }
    report.equivalent = true;
    return report;
}

} // namespace chaosbreak
