#include "chaosbreak/isbda.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "chaosbreak/errors.hpp"
#include "chaosbreak/parallel.hpp"
#include "chaosbreak/rng.hpp"

namespace chaosbreak {

std::optional<std::size_t> check_step_output(std::span<const std::uint8_t> delta_c,
                                             std::uint8_t diff) {
    const std::size_t n = delta_c.size();
    std::size_t count = 0;
    std::size_t count_diff = 0;
    std::size_t count_comp = 0;
    const std::uint8_t comp = static_cast<std::uint8_t>(-diff);
    for (std::uint8_t v : delta_c) {
        if (v == 0) continue;
        ++count;
        if (v == diff) ++count_diff;
        if (v == comp) ++count_comp;
    }
    if (count == 0) return std::nullopt;

    // A permuted step of height d carries ceil(c/2) values d and floor(c/2) values
    // 256-d, nothing else.
    if (diff == comp) {
        if (count_diff != count) return std::nullopt;
    } else {
        if (count_diff != (count + 1) / 2 || count_comp != count / 2 ||
            count_diff + count_comp != count)
            return std::nullopt;
    }
    return n + 1 - count;
}

namespace {

std::vector<std::uint8_t> mod_delta(std::span<const std::uint8_t> a,
                                    std::span<const std::uint8_t> b) {
    std::vector<std::uint8_t> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = static_cast<std::uint8_t>(a[i] - b[i]);
    return d;
}

std::vector<std::size_t> probe_positions(std::size_t n, std::size_t sample) {
    std::vector<std::size_t> out;
    if (sample == 0) return out;
    sample = std::min(sample, n);
    for (std::size_t i = 0; i < sample; ++i) {
        const std::size_t k0 =
            sample == 1 ? 1 : 1 + i * (n - 1) / (sample - 1);
        if (out.empty() || out.back() != k0) out.push_back(k0);
    }
    return out;
}

} // namespace

ImpulseScan run_impulse_scan(AttackOracle& oracle, std::size_t width, std::size_t height,
                             const IsbdaOptions& opts) {
    const std::size_t n = width * height;
    if (n != oracle.length())
        throw DimensionError("isbda: dimensions do not match the oracle");
    if (opts.probe.base_value == opts.probe.impulse_value)
        throw std::invalid_argument("isbda: base and impulse values must differ");

    ImpulseScan scan;
    scan.probe = opts.probe;
    const std::uint8_t diff = opts.probe.diff();

    const ByteImage base = ByteImage::filled(width, height, opts.probe.base_value);
    scan.base_cipher = oracle.query_encrypt(base).data();
    scan.impulse_cipher.assign(n, {});

    std::vector<std::size_t> step_onset(n, 0); // k1 per k0, 0 = violated

    auto query_position = [&](std::size_t k0) {
        ByteImage impulse = base;
        impulse.pixel(k0) = opts.probe.impulse_value;
        auto cipher = oracle.query_encrypt(impulse).data();
        const auto delta = mod_delta(cipher, scan.base_cipher);
        const auto k1 = check_step_output(delta, diff);
        scan.impulse_cipher[k0 - 1] = std::move(cipher);
        if (k1) step_onset[k0 - 1] = *k1;
        return k1.has_value();
    };

    // Cheap probe pass before committing to the full scan.
    std::vector<bool> done(n, false);
    for (std::size_t k0 : probe_positions(n, opts.probe_sample)) {
        if (done[k0 - 1]) continue;
        done[k0 - 1] = true;
        if (!query_position(k0))
            throw AttackError("isbda: step condition violated at plaintext position " +
                              std::to_string(k0));
    }

    std::vector<std::size_t> remaining;
    remaining.reserve(n);
    for (std::size_t k0 = 1; k0 <= n; ++k0)
        if (!done[k0 - 1]) remaining.push_back(k0);
    parallel_for(remaining.size(), [&](std::size_t idx) { query_position(remaining[idx]); });

    std::vector<std::uint32_t> map(n);
    std::vector<bool> hit(n, false);
    for (std::size_t k0 = 1; k0 <= n; ++k0) {
        const std::size_t k1 = step_onset[k0 - 1];
        if (k1 == 0)
            throw AttackError("isbda: step condition violated at plaintext position " +
                              std::to_string(k0));
        if (hit[k1 - 1])
            throw AttackError("isbda: impulse positions " + std::to_string(k0) +
                              " and an earlier one map to the same step onset " +
                              std::to_string(k1));
        hit[k1 - 1] = true;
        map[k0 - 1] = static_cast<std::uint32_t>(k1);
    }
    scan.pre_map = Permutation(std::move(map));
    return scan;
}

Permutation recover_pre_permutation(AttackOracle& oracle, std::size_t width,
                                    std::size_t height, const IsbdaOptions& opts) {
    return run_impulse_scan(oracle, width, height, opts).pre_map;
}

KeyStream recover_diffusion_key(AttackOracle& oracle, const Permutation& pre_perm,
                                const ImpulseScan& scan) {
    const std::size_t n = pre_perm.size();
    const ByteImage zero = ByteImage::filled(oracle.width(), oracle.height(), 0);
    const ByteImage plain = oracle.query_decrypt(zero);

    // With C == 0 the diffusion output equals the key stream; un-permuting the
    // decryption's final stage exposes it directly.
    KeyStream key{pre_perm.inverted().apply(plain).data(), {}};

    // Family sanity: the recomputed intermediate must be a permutation of the real
    // base response (the post-permutation only moves bytes).
    const DiffusionStage stage(DiffusionFamily::mod_sub(), key);
    const std::vector<std::uint8_t> base_plain(n, scan.probe.base_value);
    auto mid = diffuse_forward(stage, pre_perm.inverted().apply(base_plain));
    auto observed = scan.base_cipher;
    std::sort(mid.begin(), mid.end());
    std::sort(observed.begin(), observed.end());
    if (mid != observed)
        throw AttackError("isbda: recovered key does not reproduce the base response "
                          "(diffusion family mismatch)");
    return key;
}

namespace {

// Response matrix columns, keyed for exact matching.
std::vector<std::string> columns(const std::vector<const std::vector<std::uint8_t>*>& rows,
                                 std::size_t n) {
    std::vector<std::string> cols(n);
    for (auto& c : cols) c.reserve(rows.size());
    for (const auto* row : rows)
        for (std::size_t i = 0; i < n; ++i) cols[i].push_back(static_cast<char>((*row)[i]));
    return cols;
}

} // namespace

Permutation recover_post_permutation(AttackOracle& oracle, const Permutation& pre_perm,
                                     const KeyStream& key, const ImpulseScan& scan,
                                     const IsbdaOptions& opts) {
    const std::size_t n = pre_perm.size();
    const DiffusionStage stage(DiffusionFamily::mod_sub(), key);
    const Permutation enc_pre = pre_perm.inverted();

    // Intermediates (before the post-permutation) for every recorded query, plus the
    // recorded outputs. Column i of the intermediates must reappear as column j of
    // the outputs exactly when the post-permutation sends j to i.
    std::vector<std::vector<std::uint8_t>> mid_rows;
    std::vector<const std::vector<std::uint8_t>*> mid_ptrs, out_ptrs;
    auto add_pair = [&](const std::vector<std::uint8_t>& plain,
                        const std::vector<std::uint8_t>& out) {
        mid_rows.push_back(diffuse_forward(stage, enc_pre.apply(plain)));
        out_ptrs.push_back(&out);
    };

    const std::vector<std::uint8_t> base_plain(n, scan.probe.base_value);
    add_pair(base_plain, scan.base_cipher);
    for (std::size_t k0 = 1; k0 <= n; ++k0) {
        std::vector<std::uint8_t> impulse = base_plain;
        impulse[k0 - 1] = scan.probe.impulse_value;
        add_pair(impulse, scan.impulse_cipher[k0 - 1]);
    }

    std::vector<std::vector<std::uint8_t>> extra_plains, extra_outs;
    Rng rng(0x15bdau);
    for (std::size_t attempt = 0;; ++attempt) {
        mid_ptrs.clear();
        for (const auto& r : mid_rows) mid_ptrs.push_back(&r);
        const auto mid_cols = columns(mid_ptrs, n);

        std::unordered_map<std::string, std::uint32_t> index;
        index.reserve(n * 2);
        bool duplicate = false;
        for (std::size_t i = 0; i < n; ++i)
            if (!index.emplace(mid_cols[i], static_cast<std::uint32_t>(i + 1)).second)
                duplicate = true;
        if (!duplicate) {
            const auto out_cols = columns(out_ptrs, n);
            std::vector<std::uint32_t> map(n);
            std::vector<bool> used(n, false);
            for (std::size_t j = 0; j < n; ++j) {
                const auto it = index.find(out_cols[j]);
                if (it == index.end())
                    throw AttackError("isbda: output column " + std::to_string(j + 1) +
                                      " matches no intermediate (family mismatch)");
                if (used[it->second - 1])
                    throw AttackError("isbda: two output positions match intermediate " +
                                      std::to_string(it->second));
                used[it->second - 1] = true;
                map[j] = it->second;
            }
            return Permutation(std::move(map)).inverted(); // decryption-side map
        }

        if (attempt >= opts.ambiguity_budget)
            throw AttackError("isbda: duplicate response columns persist after " +
                              std::to_string(attempt) + " targeted queries");
        // Split duplicates with one more chosen plaintext.
        ByteImage probe = random_image(rng, oracle.width(), oracle.height());
        extra_outs.push_back(oracle.query_encrypt(probe).data());
        extra_plains.push_back(probe.data());
        mid_rows.push_back(diffuse_forward(stage, enc_pre.apply(extra_plains.back())));
        out_ptrs.push_back(&extra_outs.back());
    }
}

CipherPipeline RecoveredCipher::assemble() const {
    std::vector<PipelineStage> stages;
    stages.emplace_back(PermStage{pre_perm.inverted()});
    stages.emplace_back(DiffStage{DiffusionStage(DiffusionFamily::mod_sub(), diffusion_key)});
    stages.emplace_back(PermStage{post_perm.inverted()});
    return CipherPipeline(pre_perm.size(), std::move(stages), 1);
}

IsbdaResult isbda_attack(AttackOracle& oracle, std::size_t width, std::size_t height,
                         const IsbdaOptions& opts) {
    const std::size_t n = width * height;
    const std::uint64_t enc0 = oracle.encrypt_queries();
    const std::uint64_t dec0 = oracle.decrypt_queries();

    const ImpulseScan scan = run_impulse_scan(oracle, width, height, opts);
    const std::uint64_t scan_queries = oracle.encrypt_queries() - enc0;

    IsbdaResult result;
    result.recovered.pre_perm = scan.pre_map;
    result.recovered.diffusion_key = recover_diffusion_key(oracle, scan.pre_map, scan);
    result.recovered.post_perm = recover_post_permutation(
        oracle, scan.pre_map, result.recovered.diffusion_key, scan, opts);

    result.scan_encrypt_queries = scan_queries;
    result.extra_encrypt_queries = oracle.encrypt_queries() - enc0 - scan_queries;
    result.decrypt_queries = oracle.decrypt_queries() - dec0;

    // The assembled pipeline must reproduce every recorded response exactly.
    const CipherPipeline candidate = result.recovered.assemble();
    std::vector<std::uint8_t> base_plain(n, opts.probe.base_value);
    if (candidate.encrypt(base_plain) != scan.base_cipher)
        throw AttackError("isbda: assembled pipeline fails on the base response");
    for (std::size_t k0 = 1; k0 <= n; ++k0) {
        std::vector<std::uint8_t> impulse = base_plain;
        impulse[k0 - 1] = opts.probe.impulse_value;
        if (candidate.encrypt(impulse) != scan.impulse_cipher[k0 - 1])
            throw AttackError("isbda: assembled pipeline fails on impulse " +
                              std::to_string(k0));
    }
    return result;
}

} // namespace chaosbreak
