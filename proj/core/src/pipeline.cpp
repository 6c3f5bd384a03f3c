#include "chaosbreak/pipeline.hpp"

#include <string>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

StagePattern::StagePattern(std::string tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw DimensionError("StagePattern: empty pattern");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        const char c = tokens_[i];
        if (c != 'P' && c != 'D')
            throw DimensionError("StagePattern: token '" + std::string(1, c) +
                                 "' (expected P or D)");
        if (i > 0 && tokens_[i - 1] == c)
            throw DimensionError("StagePattern: stages must alternate, got \"" + tokens_ + "\"");
    }
    if (diffusion_count() == 0)
        throw DimensionError("StagePattern: at least one diffusion stage required");
}

std::size_t StagePattern::permutation_count() const {
    std::size_t n = 0;
    for (char c : tokens_) n += (c == 'P');
    return n;
}

std::size_t StagePattern::diffusion_count() const {
    std::size_t n = 0;
    for (char c : tokens_) n += (c == 'D');
    return n;
}

CipherPipeline::CipherPipeline(std::size_t length, std::vector<PipelineStage> stages,
                               int rounds)
    : length_(length), stages_(std::move(stages)), rounds_(rounds) {
    if (length_ == 0) throw DimensionError("CipherPipeline: length must be positive");
    if (rounds_ < 1) throw DimensionError("CipherPipeline: rounds must be >= 1");
    for (const auto& stage : stages_) {
        if (const auto* p = std::get_if<PermStage>(&stage)) {
            if (p->perm.size() != length_)
                throw DimensionError("CipherPipeline: permutation size != pipeline length");
        } else {
            std::get<DiffStage>(stage).diff.validate(length_);
        }
    }
}

std::vector<std::uint8_t> CipherPipeline::encrypt(std::span<const std::uint8_t> plain) const {
    if (plain.size() != length_)
        throw DimensionError("encrypt: input length " + std::to_string(plain.size()) +
                             " != pipeline length " + std::to_string(length_));
    std::vector<std::uint8_t> buf(plain.begin(), plain.end());
    for (int r = 0; r < rounds_; ++r) {
        for (const auto& stage : stages_) {
            if (const auto* p = std::get_if<PermStage>(&stage))
                buf = p->perm.apply(buf);
            else
                buf = diffuse_forward(std::get<DiffStage>(stage).diff, buf);
        }
    }
    return buf;
}

std::vector<std::uint8_t> CipherPipeline::decrypt(std::span<const std::uint8_t> cipher) const {
    if (cipher.size() != length_)
        throw DimensionError("decrypt: input length " + std::to_string(cipher.size()) +
                             " != pipeline length " + std::to_string(length_));
    std::vector<std::uint8_t> buf(cipher.begin(), cipher.end());
    for (int r = 0; r < rounds_; ++r) {
        for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
            if (const auto* p = std::get_if<PermStage>(&*it))
                buf = p->perm.inverted().apply(buf);
            else
                buf = diffuse_inverse(std::get<DiffStage>(*it).diff, buf);
        }
    }
    return buf;
}

ByteImage CipherPipeline::encrypt(const ByteImage& plain) const {
    return ByteImage(plain.width(), plain.height(), encrypt(std::span(plain.data())));
}

ByteImage CipherPipeline::decrypt(const ByteImage& cipher) const {
    return ByteImage(cipher.width(), cipher.height(), decrypt(std::span(cipher.data())));
}

namespace {

CipherPipeline build_pattern(const StagePattern& pattern, std::vector<Permutation> perms,
                             std::vector<KeyStream> keys, int rounds, DiffusionFamily family) {
    if (perms.size() != pattern.permutation_count())
        throw DimensionError("build: pattern \"" + pattern.tokens() + "\" needs " +
                             std::to_string(pattern.permutation_count()) + " permutations, got " +
                             std::to_string(perms.size()));
    if (keys.size() != pattern.diffusion_count())
        throw DimensionError("build: pattern \"" + pattern.tokens() + "\" needs " +
                             std::to_string(pattern.diffusion_count()) + " key streams, got " +
                             std::to_string(keys.size()));
    std::size_t length = !perms.empty() ? perms.front().size() : keys.front().size();
    std::vector<PipelineStage> stages;
    stages.reserve(pattern.tokens().size());
    std::size_t pi = 0, ki = 0;
    for (char c : pattern.tokens()) {
        if (c == 'P')
            stages.emplace_back(PermStage{std::move(perms[pi++])});
        else
            stages.emplace_back(DiffStage{DiffusionStage(family, std::move(keys[ki++]))});
    }
    return CipherPipeline(length, std::move(stages), rounds);
}

} // namespace

CipherPipeline build_pndcc(const StagePattern& pattern, std::vector<Permutation> perms,
                           std::vector<KeyStream> keys, int rounds) {
    return build_pattern(pattern, std::move(perms), std::move(keys), rounds,
                         DiffusionFamily::mod_sub());
}

CipherPipeline build_pdcc(const StagePattern& pattern, std::vector<Permutation> perms,
                          std::vector<KeyStream> keys, int rounds) {
    return build_pattern(pattern, std::move(perms), std::move(keys), rounds,
                         DiffusionFamily::mod_add_xor());
}

} // namespace chaosbreak
