#include "chaosbreak/diffusion.hpp"

#include <string>

#include "chaosbreak/errors.hpp"

namespace chaosbreak {

namespace {

// C(j) for j <= 0 comes from the stage's initial conditions: init[-j] = C(-(-j)).
inline std::uint8_t tap(const std::vector<std::uint8_t>& produced,
                        const std::vector<std::uint8_t>& initial, std::ptrdiff_t j) {
    if (j >= 1) return produced[static_cast<std::size_t>(j - 1)];
    return initial[static_cast<std::size_t>(-j)];
}

inline std::uint8_t rotl1(std::uint8_t v) {
    return static_cast<std::uint8_t>((v << 1) | (v >> 7));
}

} // namespace

DiffusionFamily DiffusionFamily::mod_sub(int cipher_taps) {
    if (cipher_taps < 1) throw DimensionError("mod_sub: memory depth must be >= 1");
    return DiffusionFamily{DiffusionKind::mod_sub, cipher_taps, 0};
}

DiffusionFamily DiffusionFamily::mod_add_xor() {
    return DiffusionFamily{DiffusionKind::mod_add_xor, 1, 1};
}

DiffusionStage::DiffusionStage(DiffusionFamily fam, KeyStream k)
    : family(fam), key(std::move(k)),
      initial_ciphertext(static_cast<std::size_t>(fam.memory_depth_cipher), 0),
      initial_plaintext(static_cast<std::size_t>(fam.memory_depth_plain), 0) {}

DiffusionStage::DiffusionStage(DiffusionFamily fam, KeyStream k,
                               std::vector<std::uint8_t> init_c,
                               std::vector<std::uint8_t> init_p)
    : family(fam), key(std::move(k)), initial_ciphertext(std::move(init_c)),
      initial_plaintext(std::move(init_p)) {}

void DiffusionStage::validate(std::size_t length) const {
    if (key.size() != length)
        throw DimensionError("DiffusionStage: key length " + std::to_string(key.size()) +
                             " != sequence length " + std::to_string(length));
    if (initial_ciphertext.size() != static_cast<std::size_t>(family.memory_depth_cipher))
        throw DimensionError("DiffusionStage: ciphertext initial conditions != memory depth");
    if (initial_plaintext.size() != static_cast<std::size_t>(family.memory_depth_plain))
        throw DimensionError("DiffusionStage: plaintext initial conditions != memory depth");
    if (family.kind == DiffusionKind::mod_sub && family.memory_depth_plain != 0)
        throw DimensionError("mod_sub family has no plaintext delay taps");
    if (family.kind == DiffusionKind::mod_add_xor &&
        (family.memory_depth_cipher != 1 || family.memory_depth_plain != 1))
        throw DimensionError("mod_add_xor family is fixed at m = n = 1");
}

std::vector<std::uint8_t> diffuse_forward(const DiffusionStage& stage,
                                          std::span<const std::uint8_t> plain) {
    stage.validate(plain.size());
    const std::size_t n = plain.size();
    std::vector<std::uint8_t> cipher;
    cipher.reserve(n);

    switch (stage.family.kind) {
    case DiffusionKind::mod_sub: {
        const int m = stage.family.memory_depth_cipher;
        for (std::size_t k = 1; k <= n; ++k) {
            std::uint8_t acc = static_cast<std::uint8_t>(plain[k - 1] - stage.key.at(k));
            for (int i = 1; i <= m; ++i)
                acc = static_cast<std::uint8_t>(
                    acc - tap(cipher, stage.initial_ciphertext,
                              static_cast<std::ptrdiff_t>(k) - i));
            cipher.push_back(acc);
        }
        break;
    }
    case DiffusionKind::mod_add_xor: {
        // C(k) = ((P(k) - P(k-1) + K(k)) mod 256) xor rotl(C(k-1), 1); the rotation
        // decorrelates successive feedback masks.
        std::uint8_t prev_p = stage.initial_plaintext[0];
        std::uint8_t prev_c = stage.initial_ciphertext[0];
        for (std::size_t k = 1; k <= n; ++k) {
            const std::uint8_t mixed =
                static_cast<std::uint8_t>(plain[k - 1] - prev_p + stage.key.at(k));
            const std::uint8_t c = static_cast<std::uint8_t>(mixed ^ rotl1(prev_c));
            cipher.push_back(c);
            prev_p = plain[k - 1];
            prev_c = c;
        }
        break;
    }
    }
    return cipher;
}

std::vector<std::uint8_t> diffuse_inverse(const DiffusionStage& stage,
                                          std::span<const std::uint8_t> cipher) {
    stage.validate(cipher.size());
    const std::size_t n = cipher.size();
    std::vector<std::uint8_t> plain;
    plain.reserve(n);

    switch (stage.family.kind) {
    case DiffusionKind::mod_sub: {
        const int m = stage.family.memory_depth_cipher;
        auto ctap = [&](std::ptrdiff_t j) -> std::uint8_t {
            if (j >= 1) return cipher[static_cast<std::size_t>(j - 1)];
            return stage.initial_ciphertext[static_cast<std::size_t>(-j)];
        };
        for (std::size_t k = 1; k <= n; ++k) {
            std::uint8_t acc = static_cast<std::uint8_t>(cipher[k - 1] + stage.key.at(k));
            for (int i = 1; i <= m; ++i)
                acc = static_cast<std::uint8_t>(acc + ctap(static_cast<std::ptrdiff_t>(k) - i));
            plain.push_back(acc);
        }
        break;
    }
    case DiffusionKind::mod_add_xor: {
        // P(k) = P(k-1) + ((C(k) xor rotl(C(k-1), 1)) - K(k))
        std::uint8_t prev_p = stage.initial_plaintext[0];
        std::uint8_t prev_c = stage.initial_ciphertext[0];
        for (std::size_t k = 1; k <= n; ++k) {
            const std::uint8_t p = static_cast<std::uint8_t>(
                prev_p + static_cast<std::uint8_t>(
                             static_cast<std::uint8_t>(cipher[k - 1] ^ rotl1(prev_c)) -
                             stage.key.at(k)));
            plain.push_back(p);
            prev_p = p;
            prev_c = cipher[k - 1];
        }
        break;
    }
    }
    return plain;
}

std::vector<std::uint8_t> pdcc_diffuse(const DiffusionStage& stage,
                                       std::span<const std::uint8_t> data,
                                       DiffuseDirection direction) {
    if (!stage.family.plaintext_delayed())
        throw DimensionError("pdcc_diffuse: family has no plaintext delay tap");
    return direction == DiffuseDirection::forward ? diffuse_forward(stage, data)
                                                  : diffuse_inverse(stage, data);
}

} // namespace chaosbreak
