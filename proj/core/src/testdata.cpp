#include "chaosbreak/testdata.hpp"

#include <algorithm>
#include <cmath>

namespace chaosbreak {

Permutation random_permutation(Rng& rng, std::size_t n) {
    std::vector<std::uint32_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::uint32_t>(i + 1);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(m[i - 1], m[j]);
    }
    return Permutation(std::move(m));
}

KeyStream random_keystream(Rng& rng, std::size_t n) {
    KeyStream k;
    k.values.resize(n);
    for (auto& v : k.values) v = rng.next_byte();
    return k;
}

ByteImage random_image(Rng& rng, std::size_t width, std::size_t height) {
    std::vector<std::uint8_t> data(width * height);
    for (auto& v : data) v = rng.next_byte();
    return ByteImage(width, height, std::move(data));
}

ByteImage natural_test_image(std::size_t width, std::size_t height) {
    std::vector<std::uint8_t> data(width * height);
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            const double x = static_cast<double>(c) / w;
            const double y = static_cast<double>(r) / h;
            double v = 96.0 + 48.0 * x + 20.0 * y;
            v += 70.0 * std::exp(-((x - 0.32) * (x - 0.32) + (y - 0.38) * (y - 0.38)) / 0.045);
            v -= 85.0 * std::exp(-((x - 0.70) * (x - 0.70) + (y - 0.64) * (y - 0.64)) / 0.02);
            v += 18.0 * std::sin(6.3 * x) * std::cos(4.1 * y + 0.7);
            // faint deterministic grain so the histogram is not banded
            v += static_cast<double>((r * 7 + c * 13) % 5) - 2.0;
            data[r * width + c] =
                static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return ByteImage(width, height, std::move(data));
}

namespace {

CipherPipeline random_pattern_pipeline(Rng& rng, const StagePattern& pattern,
                                       std::size_t length, int rounds, bool delayed) {
    std::vector<Permutation> perms;
    std::vector<KeyStream> keys;
    for (char c : pattern.tokens()) {
        if (c == 'P')
            perms.push_back(random_permutation(rng, length));
        else
            keys.push_back(random_keystream(rng, length));
    }
    return delayed ? build_pdcc(pattern, std::move(perms), std::move(keys), rounds)
                   : build_pndcc(pattern, std::move(perms), std::move(keys), rounds);
}

} // namespace

CipherPipeline random_pndcc(Rng& rng, const StagePattern& pattern, std::size_t length,
                            int rounds) {
    return random_pattern_pipeline(rng, pattern, length, rounds, false);
}

CipherPipeline random_pdcc(Rng& rng, const StagePattern& pattern, std::size_t length,
                           int rounds) {
    return random_pattern_pipeline(rng, pattern, length, rounds, true);
}

} // namespace chaosbreak
